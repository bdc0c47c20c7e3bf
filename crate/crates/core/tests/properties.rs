use indyn_core::detect::{pair_stats, StateSystem};
use indyn_core::entropy::{separated_set, SepMode, TimeSequence};
use indyn_core::measure::{prohorov_bruteforce, prohorov_fast, random_measure, DiscreteMeasure};
use indyn_core::par::Exec;
use indyn_core::scalar::{rat, Rational, Scalar};
use indyn_core::space::{MetricSpace, Point, SpaceDescriptor};
use indyn_core::systems::{induced, zoo, MapSpec, SystemDef};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spaces() -> Vec<MetricSpace> {
    vec![
        MetricSpace::discrete(5),
        MetricSpace::interval(rat(0, 1), rat(1, 1), 16).unwrap(),
        MetricSpace::build(&SpaceDescriptor::CompactifiedIntegers { n: 5 }).unwrap(),
    ]
}

fn measures(space: &MetricSpace, seed: u64, count: usize) -> Vec<DiscreteMeasure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_measure(&mut rng, space, 6, 24)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fast_matches_oracle_and_metric_axioms(which in 0usize..3, seed in any::<u64>()) {
        let space = &spaces()[which];
        let m = measures(space, seed, 3);
        let (a, b, c) = (&m[0], &m[1], &m[2]);
        let ab = prohorov_fast(space, a, b).unwrap();
        prop_assert!(ab.eq_tol(&prohorov_bruteforce(space, a, b).unwrap()));
        prop_assert!(ab.eq_tol(&prohorov_fast(space, b, a).unwrap()));
        prop_assert!(ab.le_tol(&Scalar::ONE));
        prop_assert_eq!(ab.is_zero(), a == b);
        let ac = prohorov_fast(space, a, c).unwrap();
        let cb = prohorov_fast(space, c, b).unwrap();
        prop_assert!(ab.to_f64() <= ac.to_f64() + cb.to_f64() + 1e-12);
    }

    #[test]
    fn dirac_distance_is_truncated_metric(x in 0u32..21, y in 0u32..21) {
        let space = MetricSpace::interval(rat(-5, 1), rat(5, 1), 20).unwrap();
        let (px, py) = (Point(x), Point(y));
        let p = prohorov_fast(&space, &DiscreteMeasure::dirac(&space, px).unwrap(), &DiscreteMeasure::dirac(&space, py).unwrap()).unwrap();
        prop_assert!(p.eq_tol(&space.distance(px, py).min_total(Scalar::ONE)));
    }

    #[test]
    fn pushforward_is_linear(seed in any::<u64>(), k in 0i128..=10) {
        let sys = zoo::fig1(16).unwrap();
        let s = sys.space();
        let m = measures(s, seed, 2);
        let alpha = Rational::new(k, 10);
        let f = sys.map_at(0);
        let lhs = f.push(&DiscreteMeasure::interpolate(alpha, &m[0], &m[1]).unwrap());
        let rhs = DiscreteMeasure::interpolate(alpha, &f.push(&m[0]), &f.push(&m[1])).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn convex_path_bound(seed in any::<u64>(), i in 0i128..=12, j in 0i128..=12) {
        let space = MetricSpace::interval(rat(0, 1), rat(1, 1), 16).unwrap();
        let m = measures(&space, seed, 2);
        let (a, b) = (Rational::new(i.min(j), 12), Rational::new(i.max(j), 12));
        let p = prohorov_fast(
            &space,
            &DiscreteMeasure::interpolate(a, &m[0], &m[1]).unwrap(),
            &DiscreteMeasure::interpolate(b, &m[0], &m[1]).unwrap(),
        ).unwrap();
        prop_assert!(p.le_tol(&Scalar::Exact(b - a)));
    }

    #[test]
    fn parallel_and_sequential_agree(seed in any::<u64>()) {
        let space = MetricSpace::interval(rat(0, 1), rat(1, 1), 16).unwrap();
        let m = measures(&space, seed, 8);
        let f = |mu: &DiscreteMeasure| prohorov_fast(&space, mu, &m[0]).unwrap();
        let par: Vec<Scalar> = Exec::Parallel.map(&m, f);
        let seq: Vec<Scalar> = Exec::Sequential.map(&m, f);
        prop_assert!(par.iter().zip(&seq).all(|(p, q)| p.identical(q)));
    }

    #[test]
    fn induced_step_preserves_mass_and_grid(seed in any::<u64>(), n in 0usize..6) {
        let sys = zoo::ex34(32).unwrap();
        let mu = &measures(sys.space(), seed, 1)[0];
        let img = induced(&sys).compose(mu, n);
        let total: Rational = img.atoms().iter().map(|a| a.1).sum();
        prop_assert_eq!(total, Rational::from_integer(1));
        prop_assert!(img.fits(sys.space()));
    }

    #[test]
    fn separated_sets_are_monotone(e in 1usize..6, n in 1usize..6) {
        let sys = zoo::fig1(64).unwrap();
        let sample: Vec<usize> = (0..65).step_by(2).collect();
        let a = TimeSequence::AllIntegers;
        let eps = e as f64 / 16.0;
        let s = |eps: f64, n: usize, mode| separated_set(&sys, &sample, n, eps, &a, mode).unwrap().cardinality;
        let exact = s(eps, n, SepMode::Exact);
        prop_assert!(s(eps, n, SepMode::Greedy) <= exact);
        prop_assert!(s(eps * 2.0, n, SepMode::Exact) <= exact);
        prop_assert!(exact <= s(eps, n + 1, SepMode::Exact));
        prop_assert!(exact >= 1);
    }

    #[test]
    fn phi_bounds_are_ordered(x in 0usize..65, y in 0usize..65) {
        let sys = zoo::fig1(64).unwrap();
        let st = pair_stats(&sys, x, y, 60, &[0.05, 0.2, 0.8], 1e-9, 0.5);
        for (lo, hi) in st.phi_lower.iter().zip(&st.phi_upper) {
            prop_assert!(lo <= hi);
            prop_assert!((0.0..=1.0).contains(lo) && (0.0..=1.0).contains(hi));
        }
        for w in st.phi_upper.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        prop_assert!(st.min_distance.le_tol(&st.tail_min) && st.tail_max.le_tol(&st.max_distance));
    }
}

#[test]
fn table_maps_from_descriptor_agree_with_zoo() {
    let space = MetricSpace::two_point();
    let spec = MapSpec::table(&space, &[Point(1), Point(0)]);
    let sys = SystemDef::autonomous("swap", space, spec).unwrap();
    let zoo = zoo::swap2();
    for p in 0..2 {
        assert_eq!(StateSystem::step(&sys, 0, p), StateSystem::step(&zoo, 0, p));
    }
}

//! Values fixed by independent computation (hand derivation, brute force).

use indyn_core::detect::chains::interpolation_steps;
use indyn_core::detect::shadowing::{thm38_big_n0, thm38_n0};
use indyn_core::detect::{find_chain, ChainSearch};
use indyn_core::measure::{prohorov_bruteforce, prohorov_fast, DiscreteMeasure};
use indyn_core::scalar::{rat, Scalar};
use indyn_core::space::{MetricSpace, Point};
use indyn_core::systems::zoo;

#[test]
fn half_mixture_of_two_points() {
    // P(δb, (δa + δb)/2) = 1/2: the set {a} carries 1/2 and its 1/2-fattening misses b
    let s = MetricSpace::two_point();
    let b = DiscreteMeasure::dirac(&s, Point(1)).unwrap();
    let mix = DiscreteMeasure::from_atoms(&s, [(Point(0), rat(1, 2)), (Point(1), rat(1, 2))]).unwrap();
    assert_eq!(prohorov_fast(&s, &b, &mix).unwrap(), Scalar::exact(1, 2));
    assert_eq!(prohorov_bruteforce(&s, &b, &mix).unwrap(), Scalar::exact(1, 2));
}

#[test]
fn interval_pair_by_hand() {
    // μ = δ0, ν = (δ_{1/4} + δ_1)/2 on [0,1]: A = {0} needs ν(B(0, e)) + e >= 1,
    // giving e = 1/2 (ν(B(0,1/2)) = 1/2).
    let s = MetricSpace::interval(rat(0, 1), rat(1, 1), 4).unwrap();
    let mu = DiscreteMeasure::dirac(&s, Point(0)).unwrap();
    let nu = DiscreteMeasure::from_atoms(&s, [(Point(1), rat(1, 2)), (Point(4), rat(1, 2))]).unwrap();
    assert_eq!(prohorov_fast(&s, &mu, &nu).unwrap(), Scalar::exact(1, 2));
}

#[test]
fn fig1_orbit_prefix() {
    let sys = zoo::fig1(16).unwrap();
    let s = sys.space();
    let orbit = sys.orbit(s.resolve("-1/2").unwrap(), 6);
    let labels: Vec<&str> = orbit.iter().map(|&p| s.label(p)).collect();
    assert_eq!(labels, ["-1/2", "1", "-1", "0", "0", "0", "0"]);
}

#[test]
fn chain_constants() {
    assert_eq!(interpolation_steps(rat(1, 2)).unwrap(), 4);
    assert_eq!(interpolation_steps(rat(1, 4)).unwrap(), 8);
    assert_eq!(interpolation_steps(rat(2, 5)).unwrap(), 5);
    assert_eq!(thm38_n0(rat(1, 10)), 10);
    assert_eq!(thm38_big_n0(rat(1, 10)), 12);
    assert_eq!(zoo::golden_convergent(10_000), rat(6765, 10946));
}

#[test]
fn ex35_has_no_quarter_chain() {
    let sys = zoo::ex35(64).unwrap();
    let s = sys.space();
    let x = s.resolve("1/2").unwrap().idx();
    let y = s.resolve("1").unwrap().idx();
    assert!(matches!(
        find_chain(&sys, x, y, Scalar::exact(1, 4), 200),
        ChainSearch::Absent { certified: true, .. }
    ));
}

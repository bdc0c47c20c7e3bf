//! Sensitivity time sets `N_d(x, ε, δ)` on the base and induced levels.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PropertyVerdict, TimeSet, Witness};
use crate::error::{Error, Result};
use crate::measure::{prohorov_fast, prohorov_from_dirac, DiscreteMeasure};
use crate::par::Exec;
use crate::scalar::{Rational, Scalar};
use crate::space::Point;
use crate::systems::{induced, SystemDef};

fn base_times(sys: &SystemDef, x: Point, delta: Scalar, horizon: usize, candidates: &[Point]) -> TimeSet {
    let s = sys.space();
    let xs = sys.orbit(x, horizon);
    let mut members = BTreeSet::new();
    for &y in candidates {
        let ys = sys.orbit(y, horizon);
        for n in 1..=horizon {
            if !s.distance(xs[n], ys[n]).le_tol(&delta) {
                members.insert(n);
            }
        }
    }
    TimeSet::new(horizon, members)
}

/// `n ∈ [1, horizon]` such that some candidate `y` has
/// `d(f_0^n x, f_0^n y) > δ`. Candidates default to `B(x, ε) \ {x}`.
pub fn sensitivity_times(
    sys: &SystemDef,
    x: Point,
    eps: Scalar,
    delta: Scalar,
    horizon: usize,
    candidates: Option<&[Point]>,
) -> Result<TimeSet> {
    let s = sys.space();
    let pool: Vec<Point> = match candidates {
        Some(c) => c.iter().copied().filter(|&y| s.distance(x, y).lt_tol(&eps)).collect(),
        None => s.ball(x, eps).into_iter().filter(|&y| y != x).collect(),
    };
    if pool.is_empty() {
        return Err(Error::EmptyBall);
    }
    Ok(base_times(sys, x, delta, horizon, &pool))
}

/// Measure-level `N_P(μ, ε, δ)` over the candidates lying in `B_P(μ, ε)`.
pub fn sensitivity_times_induced(
    sys: &SystemDef,
    mu: &DiscreteMeasure,
    eps: Scalar,
    delta: Scalar,
    horizon: usize,
    candidates: &[DiscreteMeasure],
    exec: Exec,
) -> Result<TimeSet> {
    let s = sys.space();
    let ind = induced(sys);
    let dist = |a: &DiscreteMeasure, b: &DiscreteMeasure| -> Result<Scalar> {
        match a.is_dirac() {
            Some(z) => Ok(prohorov_from_dirac(s, z, b)),
            None => prohorov_fast(s, a, b),
        }
    };
    let mu_orbit = ind.orbit(mu, horizon);
    let per_candidate = exec.map(candidates, |nu| -> Result<Vec<usize>> {
        if !dist(mu, nu)?.lt_tol(&eps) {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut cur = nu.clone();
        for n in 1..=horizon {
            cur = ind.step(n - 1, &cur);
            if !dist(&mu_orbit[n], &cur)?.le_tol(&delta) {
                out.push(n);
            }
        }
        Ok(out)
    });
    let mut members = BTreeSet::new();
    for r in per_candidate {
        members.extend(r?);
    }
    Ok(TimeSet::new(horizon, members))
}

/// Candidate measures near `δ_x`: Dirac masses in `B(x, ε)` and two-point
/// measures `(1 - k/q) δ_u + (k/q) δ_v` with `u ∈ B(x, ε)`, filtered to
/// `P(δ_x, ·) < ε`.
pub fn sensitivity_candidates(sys: &SystemDef, x: Point, eps: Scalar, q: usize) -> Result<Vec<DiscreteMeasure>> {
    let s = sys.space();
    let ball: Vec<Point> = s.ball(x, eps).into_iter().collect();
    let mut out = Vec::new();
    for &u in &ball {
        out.push(DiscreteMeasure::dirac(s, u)?);
        for v in s.points().filter(|&v| v != u) {
            for k in 1..q {
                let t = Rational::new(k as i128, q as i128);
                let m = DiscreteMeasure::from_atoms(s, [(u, Rational::from_integer(1) - t), (v, t)])?;
                if prohorov_from_dirac(s, x, &m).lt_tol(&eps) {
                    out.push(m);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// One random trial of the inclusion `N_P(δ_x, ε, δ) ⊆ N_d(x, ε, δ/2)`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Lemma41Trial {
    pub x: String,
    pub eps: Scalar,
    pub delta: Scalar,
    pub measure_times: usize,
    pub base_times: usize,
    pub included: bool,
}

/// Random `(x, ε, δ)` with `ε < δ`; every trial must satisfy the inclusion.
pub fn verify_lemma41(
    sys: &SystemDef,
    trials: usize,
    horizon: usize,
    candidate_q: usize,
    seed: u64,
    exec: Exec,
) -> Result<(PropertyVerdict, Vec<Lemma41Trial>)> {
    const P: &str = "lemma41_inclusion";
    let s = sys.space();
    let diam = s.diameter().to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = 100i128;
    let mut rows = Vec::with_capacity(trials);
    for _ in 0..trials {
        let x = Point::from(rng.gen_range(0..s.len()));
        // eps, delta on a 1/100 grid of the diameter scale, eps < delta
        let scale = (diam * steps as f64).round().max(2.0) as i128;
        let e = rng.gen_range(1..scale / 2);
        let d = rng.gen_range(e + 1..=scale);
        let eps = Scalar::Exact(Rational::new(e, steps));
        let delta = Scalar::Exact(Rational::new(d, steps));
        let half = Scalar::Exact(Rational::new(d, 2 * steps));
        let ball: Vec<Point> = s.ball(x, eps).into_iter().collect();
        let base = base_times(sys, x, half, horizon, &ball);
        let cands = sensitivity_candidates(sys, x, eps, candidate_q)?;
        let dirac = DiscreteMeasure::dirac(s, x)?;
        let meas = sensitivity_times_induced(sys, &dirac, eps, delta, horizon, &cands, exec)?;
        let included = meas.is_subset(&base);
        rows.push(Lemma41Trial {
            x: s.label(x).to_string(),
            eps,
            delta,
            measure_times: meas.members.len(),
            base_times: base.members.len(),
            included,
        });
        if !included {
            let n = *meas
                .members
                .difference(&base.members)
                .next()
                .expect("nonempty difference");
            return Ok((
                PropertyVerdict::fails(
                    P,
                    Witness::Measure {
                        atoms: dirac.to_records(s),
                        time: n,
                        value: delta,
                        detail: format!("time {n} separates at measure level only (eps={eps})"),
                    },
                ),
                rows,
            ));
        }
    }
    Ok((PropertyVerdict::holds(P).with_horizon(horizon), rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::zoo;

    #[test]
    fn fig1_is_sensitive_near_quarter() {
        let sys = zoo::fig1(64).unwrap();
        let x = sys.space().snap_interval(Scalar::exact(1, 4)).unwrap();
        let t = sensitivity_times(&sys, x, Scalar::exact(1, 10), Scalar::exact(1, 2), 40, None).unwrap();
        assert!(!t.is_empty());
    }

    #[test]
    fn identity_never_separates() {
        let sys = zoo::identity(16).unwrap();
        let x = Point(8);
        let t = sensitivity_times(&sys, x, Scalar::exact(1, 5), Scalar::exact(1, 2), 20, None).unwrap();
        assert!(t.is_empty());
        let swap = zoo::swap2();
        assert!(matches!(
            sensitivity_times(&swap, Point(0), Scalar::exact(1, 2), Scalar::exact(1, 2), 5, None),
            Err(Error::EmptyBall)
        ));
    }

    #[test]
    fn lemma41_on_small_systems() {
        for sys in [zoo::swap2(), zoo::fig1(16).unwrap()] {
            let (v, rows) = verify_lemma41(&sys, 4, 30, 4, 3, Exec::default()).unwrap();
            assert_eq!(v.status, crate::detect::Status::Holds);
            assert!(rows.iter().all(|r| r.included));
        }
    }
}

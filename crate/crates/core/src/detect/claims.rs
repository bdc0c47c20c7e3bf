//! Bounded checks of specific separation and convergence statements on the
//! zoo systems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{PropertyVerdict, Witness};
use crate::error::{Error, Result};
use crate::measure::{prohorov_fast, prohorov_from_dirac, random_measure, DiscreteMeasure};
use crate::par::Exec;
use crate::scalar::{rat, Rational, Scalar};
use crate::space::{Point, PointSet};
use crate::systems::{induced, zoo, SystemDef};

/// Separation of the orbit of measures near `δ_{-1/2}` from
/// `μ₂ = (δ_{-1/2} + δ_{1/2}) / 2` under the fig1 map.
#[derive(Clone, Debug)]
pub struct Thm22Config {
    pub eps0: Rational,
    pub eps: Rational,
    pub horizon: usize,
    pub samples: usize,
    /// Weight denominator of the sampled measures.
    pub measure_q: usize,
    /// Interval grid resolution.
    pub grid_q: usize,
    pub seed: u64,
}

impl Default for Thm22Config {
    fn default() -> Self {
        Thm22Config {
            eps0: rat(1, 5),
            eps: rat(1, 4),
            horizon: 50,
            samples: 200,
            measure_q: 40,
            grid_q: 64,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm22Summary {
    pub accepted: usize,
    pub rejected: usize,
    /// Largest `ν([0, 1])` seen among accepted samples.
    pub max_right_mass: Scalar,
    /// Smallest `P(f̂^n ν, μ₂)` over samples and `0 ≤ n ≤ horizon`.
    pub min_separation: Scalar,
}

fn sample_near(rng: &mut ChaCha8Rng, space: &crate::space::MetricSpace, ball: &[Point], q: usize) -> DiscreteMeasure {
    // most mass inside the ball; a few units anywhere so the filter has work
    let outside = rng.gen_range(0..=q / 4);
    let atoms = rng.gen_range(1..=4usize);
    let mut left = q - outside;
    let mut units: Vec<(Point, usize)> = Vec::new();
    for i in 0..atoms {
        let k = if i + 1 == atoms {
            left
        } else {
            rng.gen_range(0..=left / 2)
        };
        left -= k;
        units.push((ball[rng.gen_range(0..ball.len())], k));
    }
    units.push((Point::from(rng.gen_range(0..space.len())), outside));
    let w = |k: usize| Rational::new(k as i128, q as i128);
    DiscreteMeasure::from_atoms(space, units.into_iter().map(|(p, k)| (p, w(k)))).expect("units sum to q")
}

/// Samples `ν ∈ B_P(δ_{-1/2}, ε₀)` on the weight grid, checks
/// `ν([0, 1]) ≤ ε₀` and `P(f̂^n ν, μ₂) > ε` for `0 ≤ n ≤ horizon`.
pub fn verify_thm22_separation(cfg: &Thm22Config, exec: Exec) -> Result<(PropertyVerdict, Thm22Summary)> {
    const P: &str = "thm22_separation";
    let zero = Rational::from_integer(0);
    if !(zero < cfg.eps0 && cfg.eps0 < rat(1, 4)) {
        return Err(Error::Parameter("eps0 must lie in (0, 1/4)".into()));
    }
    if !(zero < cfg.eps && cfg.eps < rat(1, 2) - cfg.eps0) {
        return Err(Error::Parameter("eps must lie in (0, 1/2 - eps0)".into()));
    }
    if cfg.measure_q == 0 || cfg.samples == 0 {
        return Err(Error::Parameter("samples and measure grid must be positive".into()));
    }
    let sys = zoo::fig1(cfg.grid_q)?;
    let s = sys.space();
    let z = s
        .interval_point(rat(-1, 2))
        .ok_or_else(|| Error::Parameter("grid misses -1/2".into()))?;
    let w = s
        .interval_point(rat(1, 2))
        .ok_or_else(|| Error::Parameter("grid misses 1/2".into()))?;
    let mu2 = DiscreteMeasure::from_atoms(s, [(z, rat(1, 2)), (w, rat(1, 2))])?;
    let right: PointSet = s.interval_range(zero, rat(1, 1));
    let eps0 = Scalar::Exact(cfg.eps0);
    let eps = Scalar::Exact(cfg.eps);
    let ball: Vec<Point> = s.ball(z, eps0).into_iter().collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut accepted = Vec::with_capacity(cfg.samples);
    let mut rejected = 0usize;
    let attempt_cap = cfg.samples * 1000;
    while accepted.len() < cfg.samples {
        if accepted.len() + rejected >= attempt_cap {
            return Err(Error::ResourceCap(format!(
                "ball sampling exceeded {attempt_cap} attempts"
            )));
        }
        let nu = sample_near(&mut rng, s, &ball, cfg.measure_q);
        if prohorov_from_dirac(s, z, &nu).lt_tol(&eps0) {
            accepted.push(nu);
        } else {
            rejected += 1;
        }
    }

    let max_right_mass = accepted.iter().map(|nu| nu.mass(&right)).max().unwrap_or(zero);
    if max_right_mass > cfg.eps0 {
        let nu = accepted
            .iter()
            .find(|nu| nu.mass(&right) > cfg.eps0)
            .expect("offender exists");
        let v = PropertyVerdict::fails(
            P,
            Witness::Measure {
                atoms: nu.to_records(s),
                time: 0,
                value: Scalar::Exact(nu.mass(&right)),
                detail: "ball measure puts more than eps0 on [0, 1]".into(),
            },
        );
        return Ok((
            v,
            Thm22Summary {
                accepted: accepted.len(),
                rejected,
                max_right_mass: Scalar::Exact(max_right_mass),
                min_separation: Scalar::ZERO,
            },
        ));
    }

    let ind = induced(&sys);
    let per_sample = exec.map(&accepted, |nu| -> Result<(Scalar, Option<usize>)> {
        let mut cur = nu.clone();
        let mut min = Scalar::ONE;
        for n in 0..=cfg.horizon {
            if n > 0 {
                cur = ind.step(n - 1, &cur);
            }
            let d = prohorov_fast(s, &cur, &mu2)?;
            min = min.min_total(d);
            if d.le_tol(&eps) {
                return Ok((min, Some(n)));
            }
        }
        Ok((min, None))
    });
    let mut min_separation = Scalar::ONE;
    for (i, r) in per_sample.into_iter().enumerate() {
        let (m, miss) = r?;
        min_separation = min_separation.min_total(m);
        if let Some(n) = miss {
            let nu = &accepted[i];
            let v = PropertyVerdict::fails(
                P,
                Witness::Measure {
                    atoms: nu.to_records(s),
                    time: n,
                    value: m,
                    detail: "orbit came within eps of the two-point measure".into(),
                },
            );
            return Ok((
                v,
                Thm22Summary {
                    accepted: accepted.len(),
                    rejected,
                    max_right_mass: Scalar::Exact(max_right_mass),
                    min_separation: m,
                },
            ));
        }
    }
    let summary = Thm22Summary {
        accepted: accepted.len(),
        rejected,
        max_right_mass: Scalar::Exact(max_right_mass),
        min_separation,
    };
    let v = PropertyVerdict::holds(P).with_horizon(cfg.horizon).with_note(format!(
        "{} samples, min separation {}",
        summary.accepted, min_separation
    ));
    Ok((v, summary))
}

/// On the compactified integers with bound `n`: every measure reaches `δ_∞`
/// exactly after `2n + 1` steps and stays there, and `P(f̂^m μ, δ_∞)` is
/// non-increasing along `checkpoints` once all mass has positive coordinate.
pub fn verify_ex56_convergence(n: usize, samples: usize, checkpoints: &[usize], seed: u64) -> Result<PropertyVerdict> {
    const P: &str = "ex56_convergence";
    let sys = zoo::zshift(n)?;
    let s = sys.space();
    let inf = s.integer_point(None).expect("compactified space");
    let dinf = DiscreteMeasure::dirac(s, inf)?;
    let ind = induced(&sys);
    if ind.step(0, &dinf) != dinf {
        return Err(Error::Parameter("shift does not fix infinity".into()));
    }
    let settle = 2 * n + 1;
    let last = checkpoints.iter().copied().max().unwrap_or(0).max(settle);
    let positive = |mu: &DiscreteMeasure| {
        mu.support()
            .all(|p| !matches!(s.integer_value(p), Some(Some(k)) if k <= 0))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mu = random_measure(&mut rng, s, 6, 60);
        let orbit = ind.orbit(&mu, last);
        if let Some(m) = (settle..=last).find(|&m| orbit[m] != dinf) {
            return Ok(PropertyVerdict::fails(
                P,
                Witness::Measure {
                    atoms: mu.to_records(s),
                    time: m,
                    value: prohorov_fast(s, &orbit[m], &dinf)?,
                    detail: "orbit has not reached the point at infinity".into(),
                },
            ));
        }
        let start = (0..=last).find(|&m| positive(&orbit[m])).unwrap_or(last);
        let mut prev: Option<Scalar> = None;
        for &m in checkpoints.iter().filter(|&&m| m >= start) {
            let d = prohorov_fast(s, &orbit[m], &dinf)?;
            if let Some(p) = prev {
                if !d.le_tol(&p) {
                    return Ok(PropertyVerdict::fails(
                        P,
                        Witness::Measure {
                            atoms: mu.to_records(s),
                            time: m,
                            value: d,
                            detail: format!("distance to infinity rose above {p}"),
                        },
                    ));
                }
            }
            prev = Some(d);
        }
    }
    Ok(PropertyVerdict::holds(P).with_horizon(last))
}

/// Looks for a time `n ≤ horizon` at which each of `f_0^n(B(a_i, ε₀))`,
/// `a_i ∈ {0, 1/3, 2/3}`, meets both `B(a_1, ε₁)` and `B(a_2, ε₁)`. Such a
/// time would contradict the obstruction; none found leaves the verdict
/// unknown beyond the horizon.
pub fn verify_circle_obstruction(
    sys: &SystemDef,
    horizon: usize,
    eps0: Rational,
    eps1: Rational,
) -> Result<PropertyVerdict> {
    const P: &str = "circle_order3_obstruction";
    let zero = Rational::from_integer(0);
    if !(zero < eps0 && eps0 < rat(1, 3)) || !(zero < eps1 && eps1 < rat(1, 3) - eps0) {
        return Err(Error::Parameter("need 0 < eps0 < 1/3 and 0 < eps1 < 1/3 - eps0".into()));
    }
    let s = sys.space();
    if s.circle_resolution().is_none() {
        return Err(Error::Parameter("obstruction check needs a circle grid".into()));
    }
    let centers = [rat(0, 1), rat(1, 3), rat(2, 3)]
        .iter()
        .map(|a| s.snap_circle(Scalar::Exact(*a)))
        .collect::<Result<Vec<_>>>()?;
    let balls: Vec<PointSet> = centers.iter().map(|&a| s.ball(a, Scalar::Exact(eps0))).collect();
    let targets: Vec<PointSet> = centers[1..].iter().map(|&a| s.ball(a, Scalar::Exact(eps1))).collect();
    let mut images = balls.clone();
    let mut both_for_first = 0usize;
    for n in 0..=horizon {
        if n > 0 {
            let m = sys.map_at(n - 1);
            images = images.iter().map(|b| m.table().image_of(b)).collect();
        }
        let meets = |img: &PointSet, t: &PointSet| img.iter().any(|p| t.contains(p));
        let all = images.iter().all(|img| targets.iter().all(|t| meets(img, t)));
        if targets.iter().all(|t| meets(&images[0], t)) {
            both_for_first += 1;
        }
        if all {
            return Ok(PropertyVerdict::fails(
                P,
                Witness::Cells {
                    u: 0,
                    v: 1,
                    detail: format!("at n = {n} every ball image meets both target balls"),
                },
            ));
        }
    }
    Ok(PropertyVerdict::unknown(
        P,
        Some(horizon),
        format!("no time up to {horizon} realises the forbidden pattern; {both_for_first} times stretch the first ball across both targets"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::Status;

    #[test]
    fn separation_holds_on_small_run() {
        let cfg = Thm22Config {
            samples: 20,
            horizon: 20,
            ..Default::default()
        };
        let (v, sum) = verify_thm22_separation(&cfg, Exec::default()).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert!(sum.max_right_mass.le_tol(&Scalar::exact(1, 5)));
        assert!(sum.min_separation.to_f64() > 0.25);
    }

    #[test]
    fn corrupted_measure_is_far_from_ball() {
        let sys = zoo::fig1(64).unwrap();
        let s = sys.space();
        let z = s.interval_point(rat(-1, 2)).unwrap();
        let w = s.interval_point(rat(1, 2)).unwrap();
        let bad = DiscreteMeasure::from_atoms(s, [(z, rat(1, 2)), (w, rat(1, 2))]).unwrap();
        assert!(prohorov_from_dirac(s, z, &bad).to_f64() >= 0.3);
    }

    #[test]
    fn thm22_rejects_bad_parameters() {
        let cfg = Thm22Config {
            eps0: rat(1, 3),
            ..Default::default()
        };
        assert!(verify_thm22_separation(&cfg, Exec::Sequential).is_err());
    }

    #[test]
    fn shift_settles_at_infinity() {
        let v = verify_ex56_convergence(10, 20, &[0, 5, 10, 15, 20, 25, 30], 1).unwrap();
        assert_eq!(v.status, Status::Holds);
    }

    #[test]
    fn circle_obstruction_not_refuted() {
        let sys = zoo::circle_wm(300, 10_000, 8).unwrap();
        let v = verify_circle_obstruction(&sys, 8, rat(1, 10), rat(1, 10)).unwrap();
        assert_eq!(v.status, Status::Unknown);
    }
}

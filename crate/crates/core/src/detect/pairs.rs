//! Finite-horizon statistics of orbit pairs.

use serde::Serialize;

use super::StateSystem;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairStats {
    pub horizon: usize,
    /// Extremes of `d(f_0^i x, f_0^i y)` over `0 ≤ i ≤ horizon`.
    pub min_distance: Scalar,
    pub max_distance: Scalar,
    /// Extremes over the tail window `horizon/2 ≤ i ≤ horizon`.
    pub tail_min: Scalar,
    pub tail_max: Scalar,
    pub thresholds: Vec<f64>,
    /// `min` / `max` over the tail window of
    /// `Φ_n(t) = #{1 ≤ i ≤ n : d_i < t} / n`.
    pub phi_lower: Vec<f64>,
    pub phi_upper: Vec<f64>,
    /// `tail_min < tol` and `tail_max > delta`.
    pub li_yorke_candidate: bool,
}

pub fn pair_stats<S: StateSystem + ?Sized>(
    sys: &S,
    x: usize,
    y: usize,
    horizon: usize,
    thresholds: &[f64],
    tol: f64,
    delta: f64,
) -> PairStats {
    let mut d = Vec::with_capacity(horizon + 1);
    let (mut a, mut b) = (x, y);
    for i in 0..=horizon {
        d.push(sys.distance(a, b));
        if i < horizon {
            a = sys.step(i, a);
            b = sys.step(i, b);
        }
    }
    let fold = |range: &[Scalar]| {
        range.iter().fold((None::<Scalar>, Scalar::ZERO), |(lo, hi), &v| {
            (Some(lo.map_or(v, |l: Scalar| l.min_total(v))), hi.max_total(v))
        })
    };
    let (min_distance, max_distance) = fold(&d);
    let tail_from = horizon / 2;
    let (tail_min, tail_max) = fold(&d[tail_from..]);
    let (min_distance, tail_min) = (min_distance.unwrap_or(Scalar::ZERO), tail_min.unwrap_or(Scalar::ZERO));
    let df: Vec<f64> = d.iter().map(Scalar::to_f64).collect();
    let mut phi_lower = Vec::with_capacity(thresholds.len());
    let mut phi_upper = Vec::with_capacity(thresholds.len());
    for &t in thresholds {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut count = 0usize;
        for n in 1..=horizon {
            if df[n] < t {
                count += 1;
            }
            if n >= tail_from.max(1) {
                let phi = count as f64 / n as f64;
                lo = lo.min(phi);
                hi = hi.max(phi);
            }
        }
        if horizon == 0 {
            (lo, hi) = (0.0, 0.0);
        }
        phi_lower.push(lo);
        phi_upper.push(hi);
    }
    PairStats {
        horizon,
        min_distance,
        max_distance,
        tail_min,
        tail_max,
        thresholds: thresholds.to_vec(),
        phi_lower,
        phi_upper,
        li_yorke_candidate: tail_min.to_f64() < tol && tail_max.to_f64() > delta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::zoo;

    #[test]
    fn equal_points_stay_together() {
        let sys = zoo::fig1(32).unwrap();
        let st = pair_stats(&sys, 5, 5, 20, &[0.1, 0.5], 1e-9, 0.1);
        assert!(st.min_distance.is_zero() && st.max_distance.is_zero());
        assert_eq!(st.phi_lower, vec![1.0, 1.0]);
    }

    #[test]
    fn shift_pair_is_asymptotic() {
        let sys = zoo::zshift(50).unwrap();
        let s = sys.space();
        let x = s.integer_point(Some(0)).unwrap().idx();
        let y = s.integer_point(Some(5)).unwrap().idx();
        let st = pair_stats(&sys, x, y, 120, &[0.01, 0.1, 0.5], 1e-9, 0.1);
        assert!(!st.li_yorke_candidate);
        assert!(st.tail_min.is_zero());
        for (lo, hi) in st.phi_lower.iter().zip(&st.phi_upper) {
            assert!(lo <= hi && (0.0..=1.0).contains(lo) && (0.0..=1.0).contains(hi));
        }
    }

    #[test]
    fn fig1_nearby_points_separate() {
        let sys = zoo::fig1(256).unwrap();
        let s = sys.space();
        let x = s.snap_interval(Scalar::exact(3, 10)).unwrap().idx();
        let st = pair_stats(&sys, x, x + 1, 100, &[0.1], 1e-9, 0.5);
        assert!(st.max_distance.to_f64() > 0.5);
    }
}

//! Exact images of closed intervals under piecewise-linear and quadratic
//! interval maps, in arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::scalar::Rational;

pub type Big = BigRational;

pub fn big(r: &Rational) -> Big {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Big,
    pub hi: Big,
}

impl Interval {
    pub fn new(lo: Big, hi: Big) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn from_rationals(lo: Rational, hi: Rational) -> Self {
        Interval::new(big(&lo), big(&hi))
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Does `self` meet the open interval `(lo, hi)`?
    pub fn meets_open(&self, lo: &Big, hi: &Big) -> bool {
        self.lo < *hi && self.hi > *lo
    }

    pub fn width(&self) -> Big {
        &self.hi - &self.lo
    }
}

/// Real-valued interval map with exactly computable interval images.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactIntervalMap {
    /// Linear interpolation through `(x, y)` knots with increasing `x`.
    PiecewiseLinear(Vec<(Big, Big)>),
    /// `a x^2 + b x + c`.
    Quadratic(Big, Big, Big),
    Identity,
}

impl ExactIntervalMap {
    pub fn eval(&self, x: &Big) -> Big {
        match self {
            ExactIntervalMap::Identity => x.clone(),
            ExactIntervalMap::Quadratic(a, b, c) => a * x * x + b * x + c,
            ExactIntervalMap::PiecewiseLinear(knots) => {
                let i = knots.windows(2).position(|w| *x <= w[1].0).unwrap_or(knots.len() - 2);
                let ((x0, y0), (x1, y1)) = (&knots[i], &knots[i + 1]);
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// Image of `[lo, hi]`: extremes are attained at the endpoints or at
    /// interior knots (resp. the parabola vertex).
    pub fn image(&self, iv: &Interval) -> Interval {
        let mut candidates = vec![self.eval(&iv.lo), self.eval(&iv.hi)];
        match self {
            ExactIntervalMap::Identity => {}
            ExactIntervalMap::PiecewiseLinear(knots) => {
                for (x, y) in knots {
                    if iv.lo < *x && *x < iv.hi {
                        candidates.push(y.clone());
                    }
                }
            }
            ExactIntervalMap::Quadratic(a, b, _) => {
                if !a.is_zero() {
                    let vertex = -b / (a * Big::from_integer(BigInt::from(2)));
                    if iv.lo < vertex && vertex < iv.hi {
                        candidates.push(self.eval(&vertex));
                    }
                }
            }
        }
        let lo = candidates.iter().min().expect("nonempty").clone();
        let hi = candidates.iter().max().expect("nonempty").clone();
        Interval::new(lo, hi)
    }

    /// `sup |f(x) - x|` over `[lo, hi]` (attained at knots/endpoints/vertex
    /// of the difference).
    pub fn sup_displacement(&self, iv: &Interval) -> Big {
        let mut points = vec![iv.lo.clone(), iv.hi.clone()];
        match self {
            ExactIntervalMap::Identity => {}
            ExactIntervalMap::PiecewiseLinear(knots) => {
                points.extend(
                    knots
                        .iter()
                        .map(|(x, _)| x.clone())
                        .filter(|x| iv.lo < *x && *x < iv.hi),
                );
            }
            ExactIntervalMap::Quadratic(a, b, _) => {
                // f(x) - x = a x^2 + (b - 1) x + c
                if !a.is_zero() {
                    let one = Big::from_integer(BigInt::from(1));
                    let vertex = -(b - one) / (a * Big::from_integer(BigInt::from(2)));
                    if iv.lo < vertex && vertex < iv.hi {
                        points.push(vertex);
                    }
                }
            }
        }
        points
            .iter()
            .map(|x| (self.eval(x) - x).abs())
            .max()
            .unwrap_or_else(Big::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn b(n: i128, d: i128) -> Big {
        big(&rat(n, d))
    }

    #[test]
    fn tent_like_image() {
        let f = ExactIntervalMap::PiecewiseLinear(vec![(b(0, 1), b(0, 1)), (b(1, 2), b(1, 1)), (b(1, 1), b(0, 1))]);
        let img = f.image(&Interval::new(b(1, 4), b(3, 4)));
        assert_eq!(img, Interval::new(b(1, 2), b(1, 1)));
        let img = f.image(&Interval::new(b(0, 1), b(1, 4)));
        assert_eq!(img, Interval::new(b(0, 1), b(1, 2)));
    }

    #[test]
    fn quadratic_image_uses_vertex() {
        // x^2 - x on [0, 1] has minimum -1/4 at 1/2
        let f = ExactIntervalMap::Quadratic(b(1, 1), b(-1, 1), b(0, 1));
        let img = f.image(&Interval::new(b(0, 1), b(1, 1)));
        assert_eq!(img, Interval::new(b(-1, 4), b(0, 1)));
    }
}

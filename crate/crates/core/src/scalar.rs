//! Exact-or-float real numbers.
//!
//! Every quantity in the crate is either an exact rational (weights, grid
//! coordinates, distances on rational grids) or a 64-bit float (distances on
//! spaces whose metric involves transcendental functions). Arithmetic stays
//! exact while both operands are exact and degrades to `f64` otherwise.
//! Comparisons that involve a float use the absolute tolerance [`TOL`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational type used for weights and grid coordinates.
pub type Rational = Ratio<i128>;

/// Comparison tolerance applied whenever a float is involved.
pub const TOL: f64 = 1e-12;

/// Shorthand constructor for a reduced rational `num / den`.
pub fn rat(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Copy, Debug)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub const ZERO: Scalar = Scalar::Exact(Ratio::new_raw(0, 1));
    pub const ONE: Scalar = Scalar::Exact(Ratio::new_raw(1, 1));

    pub fn exact(num: i128, den: i128) -> Self {
        Scalar::Exact(rat(num, den))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Scalar::Exact(r) => Some(*r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn abs(self) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    /// Tolerant comparison: exact when both sides are exact, otherwise values
    /// within [`TOL`] compare equal.
    pub fn cmp_tol(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                if (a - b).abs() <= TOL {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn lt_tol(&self, other: &Scalar) -> bool {
        self.cmp_tol(other) == Ordering::Less
    }

    pub fn le_tol(&self, other: &Scalar) -> bool {
        self.cmp_tol(other) != Ordering::Greater
    }

    pub fn eq_tol(&self, other: &Scalar) -> bool {
        self.cmp_tol(other) == Ordering::Equal
    }

    /// Strict total order used when a deterministic extremum is needed.
    /// Mixed pairs compare by float value, ties broken with exact first.
    pub fn total_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => a.total_cmp(b),
            (Scalar::Exact(_), Scalar::Float(b)) => self.to_f64().total_cmp(b).then(Ordering::Less),
            (Scalar::Float(a), Scalar::Exact(_)) => a.total_cmp(&other.to_f64()).then(Ordering::Greater),
        }
    }

    pub fn max_total(self, other: Scalar) -> Scalar {
        if other.total_cmp(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn min_total(self, other: Scalar) -> Scalar {
        if other.total_cmp(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Bit-level identity (used by determinism checks).
    pub fn identical(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

/// Structural equality (exact vs exact by value, floats by bits).
impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.identical(other)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::Exact(Rational::from_integer(n as i128))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Exact values serialize as `{"num": n, "den": d}`, floats as plain numbers.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => RatRecord {
                num: *r.numer(),
                den: *r.denom(),
            }
            .serialize(serializer),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

#[derive(Serialize)]
struct RatRecord {
    num: i128,
    den: i128,
}

// untagged enums buffer their input, and the buffer has no i128 slot
#[derive(Deserialize)]
struct RatRecordIn {
    num: i64,
    den: i64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Rat(RatRecordIn),
    Int(i64),
    Float(f64),
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match ScalarRepr::deserialize(deserializer)? {
            ScalarRepr::Rat(RatRecordIn { den: 0, .. }) => Err(serde::de::Error::custom("zero denominator")),
            ScalarRepr::Rat(r) => Ok(Scalar::Exact(rat(r.num.into(), r.den.into()))),
            ScalarRepr::Int(n) => Ok(Scalar::from(n)),
            ScalarRepr::Float(x) => Ok(Scalar::Float(x)),
        }
    }
}

/// Parse `"3/4"`, `"-2"` or `"0.25"`. Decimal strings become exact rationals.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().ok()?;
        let d: i128 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Scalar::Exact(rat(n, d)));
    }
    if let Ok(n) = s.parse::<i128>() {
        return Some(Scalar::Exact(Rational::from_integer(n)));
    }
    // exact decimal expansion when short enough
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() <= 18 && frac.chars().all(|c| c.is_ascii_digit()) {
            let neg = int.starts_with('-');
            let int_abs: i128 = int.trim_start_matches(['-', '+']).parse().unwrap_or(0);
            let scale = 10i128.pow(frac.len() as u32);
            let frac_v: i128 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
            let mag = int_abs * scale + frac_v;
            return Some(Scalar::Exact(rat(if neg { -mag } else { mag }, scale)));
        }
    }
    s.parse::<f64>().ok().map(Scalar::Float)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Scalar::exact(1, 3);
        let b = Scalar::exact(1, 6);
        assert!((a + b).identical(&Scalar::exact(1, 2)));
        assert!((a - b).is_exact());
    }

    #[test]
    fn mixed_comparison_uses_tolerance() {
        let a = Scalar::exact(1, 2);
        let b = Scalar::Float(0.5 + 1e-14);
        assert!(a.eq_tol(&b));
        assert!(a.le_tol(&b) && b.le_tol(&a));
        assert!(!a.lt_tol(&Scalar::Float(0.5 + 1e-13)));
        assert!(a.lt_tol(&Scalar::Float(0.5 + 1e-9)));
    }

    #[test]
    fn total_order_is_deterministic() {
        let a = Scalar::exact(1, 2);
        let b = Scalar::Float(0.5);
        assert_eq!(a.total_cmp(&b), Ordering::Less);
        assert!(a.max_total(b).identical(&b));
        assert!(b.max_total(a).identical(&b));
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert!(parse_scalar("3/4").unwrap().identical(&Scalar::exact(3, 4)));
        assert!(parse_scalar("-0.5").unwrap().identical(&Scalar::exact(-1, 2)));
        assert!(parse_scalar("0.15").unwrap().identical(&Scalar::exact(3, 20)));
        assert!(parse_scalar("7").unwrap().identical(&Scalar::exact(7, 1)));
        assert!(parse_scalar("1/0").is_none());
    }
}

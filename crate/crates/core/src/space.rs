//! Compact metric spaces realized as finite point sets.
//!
//! Points are indices into the space's canonical order. Interval grids list
//! their points by increasing coordinate, circle grids by increasing angle
//! from 0, the compactified integers as `-N..=N` followed by `∞`.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{rat, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point(pub u32);

impl Point {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for Point {
    fn from(i: usize) -> Self {
        Point(i as u32)
    }
}

pub type PointSet = BTreeSet<Point>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Finite,
    IntervalGrid,
    CircleGrid,
    CompactifiedIntegers,
    Product,
}

/// Serializable description of a space, as found in definition files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceDescriptor {
    /// Explicit finite metric space. Without `distances` the discrete metric
    /// (all distinct points at distance 1) is used.
    Finite {
        labels: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        distances: Option<Vec<Vec<Scalar>>>,
    },
    /// `q + 1` equally spaced points on `[lo, hi]`.
    Interval { lo: Scalar, hi: Scalar, q: i64 },
    /// `q` equally spaced points on the circle of circumference 1.
    Circle { q: i64 },
    /// `{-n, ..., n} ∪ {∞}` with the circle-embedding metric.
    CompactifiedIntegers { n: i64 },
    /// Product with the max metric.
    Product { factors: Vec<SpaceDescriptor> },
}

#[derive(Clone, Debug)]
enum Repr {
    Finite { dist: Vec<Scalar> },
    Interval { lo: Rational, step: Rational, q: usize },
    Circle { q: usize },
    CompactInt { n: i64, angles: Vec<f64> },
    Product { factors: Vec<MetricSpace> },
}

#[derive(Clone, Debug)]
pub struct MetricSpace {
    kind: SpaceKind,
    repr: Repr,
    labels: Vec<String>,
    diameter: Scalar,
    descriptor: SpaceDescriptor,
}

impl PartialEq for MetricSpace {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor == other.descriptor
    }
}

fn label_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn scalar_rational(s: &Scalar, what: &str) -> Result<Rational> {
    s.as_rational()
        .ok_or_else(|| Error::Parameter(format!("{what} must be an exact rational")))
}

impl MetricSpace {
    pub fn build(descriptor: &SpaceDescriptor) -> Result<Self> {
        let (kind, repr, labels) = match descriptor {
            SpaceDescriptor::Finite { labels, distances } => {
                if labels.is_empty() {
                    return Err(Error::Parameter("finite space needs at least one point".into()));
                }
                let n = labels.len();
                let dist = match distances {
                    None => (0..n * n)
                        .map(|k| if k / n == k % n { Scalar::ZERO } else { Scalar::ONE })
                        .collect(),
                    Some(rows) => {
                        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                            return Err(Error::Parameter(format!("distance matrix must be {n}x{n}")));
                        }
                        rows.iter().flatten().copied().collect()
                    }
                };
                (SpaceKind::Finite, Repr::Finite { dist }, labels.clone())
            }
            SpaceDescriptor::Interval { lo, hi, q } => {
                if *q <= 0 {
                    return Err(Error::Parameter(format!("grid resolution q={q} must be positive")));
                }
                let lo = scalar_rational(lo, "interval endpoint")?;
                let hi = scalar_rational(hi, "interval endpoint")?;
                if lo >= hi {
                    return Err(Error::Parameter("interval needs lo < hi".into()));
                }
                let q = *q as usize;
                let step = (hi - lo) / Rational::from_integer(q as i128);
                let labels = (0..=q)
                    .map(|k| label_rational(&(lo + step * Rational::from_integer(k as i128))))
                    .collect();
                (SpaceKind::IntervalGrid, Repr::Interval { lo, step, q }, labels)
            }
            SpaceDescriptor::Circle { q } => {
                if *q <= 0 {
                    return Err(Error::Parameter(format!("circle resolution q={q} must be positive")));
                }
                let q = *q as usize;
                let labels = (0..q).map(|k| label_rational(&rat(k as i128, q as i128))).collect();
                (SpaceKind::CircleGrid, Repr::Circle { q }, labels)
            }
            SpaceDescriptor::CompactifiedIntegers { n } => {
                if *n <= 0 {
                    return Err(Error::Parameter(format!("truncation bound N={n} must be positive")));
                }
                let mut angles: Vec<f64> = (-*n..=*n).map(|k| 2.0 * (k as f64).atan()).collect();
                angles.push(PI);
                let mut labels: Vec<String> = (-*n..=*n).map(|k| k.to_string()).collect();
                labels.push("inf".to_string());
                (
                    SpaceKind::CompactifiedIntegers,
                    Repr::CompactInt { n: *n, angles },
                    labels,
                )
            }
            SpaceDescriptor::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::Parameter("product needs at least one factor".into()));
                }
                let factors: Vec<MetricSpace> = factors.iter().map(MetricSpace::build).collect::<Result<_>>()?;
                let total: usize = factors.iter().map(|f| f.len()).product();
                let mut labels = Vec::with_capacity(total);
                for i in 0..total {
                    let mut rest = i;
                    let mut parts = Vec::with_capacity(factors.len());
                    for f in factors.iter().rev() {
                        parts.push(f.label(Point::from(rest % f.len())).to_string());
                        rest /= f.len();
                    }
                    parts.reverse();
                    labels.push(format!("({})", parts.join(",")));
                }
                (SpaceKind::Product, Repr::Product { factors }, labels)
            }
        };
        let mut space = MetricSpace {
            kind,
            repr,
            labels,
            diameter: Scalar::ZERO,
            descriptor: descriptor.clone(),
        };
        space.diameter = space.compute_diameter();
        if let Repr::Finite { .. } = space.repr {
            space.check_finite_axioms()?;
        }
        Ok(space)
    }

    /// Two-point space `{a, b}` with the discrete metric.
    pub fn two_point() -> Self {
        MetricSpace::build(&SpaceDescriptor::Finite {
            labels: vec!["a".into(), "b".into()],
            distances: None,
        })
        .expect("static descriptor")
    }

    /// Discrete `n`-point space with labels `p0, p1, ...`.
    pub fn discrete(n: usize) -> Self {
        MetricSpace::build(&SpaceDescriptor::Finite {
            labels: (0..n).map(|i| format!("p{i}")).collect(),
            distances: None,
        })
        .expect("static descriptor")
    }

    pub fn interval(lo: Rational, hi: Rational, q: i64) -> Result<Self> {
        MetricSpace::build(&SpaceDescriptor::Interval {
            lo: lo.into(),
            hi: hi.into(),
            q,
        })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn descriptor(&self) -> &SpaceDescriptor {
        &self.descriptor
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(Point::from)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.idx() < self.len()
    }

    pub fn label(&self, p: Point) -> &str {
        &self.labels[p.idx()]
    }

    pub fn diameter(&self) -> Scalar {
        self.diameter
    }

    pub fn point_by_label(&self, label: &str) -> Option<Point> {
        self.labels.iter().position(|l| l == label).map(Point::from)
    }

    /// Resolve a textual point: a label, or a coordinate on grid spaces
    /// (`"-0.5"`, `"1/3"`), or `"inf"` on the compactified integers.
    pub fn resolve(&self, text: &str) -> Result<Point> {
        if let Some(p) = self.point_by_label(text) {
            return Ok(p);
        }
        if let Some(v) = crate::scalar::parse_scalar(text) {
            match self.repr {
                Repr::Interval { .. } => {
                    if let Some(r) = v.as_rational() {
                        if let Some(p) = self.interval_point(r) {
                            return Ok(p);
                        }
                    }
                }
                Repr::Circle { .. } => {
                    if let Some(r) = v.as_rational() {
                        if let Some(p) = self.circle_point(r) {
                            return Ok(p);
                        }
                    }
                }
                _ => {}
            }
        }
        Err(Error::NotInSpace(text.to_string()))
    }

    pub fn distance(&self, x: Point, y: Point) -> Scalar {
        if x == y {
            return Scalar::ZERO;
        }
        match &self.repr {
            Repr::Finite { dist } => dist[x.idx() * self.len() + y.idx()],
            Repr::Interval { step, .. } => {
                let k = (x.0 as i128 - y.0 as i128).abs();
                Scalar::Exact(*step * Rational::from_integer(k))
            }
            Repr::Circle { q } => {
                let k = (x.0 as i64 - y.0 as i64).unsigned_abs() as usize;
                let k = k.min(q - k);
                Scalar::exact(k as i128, *q as i128)
            }
            Repr::CompactInt { angles, .. } => {
                let delta = (angles[x.idx()] - angles[y.idx()]).abs();
                Scalar::Float(delta.min(2.0 * PI - delta) / PI)
            }
            Repr::Product { factors } => {
                let (xs, ys) = (self.split(x, factors), self.split(y, factors));
                factors
                    .iter()
                    .zip(xs.iter().zip(ys.iter()))
                    .map(|(f, (&a, &b))| f.distance(a, b))
                    .fold(Scalar::ZERO, Scalar::max_total)
            }
        }
    }

    fn split(&self, p: Point, factors: &[MetricSpace]) -> Vec<Point> {
        let mut rest = p.idx();
        let mut out = vec![Point(0); factors.len()];
        for (slot, f) in out.iter_mut().zip(factors.iter()).rev() {
            *slot = Point::from(rest % f.len());
            rest /= f.len();
        }
        out
    }

    /// Product coordinates of a point (one point per factor).
    pub fn components(&self, p: Point) -> Option<Vec<Point>> {
        match &self.repr {
            Repr::Product { factors } => Some(self.split(p, factors)),
            _ => None,
        }
    }

    fn compute_diameter(&self) -> Scalar {
        match &self.repr {
            Repr::Interval { step, q, .. } => Scalar::Exact(*step * Rational::from_integer(*q as i128)),
            Repr::Circle { q } => Scalar::exact((*q / 2) as i128, *q as i128),
            Repr::Product { factors } => factors
                .iter()
                .map(|f| f.diameter())
                .fold(Scalar::ZERO, Scalar::max_total),
            _ => {
                let mut best = Scalar::ZERO;
                for x in self.points() {
                    for y in self.points() {
                        best = best.max_total(self.distance(x, y));
                    }
                }
                best
            }
        }
    }

    fn check_finite_axioms(&self) -> Result<()> {
        let pts: Vec<Point> = self.points().collect();
        for &x in &pts {
            if !self.distance(x, x).is_zero() {
                return Err(Error::Parameter(format!("d({0},{0}) must be 0", self.label(x))));
            }
            for &y in &pts {
                let dxy = self.distance(x, y);
                if x != y && !Scalar::ZERO.lt_tol(&dxy) {
                    return Err(Error::Parameter(format!(
                        "d({},{}) must be positive",
                        self.label(x),
                        self.label(y)
                    )));
                }
                if !dxy.eq_tol(&self.distance(y, x)) {
                    return Err(Error::Parameter(format!(
                        "distance matrix not symmetric at ({},{})",
                        self.label(x),
                        self.label(y)
                    )));
                }
            }
        }
        if pts.len() <= 200 {
            for &x in &pts {
                for &y in &pts {
                    for &z in &pts {
                        let lhs = self.distance(x, z);
                        let rhs = self.distance(x, y) + self.distance(y, z);
                        if !lhs.le_tol(&rhs) {
                            return Err(Error::Parameter(format!(
                                "triangle inequality fails at ({},{},{})",
                                self.label(x),
                                self.label(y),
                                self.label(z)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `A^eps = { x : min_{a in A} d(x, a) < eps }` (strict).
    pub fn fatten(&self, set: &PointSet, eps: Scalar) -> Result<PointSet> {
        if set.is_empty() {
            return Err(Error::EmptyFattening);
        }
        if !Scalar::ZERO.lt_tol(&eps) {
            return Err(Error::Parameter("fattening radius must be positive".into()));
        }
        if let Some(p) = set.iter().find(|p| !self.contains(**p)) {
            return Err(Error::NotInSpace(format!("#{}", p.0)));
        }
        Ok(self
            .points()
            .filter(|&x| set.iter().any(|&a| self.distance(x, a).lt_tol(&eps)))
            .collect())
    }

    /// Open ball `B(x, eps)`.
    pub fn ball(&self, x: Point, eps: Scalar) -> PointSet {
        self.points().filter(|&y| self.distance(x, y).lt_tol(&eps)).collect()
    }

    // ---- grid helpers ----

    /// Exact coordinate of a grid point (interval: position, circle: turn fraction).
    pub fn coordinate(&self, p: Point) -> Option<Rational> {
        match &self.repr {
            Repr::Interval { lo, step, .. } => Some(*lo + *step * Rational::from_integer(p.0 as i128)),
            Repr::Circle { q } => Some(rat(p.0 as i128, *q as i128)),
            _ => None,
        }
    }

    /// Interval endpoints and step, when this is an interval grid.
    pub fn interval_bounds(&self) -> Option<(Rational, Rational, usize)> {
        match &self.repr {
            Repr::Interval { lo, step, q } => Some((*lo, *lo + *step * Rational::from_integer(*q as i128), *q)),
            _ => None,
        }
    }

    pub fn circle_resolution(&self) -> Option<usize> {
        match &self.repr {
            Repr::Circle { q } => Some(*q),
            _ => None,
        }
    }

    /// Integer truncation bound of the compactified integers.
    pub fn integer_bound(&self) -> Option<i64> {
        match &self.repr {
            Repr::CompactInt { n, .. } => Some(*n),
            _ => None,
        }
    }

    /// Point of the compactified integers: `Some(k)` for `k`, `None` for `∞`.
    pub fn integer_point(&self, value: Option<i64>) -> Option<Point> {
        let n = self.integer_bound()?;
        match value {
            None => Some(Point::from(self.len() - 1)),
            Some(k) if (-n..=n).contains(&k) => Some(Point::from((k + n) as usize)),
            Some(_) => None,
        }
    }

    /// Inverse of [`integer_point`](Self::integer_point).
    pub fn integer_value(&self, p: Point) -> Option<Option<i64>> {
        let n = self.integer_bound()?;
        if p.idx() + 1 == self.len() {
            Some(None)
        } else {
            Some(Some(p.0 as i64 - n))
        }
    }

    /// Grid point with exactly this coordinate, if any.
    pub fn interval_point(&self, x: Rational) -> Option<Point> {
        let Repr::Interval { lo, step, q } = &self.repr else {
            return None;
        };
        let k = (x - lo) / step;
        if k.is_integer() && k >= Rational::from_integer(0) && k <= Rational::from_integer(*q as i128) {
            Some(Point(*k.numer() as u32))
        } else {
            None
        }
    }

    pub fn circle_point(&self, x: Rational) -> Option<Point> {
        let q = self.circle_resolution()?;
        let k = x * Rational::from_integer(q as i128);
        if k.is_integer() {
            Some(Point(k.numer().rem_euclid(q as i128) as u32))
        } else {
            None
        }
    }

    /// Nearest interval grid point to `x`, ties toward the smaller coordinate.
    /// Values outside `[lo, hi]` (beyond float tolerance) are rejected.
    pub fn snap_interval(&self, x: Scalar) -> Result<Point> {
        let Repr::Interval { lo, step, q } = &self.repr else {
            return Err(Error::Parameter("not an interval grid".into()));
        };
        let hi = *lo + *step * Rational::from_integer(*q as i128);
        match x {
            Scalar::Exact(r) => {
                if r < *lo || r > hi {
                    return Err(Error::GridClosure(label_rational(&r)));
                }
                let pos = (r - lo) / step;
                let floor = pos.floor();
                let frac = pos - floor;
                let k = if frac > rat(1, 2) { floor + 1 } else { floor };
                Ok(Point(k.to_integer() as u32))
            }
            Scalar::Float(v) => {
                let (lo_f, hi_f) = (crate::scalar::rational_to_f64(lo), crate::scalar::rational_to_f64(&hi));
                if v < lo_f - crate::scalar::TOL || v > hi_f + crate::scalar::TOL || v.is_nan() {
                    return Err(Error::GridClosure(format!("{v}")));
                }
                let pos = (v - lo_f) / crate::scalar::rational_to_f64(step);
                let floor = pos.floor();
                let k = if pos - floor > 0.5 { floor + 1.0 } else { floor };
                Ok(Point(k.clamp(0.0, *q as f64) as u32))
            }
        }
    }

    /// Nearest circle grid point to the turn fraction `x` (taken mod 1),
    /// ties toward the smaller index.
    pub fn snap_circle(&self, x: Scalar) -> Result<Point> {
        let q = self
            .circle_resolution()
            .ok_or_else(|| Error::Parameter("not a circle grid".into()))?;
        let k = match x {
            Scalar::Exact(r) => {
                let pos = r * Rational::from_integer(q as i128);
                let floor = pos.floor();
                let frac = pos - floor;
                let k = if frac > rat(1, 2) { floor + 1 } else { floor };
                k.to_integer().rem_euclid(q as i128) as usize
            }
            Scalar::Float(v) => {
                if !v.is_finite() {
                    return Err(Error::GridClosure(format!("{v}")));
                }
                let pos = v * q as f64;
                let floor = pos.floor();
                let k = if pos - floor > 0.5 { floor + 1.0 } else { floor };
                (k as i64).rem_euclid(q as i64) as usize
            }
        };
        Ok(Point::from(k))
    }

    /// Points whose coordinate lies in the closed range `[a, b]`.
    pub fn interval_range(&self, a: Rational, b: Rational) -> PointSet {
        self.points()
            .filter(|&p| self.coordinate(p).map(|c| c >= a && c <= b).unwrap_or(false))
            .collect()
    }

    /// Distance as f64, for hot loops.
    pub fn distance_f64(&self, x: Point, y: Point) -> f64 {
        match &self.repr {
            Repr::Interval { step, .. } => (x.0 as f64 - y.0 as f64).abs() * step.to_f64().unwrap_or(f64::NAN),
            _ => self.distance(x, y).to_f64(),
        }
    }
}

impl fmt::Display for MetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Finite { .. } => write!(f, "finite space ({} points)", self.len()),
            Repr::Interval { q, .. } => {
                let (lo, hi, _) = self.interval_bounds().expect("interval");
                write!(
                    f,
                    "interval grid [{}, {}] q={q}",
                    label_rational(&lo),
                    label_rational(&hi)
                )
            }
            Repr::Circle { q } => write!(f, "circle grid q={q}"),
            Repr::CompactInt { n, .. } => write!(f, "compactified integers N={n}"),
            Repr::Product { factors } => write!(f, "product of {} spaces", factors.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(points: &[u32]) -> PointSet {
        points.iter().map(|&i| Point(i)).collect()
    }

    #[test]
    fn two_point_fattening_is_strict() {
        let s = MetricSpace::two_point();
        assert_eq!(s.diameter().to_f64(), 1.0);
        assert_eq!(s.fatten(&set(&[0]), Scalar::exact(1, 2)).unwrap(), set(&[0]));
        assert_eq!(s.fatten(&set(&[0]), Scalar::exact(3, 2)).unwrap(), set(&[0, 1]));
        // boundary: d = eps is excluded
        assert_eq!(s.fatten(&set(&[0]), Scalar::ONE).unwrap(), set(&[0]));
    }

    #[test]
    fn empty_set_cannot_be_fattened() {
        let s = MetricSpace::two_point();
        assert_eq!(s.fatten(&PointSet::new(), Scalar::ONE), Err(Error::EmptyFattening));
    }

    #[test]
    fn interval_grid_fattening() {
        let s = MetricSpace::interval(rat(0, 1), rat(1, 1), 10).unwrap();
        let half = s.resolve("0.5").unwrap();
        let fat = s.fatten(&PointSet::from([half]), Scalar::exact(3, 20)).unwrap();
        let labels: Vec<&str> = fat.iter().map(|&p| s.label(p)).collect();
        assert_eq!(labels, vec!["2/5", "1/2", "3/5"]);
    }

    #[test]
    fn interval_descriptor_points() {
        let s = MetricSpace::interval(rat(-1, 1), rat(1, 1), 4).unwrap();
        let labels: Vec<&str> = s.points().map(|p| s.label(p)).collect();
        assert_eq!(labels, vec!["-1", "-1/2", "0", "1/2", "1"]);
        assert!(s.diameter().identical(&Scalar::exact(2, 1)));
    }

    #[test]
    fn compactified_integers_metric() {
        let s = MetricSpace::build(&SpaceDescriptor::CompactifiedIntegers { n: 2 }).unwrap();
        assert_eq!(s.len(), 6);
        let inf = s.integer_point(None).unwrap();
        let one = s.integer_point(Some(1)).unwrap();
        let two = s.integer_point(Some(2)).unwrap();
        let minus_two = s.integer_point(Some(-2)).unwrap();
        assert!(s.distance(two, inf).lt_tol(&s.distance(one, inf)));
        // d(1, ∞) = (π - π/2)/π
        assert!((s.distance(one, inf).to_f64() - 0.5).abs() < 1e-15);
        // both tails approach ∞ symmetrically
        assert!(s.distance(minus_two, inf).eq_tol(&s.distance(two, inf)));
        assert!(s.diameter().le_tol(&Scalar::exact(2, 1)));
    }

    #[test]
    fn parameter_errors() {
        assert!(MetricSpace::interval(rat(0, 1), rat(1, 1), 0).is_err());
        assert!(MetricSpace::build(&SpaceDescriptor::CompactifiedIntegers { n: 0 }).is_err());
        assert!(MetricSpace::build(&SpaceDescriptor::Circle { q: -3 }).is_err());
        let bad = SpaceDescriptor::Finite {
            labels: vec!["x".into(), "y".into(), "z".into()],
            distances: Some(vec![
                vec![Scalar::ZERO, Scalar::ONE, Scalar::exact(3, 1)],
                vec![Scalar::ONE, Scalar::ZERO, Scalar::ONE],
                vec![Scalar::exact(3, 1), Scalar::ONE, Scalar::ZERO],
            ]),
        };
        assert!(MetricSpace::build(&bad).is_err());
    }

    fn check_axioms_sampled(s: &MetricSpace, samples: usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = s.len() as u32;
        for _ in 0..samples {
            let (x, y, z) = (
                Point(rng.gen_range(0..n)),
                Point(rng.gen_range(0..n)),
                Point(rng.gen_range(0..n)),
            );
            assert!(s.distance(x, x).is_zero());
            assert!(s.distance(x, y).eq_tol(&s.distance(y, x)));
            assert!(s.distance(x, z).le_tol(&(s.distance(x, y) + s.distance(y, z))));
            assert!(s.distance(x, y).le_tol(&s.diameter()));
        }
    }

    #[test]
    fn grid_metric_axioms_sampled() {
        check_axioms_sampled(&MetricSpace::interval(rat(-1, 1), rat(1, 1), 64).unwrap(), 1000);
        check_axioms_sampled(&MetricSpace::build(&SpaceDescriptor::Circle { q: 97 }).unwrap(), 1000);
        check_axioms_sampled(
            &MetricSpace::build(&SpaceDescriptor::CompactifiedIntegers { n: 30 }).unwrap(),
            1000,
        );
        let prod = MetricSpace::build(&SpaceDescriptor::Product {
            factors: vec![
                SpaceDescriptor::Interval {
                    lo: Scalar::ZERO,
                    hi: Scalar::ONE,
                    q: 4,
                },
                SpaceDescriptor::Finite {
                    labels: vec!["a".into(), "b".into()],
                    distances: None,
                },
            ],
        })
        .unwrap();
        assert_eq!(prod.len(), 10);
        check_axioms_sampled(&prod, 1000);
    }

    #[test]
    fn snapping_breaks_ties_downward() {
        let s = MetricSpace::interval(rat(0, 1), rat(1, 1), 4).unwrap();
        assert_eq!(s.label(s.snap_interval(Scalar::exact(1, 8)).unwrap()), "0");
        assert_eq!(s.label(s.snap_interval(Scalar::exact(3, 16)).unwrap()), "1/4");
        assert!(s.snap_interval(Scalar::exact(5, 4)).is_err());
        let c = MetricSpace::build(&SpaceDescriptor::Circle { q: 4 }).unwrap();
        assert_eq!(c.snap_circle(Scalar::exact(7, 8)).unwrap(), Point(3));
        assert_eq!(c.snap_circle(Scalar::exact(15, 16)).unwrap(), Point(0));
        assert_eq!(c.snap_circle(Scalar::Float(-0.25)).unwrap(), Point(3));
    }

    #[test]
    fn fattening_is_monotone_and_extensive() {
        let s = MetricSpace::interval(rat(0, 1), rat(1, 1), 20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a: PointSet = (0..rng.gen_range(1..4)).map(|_| Point(rng.gen_range(0..21))).collect();
            let mut b = a.clone();
            b.insert(Point(rng.gen_range(0..21)));
            let e1 = Scalar::exact(rng.gen_range(1..10), 40);
            let e2 = e1 + Scalar::exact(rng.gen_range(0..10), 40);
            let fa = s.fatten(&a, e1).unwrap();
            assert!(a.is_subset(&fa));
            assert!(fa.is_subset(&s.fatten(&b, e1).unwrap()));
            assert!(fa.is_subset(&s.fatten(&a, e2).unwrap()));
        }
    }
}

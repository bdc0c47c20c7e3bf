//! Self-maps of the represented spaces, non-autonomous systems built from
//! them, and the induced dynamics on measures.
//!
//! Every map is evaluated once per grid point and stored as a [`MapTable`];
//! real-valued formulas are computed exactly where possible and then snapped
//! to the grid (ties toward the smaller coordinate).

pub mod interval;
pub mod zoo;

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{prohorov_fast, DiscreteMeasure};
use crate::par::Exec;
use crate::scalar::{Rational, Scalar};
use crate::space::{MetricSpace, Point, PointSet, SpaceDescriptor, SpaceKind};

pub use zoo::{build_zoo, ZooParams, ZOO_NAMES};

/// Serializable map description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSpec {
    Identity,
    /// Linear interpolation through `[x, y]` knots covering the interval.
    PiecewiseLinear {
        knots: Vec<[Scalar; 2]>,
    },
    /// `a x^2 + b x + c` on an interval.
    Quadratic {
        a: Scalar,
        b: Scalar,
        c: Scalar,
    },
    /// `x ↦ x + angle (mod 1)` on the circle, angle in turns.
    CircleRotation {
        angle: Scalar,
    },
    /// `T(x) = x/2 + x^2/2` on the circle, or its inverse.
    CircleQuadratic {
        #[serde(default)]
        inverse: bool,
    },
    /// Explicit image labels, one per point in canonical order.
    Table {
        images: Vec<String>,
    },
    /// `n ↦ n + 1` on the truncated integers; the top integer and `∞` go to `∞`.
    CompactifiedShift,
    /// Components applied first to last.
    Composition {
        maps: Vec<MapSpec>,
    },
}

fn exact_of(s: &Scalar, what: &str) -> Result<Rational> {
    s.as_rational()
        .ok_or_else(|| Error::Parameter(format!("{what} must be exact")))
}

fn frac_part(x: Scalar) -> Scalar {
    match x {
        Scalar::Exact(r) => Scalar::Exact(r - r.floor()),
        Scalar::Float(v) => Scalar::Float(v - v.floor()),
    }
}

/// `T(x) = x/2 + x^2/2` for `x ∈ [0, 1)`.
pub fn circle_t(x: f64) -> f64 {
    0.5 * x + 0.5 * x * x
}

/// Closed-form inverse of [`circle_t`] on `[0, 1)`.
pub fn circle_t_inv(y: f64) -> f64 {
    (-1.0 + (1.0 + 8.0 * y).sqrt()) / 2.0
}

impl MapSpec {
    pub fn identity() -> Self {
        MapSpec::Identity
    }

    pub fn piecewise_linear(knots: &[(Rational, Rational)]) -> Self {
        MapSpec::PiecewiseLinear {
            knots: knots
                .iter()
                .map(|&(x, y)| [Scalar::Exact(x), Scalar::Exact(y)])
                .collect(),
        }
    }

    pub fn table(space: &MetricSpace, images: &[Point]) -> Self {
        MapSpec::Table {
            images: images.iter().map(|&p| space.label(p).to_string()).collect(),
        }
    }

    fn is_real(&self) -> bool {
        match self {
            MapSpec::Identity
            | MapSpec::PiecewiseLinear { .. }
            | MapSpec::Quadratic { .. }
            | MapSpec::CircleRotation { .. }
            | MapSpec::CircleQuadratic { .. } => true,
            MapSpec::Composition { maps } => maps.iter().all(MapSpec::is_real),
            MapSpec::Table { .. } | MapSpec::CompactifiedShift => false,
        }
    }

    fn knots_exact(&self) -> Result<Vec<(Rational, Rational)>> {
        match self {
            MapSpec::PiecewiseLinear { knots } => knots
                .iter()
                .map(|[x, y]| Ok((exact_of(x, "knot")?, exact_of(y, "knot")?)))
                .collect(),
            _ => Err(Error::Parameter("not piecewise linear".into())),
        }
    }

    /// Exact interval-map form, when the map is a piecewise-linear,
    /// quadratic or identity map with exact coefficients.
    pub fn exact_interval_map(&self) -> Option<interval::ExactIntervalMap> {
        use interval::{big, ExactIntervalMap};
        match self {
            MapSpec::Identity => Some(ExactIntervalMap::Identity),
            MapSpec::PiecewiseLinear { .. } => self
                .knots_exact()
                .ok()
                .map(|k| ExactIntervalMap::PiecewiseLinear(k.iter().map(|(x, y)| (big(x), big(y))).collect())),
            MapSpec::Quadratic { a, b, c } => Some(ExactIntervalMap::Quadratic(
                big(&a.as_rational()?),
                big(&b.as_rational()?),
                big(&c.as_rational()?),
            )),
            _ => None,
        }
    }

    /// Check the map against the space it acts on.
    pub fn validate(&self, space: &MetricSpace) -> Result<()> {
        let kind = space.kind();
        let need = |k: SpaceKind, what: &str| {
            if kind == k {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{what} needs a {k:?} space")))
            }
        };
        match self {
            MapSpec::Identity => Ok(()),
            MapSpec::PiecewiseLinear { .. } => {
                need(SpaceKind::IntervalGrid, "piecewise-linear map")?;
                let knots = self.knots_exact()?;
                let (lo, hi, _) = space.interval_bounds().expect("interval");
                if knots.len() < 2 {
                    return Err(Error::Parameter("need at least two knots".into()));
                }
                if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(Error::Parameter("knots must be strictly increasing".into()));
                }
                if knots[0].0 != lo || knots[knots.len() - 1].0 != hi {
                    return Err(Error::Parameter("knots must span the interval".into()));
                }
                if let Some((_, y)) = knots.iter().find(|(_, y)| *y < lo || *y > hi) {
                    return Err(Error::GridClosure(format!("knot value {y}")));
                }
                Ok(())
            }
            MapSpec::Quadratic { .. } => {
                need(SpaceKind::IntervalGrid, "quadratic map")?;
                let f = self
                    .exact_interval_map()
                    .ok_or_else(|| Error::Parameter("quadratic coefficients must be exact".into()))?;
                let (lo, hi, _) = space.interval_bounds().expect("interval");
                let dom = interval::Interval::from_rationals(lo, hi);
                if !dom.contains_interval(&f.image(&dom)) {
                    return Err(Error::GridClosure("quadratic image leaves the interval".into()));
                }
                Ok(())
            }
            MapSpec::CircleRotation { .. } => need(SpaceKind::CircleGrid, "rotation"),
            MapSpec::CircleQuadratic { .. } => need(SpaceKind::CircleGrid, "circle quadratic map"),
            MapSpec::CompactifiedShift => need(SpaceKind::CompactifiedIntegers, "shift"),
            MapSpec::Table { images } => {
                if images.len() != space.len() {
                    return Err(Error::Parameter(format!(
                        "table has {} images for {} points",
                        images.len(),
                        space.len()
                    )));
                }
                images.iter().try_for_each(|l| space.resolve(l).map(|_| ()))
            }
            MapSpec::Composition { maps } => {
                if maps.is_empty() {
                    return Err(Error::Parameter("empty composition".into()));
                }
                maps.iter().try_for_each(|m| m.validate(space))
            }
        }
    }

    /// Real-valued evaluation at a coordinate (interval position or circle
    /// turn fraction). Circle results are reduced mod 1.
    fn eval_real(&self, x: Scalar) -> Result<Scalar> {
        Ok(match self {
            MapSpec::Identity => x,
            MapSpec::PiecewiseLinear { knots } => {
                let i = knots
                    .windows(2)
                    .position(|w| x.le_tol(&w[1][0]))
                    .unwrap_or(knots.len() - 2);
                let ([x0, y0], [x1, y1]) = (knots[i], knots[i + 1]);
                match (x, x0, y0, x1, y1) {
                    (Scalar::Exact(x), Scalar::Exact(x0), Scalar::Exact(y0), Scalar::Exact(x1), Scalar::Exact(y1)) => {
                        Scalar::Exact(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
                    }
                    _ => {
                        let t = (x.to_f64() - x0.to_f64()) / (x1.to_f64() - x0.to_f64());
                        Scalar::Float(y0.to_f64() + (y1.to_f64() - y0.to_f64()) * t)
                    }
                }
            }
            MapSpec::Quadratic { a, b, c } => *a * x * x + *b * x + *c,
            MapSpec::CircleRotation { angle } => frac_part(frac_part(x) + *angle),
            MapSpec::CircleQuadratic { inverse } => {
                let v = frac_part(x).to_f64();
                let y = if *inverse { circle_t_inv(v) } else { circle_t(v) };
                frac_part(Scalar::Float(y))
            }
            MapSpec::Composition { maps } => {
                let mut y = x;
                for m in maps {
                    y = m.eval_real(y)?;
                }
                y
            }
            MapSpec::Table { .. } | MapSpec::CompactifiedShift => {
                return Err(Error::Parameter("not a real-valued map".into()))
            }
        })
    }

    /// Image of one point; real maps are evaluated then snapped.
    pub fn apply_point(&self, space: &MetricSpace, p: Point) -> Result<Point> {
        if !space.contains(p) {
            return Err(Error::NotInSpace(format!("{}", p.0)));
        }
        if let MapSpec::Identity = self {
            return Ok(p);
        }
        if self.is_real() {
            return match space.kind() {
                SpaceKind::IntervalGrid => {
                    let x = space.coordinate(p).expect("grid coordinate");
                    space.snap_interval(self.eval_real(Scalar::Exact(x))?)
                }
                SpaceKind::CircleGrid => {
                    let x = space.coordinate(p).expect("grid coordinate");
                    space.snap_circle(self.eval_real(Scalar::Exact(x))?)
                }
                _ => Err(Error::Parameter("real-valued map on a non-grid space".into())),
            };
        }
        match self {
            MapSpec::Table { images } => space.resolve(&images[p.idx()]),
            MapSpec::CompactifiedShift => {
                let n = space.integer_bound().expect("compactified");
                let next = match space.integer_value(p).expect("compactified") {
                    Some(k) if k < n => Some(k + 1),
                    _ => None,
                };
                Ok(space.integer_point(next).expect("in range"))
            }
            MapSpec::Composition { maps } => {
                let mut y = p;
                for m in maps {
                    y = m.apply_point(space, y)?;
                }
                Ok(y)
            }
            _ => unreachable!("real maps handled above"),
        }
    }

    /// Validate and tabulate on every point of `space`.
    pub fn tabulate(&self, space: &MetricSpace) -> Result<MapTable> {
        self.validate(space)?;
        let images = space
            .points()
            .map(|p| self.apply_point(space, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(MapTable(images))
    }
}

/// A self-map of a finite point set, as an image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MapTable(Vec<Point>);

impl MapTable {
    pub fn identity(n: usize) -> Self {
        MapTable((0..n).map(Point::from).collect())
    }

    pub fn from_images(images: Vec<Point>) -> Self {
        MapTable(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, p: Point) -> Point {
        self.0[p.idx()]
    }

    pub fn as_slice(&self) -> &[Point] {
        &self.0
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MapTable) -> MapTable {
        MapTable(self.0.iter().map(|&p| next.get(p)).collect())
    }

    pub fn image_of(&self, set: &PointSet) -> PointSet {
        set.iter().map(|&p| self.get(p)).collect()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.0.len()];
        self.0.iter().for_each(|p| hit[p.idx()] = true);
        hit.into_iter().all(|h| h)
    }

    /// Smallest preimage of `y`.
    pub fn preimage(&self, y: Point) -> Option<Point> {
        self.0.iter().position(|&p| p == y).map(Point::from)
    }
}

/// A map together with its table on a fixed space.
#[derive(Clone, Debug)]
pub struct Map {
    spec: MapSpec,
    table: Arc<MapTable>,
}

impl Map {
    pub fn new(spec: MapSpec, space: &MetricSpace) -> Result<Self> {
        let table = Arc::new(spec.tabulate(space)?);
        Ok(Map { spec, table })
    }

    pub fn spec(&self) -> &MapSpec {
        &self.spec
    }

    pub fn table(&self) -> &MapTable {
        &self.table
    }

    pub fn apply(&self, p: Point) -> Point {
        self.table.get(p)
    }

    pub fn push(&self, mu: &DiscreteMeasure) -> DiscreteMeasure {
        mu.push_table(self.table.as_slice())
    }

    /// Smallest `x` with `f(x) = y`.
    pub fn preimage_witness(&self, space: &MetricSpace, y: Point) -> Result<Point> {
        self.table
            .preimage(y)
            .ok_or_else(|| Error::NotSurjective(space.label(y).to_string()))
    }
}

/// Serializable system generator, as found in definition files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum SystemDescriptor {
    Autonomous {
        map: MapSpec,
    },
    Periodic {
        maps: Vec<MapSpec>,
    },
    Listed {
        prefix: Vec<MapSpec>,
        tail: MapSpec,
    },
    /// A named example system; it brings its own space.
    Zoo {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, Scalar>,
    },
}

/// Maps indexed by time beyond an explicit finite list.
#[derive(Clone, Debug)]
pub enum Schedule {
    /// Consecutive blocks of one map each, then a fixed tail map.
    Blocks {
        maps: Vec<Map>,
        /// Exclusive end time of each block.
        ends: Vec<usize>,
        tail: Map,
    },
    /// `g_0, g_0^{-1}, g_1, g_1^{-1}, …` over all words in rotation and `T`.
    CircleWords { angle: Rational, cache: Vec<Map> },
}

#[derive(Clone, Debug)]
pub enum Generator {
    Autonomous(Map),
    Periodic(Vec<Map>),
    Listed { prefix: Vec<Map>, tail: Map },
    Schedule(Schedule),
}

#[derive(Clone, Debug)]
pub struct SystemDef {
    name: String,
    space: Arc<MetricSpace>,
    generator: Generator,
}

impl SystemDef {
    pub fn new(name: impl Into<String>, space: Arc<MetricSpace>, generator: Generator) -> Self {
        SystemDef {
            name: name.into(),
            space,
            generator,
        }
    }

    pub fn autonomous(name: impl Into<String>, space: MetricSpace, spec: MapSpec) -> Result<Self> {
        let map = Map::new(spec, &space)?;
        Ok(SystemDef::new(name, Arc::new(space), Generator::Autonomous(map)))
    }

    /// Build from definition-file records. Zoo systems ignore `space`.
    pub fn from_descriptor(space: Option<&SpaceDescriptor>, desc: &SystemDescriptor) -> Result<Self> {
        if let SystemDescriptor::Zoo { name, params } = desc {
            return build_zoo(name, &ZooParams::from(params.clone()));
        }
        let space =
            MetricSpace::build(space.ok_or_else(|| Error::Parameter("system needs a space descriptor".into()))?)?;
        let mk = |s: &MapSpec| Map::new(s.clone(), &space);
        let generator = match desc {
            SystemDescriptor::Autonomous { map } => Generator::Autonomous(mk(map)?),
            SystemDescriptor::Periodic { maps } => {
                if maps.is_empty() {
                    return Err(Error::Parameter("periodic generator needs a map".into()));
                }
                Generator::Periodic(maps.iter().map(mk).collect::<Result<_>>()?)
            }
            SystemDescriptor::Listed { prefix, tail } => Generator::Listed {
                prefix: prefix.iter().map(mk).collect::<Result<_>>()?,
                tail: mk(tail)?,
            },
            SystemDescriptor::Zoo { .. } => unreachable!(),
        };
        Ok(SystemDef::new("custom", Arc::new(space), generator))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn space_arc(&self) -> Arc<MetricSpace> {
        Arc::clone(&self.space)
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    /// `f_n`.
    pub fn map_at(&self, n: usize) -> Cow<'_, Map> {
        match &self.generator {
            Generator::Autonomous(m) => Cow::Borrowed(m),
            Generator::Periodic(ms) => Cow::Borrowed(&ms[n % ms.len()]),
            Generator::Listed { prefix, tail } => Cow::Borrowed(prefix.get(n).unwrap_or(tail)),
            Generator::Schedule(Schedule::Blocks { maps, ends, tail }) => {
                let block = ends.partition_point(|&e| e <= n);
                Cow::Borrowed(maps.get(block).unwrap_or(tail))
            }
            Generator::Schedule(Schedule::CircleWords { angle, cache }) => match cache.get(n) {
                Some(m) => Cow::Borrowed(m),
                None => Cow::Owned(
                    Map::new(zoo::circle_word_spec(n, *angle), &self.space)
                        .expect("circle words tabulate on circle grids"),
                ),
            },
        }
    }

    /// `(prefix, period)` such that `f_n` depends only on the phase of `n`,
    /// when the generator is eventually periodic.
    pub fn phases(&self) -> Option<(usize, usize)> {
        match &self.generator {
            Generator::Autonomous(_) => Some((0, 1)),
            Generator::Periodic(ms) => Some((0, ms.len())),
            Generator::Listed { prefix, .. } => Some((prefix.len(), 1)),
            Generator::Schedule(Schedule::Blocks { ends, .. }) => Some((*ends.last().unwrap_or(&0), 1)),
            Generator::Schedule(Schedule::CircleWords { .. }) => None,
        }
    }

    pub fn step(&self, n: usize, p: Point) -> Point {
        self.map_at(n).apply(p)
    }

    /// `[x0, f_0(x0), f_0^2(x0), …]`, length `n + 1`.
    pub fn orbit(&self, x0: Point, n: usize) -> Vec<Point> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(x0);
        let mut x = x0;
        for i in 0..n {
            x = self.step(i, x);
            out.push(x);
        }
        out
    }

    /// `f_0^n` as a table.
    pub fn compose(&self, n: usize) -> MapTable {
        (0..n).fold(MapTable::identity(self.space.len()), |acc, i| {
            acc.then(self.map_at(i).table())
        })
    }

    /// `f_from^{len}` = `f_{from+len-1} ∘ … ∘ f_from`.
    pub fn compose_from(&self, from: usize, len: usize) -> MapTable {
        (from..from + len).fold(MapTable::identity(self.space.len()), |acc, i| {
            acc.then(self.map_at(i).table())
        })
    }
}

/// Measure-level system: `f̂_n(μ) = μ ∘ f_n^{-1}`.
#[derive(Clone, Copy, Debug)]
pub struct InducedSystem<'a> {
    base: &'a SystemDef,
}

pub fn induced(system: &SystemDef) -> InducedSystem<'_> {
    InducedSystem { base: system }
}

impl<'a> InducedSystem<'a> {
    pub fn base(&self) -> &'a SystemDef {
        self.base
    }

    pub fn space(&self) -> &'a MetricSpace {
        self.base.space()
    }

    pub fn step(&self, n: usize, mu: &DiscreteMeasure) -> DiscreteMeasure {
        self.base.map_at(n).push(mu)
    }

    /// `[μ, f̂_0 μ, f̂_0^2 μ, …]`, length `n + 1`.
    pub fn orbit(&self, mu: &DiscreteMeasure, n: usize) -> Vec<DiscreteMeasure> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(mu.clone());
        for i in 0..n {
            let next = self.step(i, &out[i]);
            out.push(next);
        }
        out
    }

    /// `f̂_0^n(μ)` computed as the pushforward along `f_0^n`.
    pub fn compose(&self, mu: &DiscreteMeasure, n: usize) -> DiscreteMeasure {
        mu.push_table(self.base.compose(n).as_slice())
    }
}

/// `max_{x ∈ sample} d(f x, g x)`.
pub fn uniform_distance(space: &MetricSpace, f: &Map, g: &Map, sample: &[Point]) -> Scalar {
    sample
        .iter()
        .map(|&x| space.distance(f.apply(x), g.apply(x)))
        .fold(Scalar::ZERO, Scalar::max_total)
}

/// `max_{μ ∈ sample} P(f̂ μ, ĝ μ)`.
pub fn induced_uniform_distance(
    space: &MetricSpace,
    f: &Map,
    g: &Map,
    sample: &[DiscreteMeasure],
    exec: Exec,
) -> Result<Scalar> {
    let values = exec.map(sample, |mu| prohorov_fast(space, &f.push(mu), &g.push(mu)));
    values
        .into_iter()
        .try_fold(Scalar::ZERO, |acc, v| Ok(acc.max_total(v?)))
}

/// Exact `sup |f(x) - x|` over the whole interval, for exact interval maps.
pub fn exact_displacement(space: &MetricSpace, f: &MapSpec) -> Option<Rational> {
    let (lo, hi, _) = space.interval_bounds()?;
    let g = f.exact_interval_map()?;
    let d = g.sup_displacement(&interval::Interval::from_rationals(lo, hi));
    let num = d.numer().to_i128()?;
    let den = d.denom().to_i128()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn grid(lo: i128, hi: i128, q: i64) -> MetricSpace {
        MetricSpace::interval(rat(lo, 1), rat(hi, 1), q).unwrap()
    }

    #[test]
    fn knots_must_increase_and_span() {
        let space = grid(0, 1, 4);
        let bad = MapSpec::piecewise_linear(&[(rat(0, 1), rat(0, 1)), (rat(1, 2), rat(1, 1))]);
        assert!(bad.tabulate(&space).is_err());
        let bad = MapSpec::piecewise_linear(&[(rat(0, 1), rat(0, 1)), (rat(0, 1), rat(1, 1)), (rat(1, 1), rat(1, 1))]);
        assert!(bad.tabulate(&space).is_err());
        let out = MapSpec::piecewise_linear(&[(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(2, 1))]);
        assert!(matches!(out.tabulate(&space), Err(Error::GridClosure(_))));
    }

    #[test]
    fn table_must_be_total() {
        let space = MetricSpace::two_point();
        let t = MapSpec::Table {
            images: vec!["a".into()],
        };
        assert!(t.tabulate(&space).is_err());
    }

    #[test]
    fn composition_order() {
        let space = MetricSpace::discrete(3);
        let labels: Vec<String> = space.points().map(|p| space.label(p).to_string()).collect();
        let shift = MapSpec::Table {
            images: vec![labels[1].clone(), labels[2].clone(), labels[0].clone()],
        };
        let collapse = MapSpec::Table {
            images: vec![labels[0].clone(), labels[0].clone(), labels[2].clone()],
        };
        let comp = MapSpec::Composition {
            maps: vec![shift, collapse],
        };
        let t = comp.tabulate(&space).unwrap();
        // 0 -> 1 -> 0, 1 -> 2 -> 2, 2 -> 0 -> 0
        assert_eq!(t.as_slice(), &[Point(0), Point(2), Point(0)]);
    }

    #[test]
    fn circle_inverse_roundtrip() {
        for k in 0..100 {
            let x = k as f64 / 100.0;
            assert!((circle_t_inv(circle_t(x)) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn listed_generator_uses_tail() {
        let space = MetricSpace::two_point();
        let swap = MapSpec::Table {
            images: vec!["b".into(), "a".into()],
        };
        let sys = SystemDef::from_descriptor(
            Some(space.descriptor()),
            &SystemDescriptor::Listed {
                prefix: vec![swap],
                tail: MapSpec::Identity,
            },
        )
        .unwrap();
        assert_eq!(sys.orbit(Point(0), 3), vec![Point(0), Point(1), Point(1), Point(1)]);
        assert_eq!(sys.phases(), Some((1, 1)));
    }
}

//! Named example systems.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::interval::{big, ExactIntervalMap, Interval};
use super::{Generator, Map, MapSpec, Schedule, SystemDef};
use crate::error::{Error, Result};
use crate::scalar::{rat, Rational, Scalar};
use crate::space::MetricSpace;

pub const ZOO_NAMES: &[&str] = &[
    "fig1",
    "ex34",
    "ex35",
    "swap2",
    "fm_schedule",
    "circle_wm",
    "zshift",
    "identity",
];

/// Composition cap per schedule block.
pub const BLOCK_CAP: usize = 1_000_000;

/// Numeric parameters of a zoo system.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ZooParams(BTreeMap<String, Scalar>);

impl From<BTreeMap<String, Scalar>> for ZooParams {
    fn from(m: BTreeMap<String, Scalar>) -> Self {
        ZooParams(m)
    }
}

impl ZooParams {
    pub fn new() -> Self {
        ZooParams::default()
    }

    pub fn with(mut self, key: &str, value: i64) -> Self {
        self.0.insert(key.to_string(), Scalar::from(value));
        self
    }

    pub fn set(&mut self, key: &str, value: Scalar) {
        self.0.insert(key.to_string(), value);
    }

    pub fn usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => match v.as_rational() {
                Some(r) if r.is_integer() && *r.numer() > 0 => Ok(*r.numer() as usize),
                _ => Err(Error::Parameter(format!("{key} must be a positive integer"))),
            },
        }
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.0.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Parameter(format!("unknown parameter {k}"))),
            None => Ok(()),
        }
    }
}

pub fn build_zoo(name: &str, params: &ZooParams) -> Result<SystemDef> {
    match name {
        "fig1" => {
            params.check_keys(&["q"])?;
            fig1(params.usize("q", 16)?)
        }
        "ex34" => {
            params.check_keys(&["q"])?;
            ex34(params.usize("q", 16)?)
        }
        "ex35" => {
            params.check_keys(&["q"])?;
            ex35(params.usize("q", 16)?)
        }
        "swap2" => {
            params.check_keys(&[])?;
            Ok(swap2())
        }
        "identity" => {
            params.check_keys(&["q"])?;
            identity(params.usize("q", 64)?)
        }
        "zshift" => {
            params.check_keys(&["n"])?;
            zshift(params.usize("n", 5)?)
        }
        "fm_schedule" => {
            params.check_keys(&["depth", "q"])?;
            let depth = params.usize("depth", 4)?;
            let q = params.usize("q", default_fm_grid(depth))?;
            fm_schedule(depth, q)
        }
        "circle_wm" => {
            params.check_keys(&["q", "rot_den", "cache"])?;
            circle_wm(
                params.usize("q", 1000)?,
                params.usize("rot_den", 10_000)?,
                params.usize("cache", 62)?,
            )
        }
        other => Err(Error::UnknownSystem(other.to_string())),
    }
}

fn interval_space(lo: i128, hi: i128, q: usize) -> Result<MetricSpace> {
    MetricSpace::interval(Rational::from_integer(lo), Rational::from_integer(hi), q as i64)
}

pub fn fig1_spec() -> MapSpec {
    MapSpec::piecewise_linear(&[
        (rat(-1, 1), rat(0, 1)),
        (rat(-1, 2), rat(1, 1)),
        (rat(0, 1), rat(0, 1)),
        (rat(1, 1), rat(-1, 1)),
    ])
}

/// `2x + 2`, `-2x`, `-x` on `[-1, 1]`; swaps the two halves.
pub fn fig1(q: usize) -> Result<SystemDef> {
    SystemDef::autonomous("fig1", interval_space(-1, 1, q)?, fig1_spec())
}

pub fn ex34_spec() -> MapSpec {
    MapSpec::piecewise_linear(&[(rat(0, 1), rat(0, 1)), (rat(1, 2), rat(0, 1)), (rat(1, 1), rat(1, 1))])
}

/// `0` on `[0, 1/2]`, `2x - 1` on `[1/2, 1]`.
pub fn ex34(q: usize) -> Result<SystemDef> {
    SystemDef::autonomous("ex34", interval_space(0, 1, q)?, ex34_spec())
}

/// `x^2` on `[0, 1]`.
pub fn ex35(q: usize) -> Result<SystemDef> {
    let spec = MapSpec::Quadratic {
        a: Scalar::ONE,
        b: Scalar::ZERO,
        c: Scalar::ZERO,
    };
    SystemDef::autonomous("ex35", interval_space(0, 1, q)?, spec)
}

/// `a ↔ b` on the two-point discrete space.
pub fn swap2() -> SystemDef {
    let spec = MapSpec::Table {
        images: vec!["b".into(), "a".into()],
    };
    SystemDef::autonomous("swap2", MetricSpace::two_point(), spec).expect("swap is total")
}

pub fn identity(q: usize) -> Result<SystemDef> {
    SystemDef::autonomous("identity", interval_space(0, 1, q)?, MapSpec::Identity)
}

/// Shift on `{-n, …, n} ∪ {∞}`.
pub fn zshift(n: usize) -> Result<SystemDef> {
    let space = MetricSpace::build(&crate::space::SpaceDescriptor::CompactifiedIntegers { n: n as i64 })?;
    SystemDef::autonomous("zshift", space, MapSpec::CompactifiedShift)
}

// ---- connect-the-dots schedule ----

/// Knots of `F_m`: `F(a_i) = a_i`, `F(c_i) = c_{i+1}`, `F(d_i) = d_{i-1}` with
/// `a_i = i/m`, `c_i = a_i + 1/(3m)`, `d_i = a_i + 2/(3m)`, `d_{-1} = 0`, `c_m = 1`.
pub fn fm_knots(m: usize) -> Vec<(Rational, Rational)> {
    let m = m as i128;
    let a = |i: i128| rat(i, m);
    let c = |i: i128| if i == m { Rational::one() } else { a(i) + rat(1, 3 * m) };
    let d = |i: i128| if i < 0 { Rational::zero() } else { a(i) + rat(2, 3 * m) };
    let mut knots = Vec::with_capacity(3 * m as usize + 1);
    for i in 0..m {
        knots.push((a(i), a(i)));
        knots.push((c(i), c(i + 1)));
        knots.push((d(i), d(i - 1)));
    }
    knots.push((Rational::one(), Rational::one()));
    knots
}

pub fn fm_spec(m: usize) -> MapSpec {
    MapSpec::piecewise_linear(&fm_knots(m))
}

fn fm_exact(m: usize) -> ExactIntervalMap {
    ExactIntervalMap::PiecewiseLinear(fm_knots(m).iter().map(|(x, y)| (big(x), big(y))).collect())
}

fn default_fm_grid(depth: usize) -> usize {
    let lcm = (1..=depth.max(1)).fold(1usize, num_integer::lcm);
    12 * lcm
}

fn unit() -> Interval {
    Interval::from_rationals(Rational::zero(), Rational::one())
}

fn dyadic_cells(level: usize) -> Vec<Interval> {
    let n = 1i128 << level;
    (0..n)
        .map(|i| Interval::from_rationals(rat(i, n), rat(i + 1, n)))
        .collect()
}

/// Image of `iv` under `F_1^{l_1}` then `F_2^{l_2}` … (exact).
fn push_blocks(mut iv: Interval, lengths: &[usize], maps: &[ExactIntervalMap]) -> Interval {
    let full = unit();
    for (f, &l) in maps.iter().zip(lengths) {
        for _ in 0..l {
            if iv == full {
                return iv;
            }
            iv = f.image(&iv);
        }
    }
    iv
}

/// Block lengths `l_n = s_n - s_{n-1}` for levels `1..=depth`: the least
/// `l ≥ 1` with `F_n^l(f_0^{s_{n-1}}(J)) = [0, 1]` for every dyadic cell `J`
/// of width `2^{-n}`.
pub fn fm_block_lengths(depth: usize, cap: usize) -> Result<Vec<usize>> {
    if depth == 0 || depth > 16 {
        return Err(Error::Parameter("depth must be in 1..=16".into()));
    }
    let maps: Vec<ExactIntervalMap> = (1..=depth).map(fm_exact).collect();
    let full = unit();
    let mut lengths = Vec::with_capacity(depth);
    for level in 1..=depth {
        let f = &maps[level - 1];
        let mut need = 1usize;
        for cell in dyadic_cells(level) {
            let mut iv = push_blocks(cell, &lengths, &maps);
            let mut l = 0usize;
            while iv != full {
                if l >= cap {
                    return Err(Error::Schedule(format!(
                        "level {level}: cell image {} .. {} not full after {cap} steps",
                        iv.lo, iv.hi
                    )));
                }
                iv = f.image(&iv);
                l += 1;
            }
            need = need.max(l);
        }
        lengths.push(need);
    }
    Ok(lengths)
}

/// Exact images `f_0^{s_n}(J)` of all level-`n` dyadic cells.
pub fn fm_cell_images(level: usize, lengths: &[usize]) -> Vec<Interval> {
    let maps: Vec<ExactIntervalMap> = (1..=lengths.len()).map(fm_exact).collect();
    let upto = &lengths[..level.min(lengths.len())];
    dyadic_cells(level)
        .into_iter()
        .map(|c| push_blocks(c, upto, &maps))
        .collect()
}

/// `F_1` for `s_1` steps, `F_2` until `s_2`, …, then `F_{depth+1}` forever.
pub fn fm_schedule(depth: usize, q: usize) -> Result<SystemDef> {
    let space = interval_space(0, 1, q)?;
    let lengths = fm_block_lengths(depth, BLOCK_CAP)?;
    let maps = (1..=depth)
        .map(|m| Map::new(fm_spec(m), &space))
        .collect::<Result<Vec<_>>>()?;
    let ends = lengths
        .iter()
        .scan(0usize, |s, &l| {
            *s += l;
            Some(*s)
        })
        .collect();
    let tail = Map::new(fm_spec(depth + 1), &space)?;
    Ok(SystemDef::new(
        "fm_schedule",
        Arc::new(space),
        Generator::Schedule(Schedule::Blocks { maps, ends, tail }),
    ))
}

// ---- circle words ----

/// Convergent `F_{k-1}/F_k` of `(√5 - 1)/2` with the least denominator `≥ min_den`.
pub fn golden_convergent(min_den: usize) -> Rational {
    let (mut p, mut q) = (1i128, 1i128);
    while (q as usize) < min_den {
        let next = p + q;
        p = q;
        q = next;
    }
    rat(p, q)
}

/// Word `g_k` in length-lexicographic order over `{R, T}`; `true` is `T`,
/// leftmost letter first (applied last).
pub fn circle_word(k: usize) -> Vec<bool> {
    let mut len = 1usize;
    let mut offset = 0usize;
    while k >= offset + (1usize << len) {
        offset += 1usize << len;
        len += 1;
    }
    let idx = k - offset;
    (0..len).map(|i| idx >> (len - 1 - i) & 1 == 1).collect()
}

/// `f_{2k} = g_k`, `f_{2k+1} = g_k^{-1}`.
pub fn circle_word_spec(n: usize, angle: Rational) -> MapSpec {
    let word = circle_word(n / 2);
    let letter = |t: bool, inverse: bool| {
        if t {
            MapSpec::CircleQuadratic { inverse }
        } else {
            MapSpec::CircleRotation {
                angle: Scalar::Exact(if inverse { -angle } else { angle }),
            }
        }
    };
    let maps = if n.is_multiple_of(2) {
        word.iter().rev().map(|&t| letter(t, false)).collect()
    } else {
        word.iter().map(|&t| letter(t, true)).collect()
    };
    MapSpec::Composition { maps }
}

pub fn circle_wm(q: usize, rot_den: usize, cache: usize) -> Result<SystemDef> {
    let space = MetricSpace::build(&crate::space::SpaceDescriptor::Circle { q: q as i64 })?;
    let angle = golden_convergent(rot_den);
    let cache = (0..cache)
        .map(|n| Map::new(circle_word_spec(n, angle), &space))
        .collect::<Result<Vec<_>>>()?;
    Ok(SystemDef::new(
        "circle_wm",
        Arc::new(space),
        Generator::Schedule(Schedule::CircleWords { angle, cache }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Point;

    fn pt(sys: &SystemDef, label: &str) -> Point {
        sys.space().resolve(label).unwrap()
    }

    #[test]
    fn fig1_values() {
        let sys = fig1(16).unwrap();
        assert_eq!(sys.step(0, pt(&sys, "-1/2")), pt(&sys, "1"));
        let orbit = sys.orbit(pt(&sys, "-1/2"), 5);
        let labels: Vec<&str> = orbit.iter().map(|&p| sys.space().label(p)).collect();
        assert_eq!(labels, ["-1/2", "1", "-1", "0", "0", "0"]);
        assert_eq!(
            sys.map_at(0).preimage_witness(sys.space(), pt(&sys, "1")).unwrap(),
            pt(&sys, "-1/2")
        );
    }

    #[test]
    fn fig1_swaps_halves() {
        let sys = fig1(8).unwrap();
        let s = sys.space();
        let left = s.interval_range(rat(-1, 1), rat(0, 1));
        let right = s.interval_range(rat(0, 1), rat(1, 1));
        let (fl, fr) = (
            sys.map_at(0).table().image_of(&left),
            sys.map_at(0).table().image_of(&right),
        );
        assert!(fl.is_subset(&right) && fr.is_subset(&left));
        // the hulls match; slope 2 skips every other grid point
        assert_eq!((fl.first(), fl.last()), (right.first(), right.last()));
        assert_eq!(fr, left);
    }

    #[test]
    fn examples_34_35() {
        let sys = ex34(16).unwrap();
        let orbit = sys.orbit(pt(&sys, "3/4"), 2);
        assert_eq!(orbit, vec![pt(&sys, "3/4"), pt(&sys, "1/2"), pt(&sys, "0")]);
        assert_eq!(
            sys.map_at(0).preimage_witness(sys.space(), pt(&sys, "0")).unwrap(),
            pt(&sys, "0")
        );
        let sys = ex35(16).unwrap();
        assert_eq!(sys.step(0, pt(&sys, "1/2")), pt(&sys, "1/4"));
    }

    #[test]
    fn swap_and_shift() {
        let sys = swap2();
        let (a, b) = (pt(&sys, "a"), pt(&sys, "b"));
        assert_eq!(sys.orbit(a, 3), vec![a, b, a, b]);
        assert_eq!(sys.map_at(0).preimage_witness(sys.space(), a).unwrap(), b);
        let z = zshift(5).unwrap();
        let s = z.space();
        let start = s.integer_point(Some(-2)).unwrap();
        let orbit: Vec<_> = z.orbit(start, 4).iter().map(|&p| s.integer_value(p).unwrap()).collect();
        assert_eq!(orbit, vec![Some(-2), Some(-1), Some(0), Some(1), Some(2)]);
        let three = s.integer_point(Some(3)).unwrap();
        assert_eq!(s.integer_value(z.step(0, three)).unwrap(), Some(4));
        let inf = s.integer_point(None).unwrap();
        assert_eq!(z.step(0, inf), inf);
        let top = s.integer_point(Some(5)).unwrap();
        assert_eq!(z.step(0, top), inf);
    }

    #[test]
    fn fm_knots_and_blocks() {
        let k = fm_knots(1);
        assert_eq!(
            k,
            vec![
                (rat(0, 1), rat(0, 1)),
                (rat(1, 3), rat(1, 1)),
                (rat(2, 3), rat(0, 1)),
                (rat(1, 1), rat(1, 1))
            ]
        );
        let lengths = fm_block_lengths(4, BLOCK_CAP).unwrap();
        assert_eq!(lengths[0], 1);
        for level in 1..=4 {
            assert!(fm_cell_images(level, &lengths).iter().all(|iv| *iv == unit()));
        }
    }

    #[test]
    fn fm_schedule_indexing() {
        let sys = fm_schedule(3, 36).unwrap();
        let lengths = fm_block_lengths(3, BLOCK_CAP).unwrap();
        let s1 = lengths[0];
        assert_eq!(sys.map_at(s1 - 1).spec(), &fm_spec(1));
        assert_eq!(sys.map_at(s1).spec(), &fm_spec(2));
        let total: usize = lengths.iter().sum();
        assert_eq!(sys.map_at(total).spec(), &fm_spec(4));
        assert_eq!(sys.map_at(total + 100).spec(), &fm_spec(4));
    }

    #[test]
    fn word_enumeration() {
        let show = |k| {
            circle_word(k)
                .iter()
                .map(|&t| if t { 'T' } else { 'R' })
                .collect::<String>()
        };
        let first: Vec<String> = (0..8).map(show).collect();
        assert_eq!(first, ["R", "T", "RR", "RT", "TR", "TT", "RRR", "RRT"]);
        assert_eq!(golden_convergent(10_000), rat(6765, 10946));
    }

    #[test]
    fn word_inverse_is_near_identity() {
        let sys = circle_wm(500, 10_000, 10).unwrap();
        for n in 0..5 {
            let f = sys.map_at(2 * n);
            let g = sys.map_at(2 * n + 1);
            let worst = sys
                .space()
                .points()
                .map(|p| sys.space().distance(g.apply(f.apply(p)), p).to_f64())
                .fold(0.0, f64::max);
            // snapping on both legs moves at most one cell each
            assert!(worst <= 2.0 / 500.0 + 1e-12, "n={n} worst={worst}");
        }
    }

    #[test]
    fn unknown_names_and_params() {
        assert!(matches!(
            build_zoo("nope", &ZooParams::new()),
            Err(Error::UnknownSystem(_))
        ));
        assert!(build_zoo("fig1", &ZooParams::new().with("bogus", 1)).is_err());
        assert!(build_zoo("fig1", &ZooParams::new().with("q", 8)).is_ok());
    }
}

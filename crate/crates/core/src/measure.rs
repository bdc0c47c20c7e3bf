//! Finitely supported probability measures and the Prohorov distance.
//!
//! Weights are exact rationals. The Prohorov distance is computed in its
//! one-sided form
//!
//! ```text
//! P(mu, nu) = inf { eps > 0 : mu(A) <= nu(A^eps) + eps  for all A }
//! ```
//!
//! by two independent routes: [`prohorov_bruteforce`] enumerates every
//! subset of `supp(mu)`, and [`prohorov_fast`] scans the finitely many
//! breakpoints of `eps -> max_A [mu(A) - nu(A^eps)]`, evaluating each one as a
//! maximum-weight closure (min-cut) problem.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::max_weight_closure;
use crate::par::Exec;
use crate::scalar::{Rational, Scalar};
use crate::space::{MetricSpace, Point, PointSet};

/// Default support-size cap for the subset-enumeration oracle.
pub const ENUMERATION_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscreteMeasure {
    // sorted by point, strictly positive weights summing to one
    atoms: Vec<(Point, Rational)>,
}

/// One `(point, weight)` entry of a serialized measure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub point: String,
    pub num: i128,
    pub den: i128,
}

impl DiscreteMeasure {
    /// Canonicalize `(point, weight)` pairs: duplicates are merged, zero
    /// weights dropped. Weights must be nonnegative and sum to exactly one.
    pub fn from_atoms(space: &MetricSpace, atoms: impl IntoIterator<Item = (Point, Rational)>) -> Result<Self> {
        let mut merged: BTreeMap<Point, Rational> = BTreeMap::new();
        for (p, w) in atoms {
            if !space.contains(p) {
                return Err(Error::NotInSpace(format!("#{}", p.0)));
            }
            if w.is_negative() {
                return Err(Error::Weights(format!("negative weight {w} at {}", space.label(p))));
            }
            *merged.entry(p).or_insert_with(Rational::zero) += w;
        }
        let atoms: Vec<(Point, Rational)> = merged.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        let total: Rational = atoms.iter().map(|(_, w)| *w).sum();
        if !total.is_one() {
            return Err(Error::Weights(format!("weights sum to {total}, expected 1")));
        }
        Ok(DiscreteMeasure { atoms })
    }

    pub fn dirac(space: &MetricSpace, x: Point) -> Result<Self> {
        if !space.contains(x) {
            return Err(Error::NotInSpace(format!("#{}", x.0)));
        }
        Ok(DiscreteMeasure {
            atoms: vec![(x, Rational::one())],
        })
    }

    /// `(1/n) sum_i delta_{x_i}`; repeated points accumulate weight.
    pub fn empirical(space: &MetricSpace, points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Weights("empirical measure of an empty list".into()));
        }
        let w = Rational::new(1, points.len() as i128);
        DiscreteMeasure::from_atoms(space, points.iter().map(|&p| (p, w)))
    }

    /// Convex combination `sum_i c_i mu_i`. Coefficients must be nonnegative
    /// and sum to one.
    pub fn mix(terms: &[(Rational, &DiscreteMeasure)]) -> Result<Self> {
        if terms.iter().any(|(c, _)| c.is_negative()) {
            return Err(Error::Weights("negative mixing coefficient".into()));
        }
        let total: Rational = terms.iter().map(|(c, _)| *c).sum();
        if !total.is_one() {
            return Err(Error::Weights(format!(
                "mixing coefficients sum to {total}, expected 1"
            )));
        }
        let mut merged: BTreeMap<Point, Rational> = BTreeMap::new();
        for (c, m) in terms {
            for (p, w) in &m.atoms {
                *merged.entry(*p).or_insert_with(Rational::zero) += *c * *w;
            }
        }
        Ok(DiscreteMeasure {
            atoms: merged.into_iter().filter(|(_, w)| !w.is_zero()).collect(),
        })
    }

    /// Two-term shorthand: `alpha * mu + (1 - alpha) * nu`.
    pub fn interpolate(alpha: Rational, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<Self> {
        DiscreteMeasure::mix(&[(alpha, mu), (Rational::one() - alpha, nu)])
    }

    pub fn atoms(&self) -> &[(Point, Rational)] {
        &self.atoms
    }

    pub fn support(&self) -> impl Iterator<Item = Point> + '_ {
        self.atoms.iter().map(|(p, _)| *p)
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    pub fn weight(&self, p: Point) -> Rational {
        self.atoms
            .binary_search_by_key(&p, |(q, _)| *q)
            .map(|i| self.atoms[i].1)
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn mass(&self, set: &PointSet) -> Rational {
        self.atoms
            .iter()
            .filter(|(p, _)| set.contains(p))
            .map(|(_, w)| *w)
            .sum()
    }

    pub fn mass_where(&self, pred: impl Fn(Point) -> bool) -> Rational {
        self.atoms.iter().filter(|(p, _)| pred(*p)).map(|(_, w)| *w).sum()
    }

    pub fn is_dirac(&self) -> Option<Point> {
        match self.atoms.as_slice() {
            [(p, _)] => Some(*p),
            _ => None,
        }
    }

    /// Pushforward `f_*(mu)`: each atom `w·δ_x` moves to `w·δ_{f(x)}`.
    pub fn pushforward(&self, f: impl Fn(Point) -> Point) -> DiscreteMeasure {
        let mut merged: BTreeMap<Point, Rational> = BTreeMap::new();
        for (p, w) in &self.atoms {
            *merged.entry(f(*p)).or_insert_with(Rational::zero) += *w;
        }
        DiscreteMeasure {
            atoms: merged.into_iter().collect(),
        }
    }

    /// Pushforward by a tabulated map (`table[x] = f(x)`).
    pub fn push_table(&self, table: &[Point]) -> DiscreteMeasure {
        self.pushforward(|p| table[p.idx()])
    }

    pub fn fits(&self, space: &MetricSpace) -> bool {
        self.atoms.iter().all(|(p, _)| space.contains(*p))
    }

    pub fn to_records(&self, space: &MetricSpace) -> Vec<AtomRecord> {
        self.atoms
            .iter()
            .map(|(p, w)| AtomRecord {
                point: space.label(*p).to_string(),
                num: *w.numer(),
                den: *w.denom(),
            })
            .collect()
    }

    pub fn from_records(space: &MetricSpace, records: &[AtomRecord]) -> Result<Self> {
        let atoms = records
            .iter()
            .map(|r| {
                if r.den == 0 {
                    return Err(Error::Weights(format!("zero denominator at {}", r.point)));
                }
                Ok((space.resolve(&r.point)?, Rational::new(r.num, r.den)))
            })
            .collect::<Result<Vec<_>>>()?;
        DiscreteMeasure::from_atoms(space, atoms)
    }

    /// Human-readable `w·label + ...` form.
    pub fn describe(&self, space: &MetricSpace) -> String {
        self.atoms
            .iter()
            .map(|(p, w)| format!("{}·δ({})", Scalar::Exact(*w), space.label(*p)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Round weights down to multiples of `1/den` and hand the remaining
    /// units to the largest remainders (ties to the smaller point). The
    /// result is an empirical measure with `den` atoms.
    pub fn quantize(&self, den: usize) -> DiscreteMeasure {
        let d = Rational::from_integer(den as i128);
        let mut units: Vec<(Point, i128, Rational)> = self
            .atoms
            .iter()
            .map(|(p, w)| {
                let scaled = *w * d;
                (*p, scaled.floor().to_integer(), scaled - scaled.floor())
            })
            .collect();
        let assigned: i128 = units.iter().map(|u| u.1).sum();
        let mut order: Vec<usize> = (0..units.len()).collect();
        order.sort_by(|&a, &b| units[b].2.cmp(&units[a].2).then(units[a].0.cmp(&units[b].0)));
        for &i in order.iter().take((den as i128 - assigned) as usize) {
            units[i].1 += 1;
        }
        DiscreteMeasure {
            atoms: units
                .into_iter()
                .filter(|u| u.1 > 0)
                .map(|(p, k, _)| (p, Rational::new(k, den as i128)))
                .collect(),
        }
    }
}

/// Random measure with at most `max_support` atoms and weights that are
/// positive multiples of `1/den`.
pub fn random_measure<R: Rng>(rng: &mut R, space: &MetricSpace, max_support: usize, den: usize) -> DiscreteMeasure {
    let k = rng.gen_range(1..=max_support.min(space.len()).min(den).max(1));
    let mut pts: Vec<Point> = sample(rng, space.len(), k).into_iter().map(Point::from).collect();
    pts.sort();
    // composition of den into k positive parts via k-1 distinct cut points
    let mut cuts: Vec<usize> = if k > 1 {
        sample(rng, den - 1, k - 1).into_iter().map(|c| c + 1).collect()
    } else {
        Vec::new()
    };
    cuts.sort_unstable();
    cuts.push(den);
    let mut prev = 0;
    let atoms = pts
        .into_iter()
        .zip(cuts)
        .map(|(p, c)| {
            let w = Rational::new((c - prev) as i128, den as i128);
            prev = c;
            (p, w)
        })
        .collect();
    DiscreteMeasure { atoms }
}

/// All measures whose weights are multiples of `1/q` (the measure grid `M_q`),
/// in lexicographic order of their weight vectors. Fails when the grid would
/// hold more than `cap` measures.
pub fn measure_grid(space: &MetricSpace, q: usize, cap: usize) -> Result<Vec<DiscreteMeasure>> {
    let n = space.len();
    if q == 0 {
        return Err(Error::Parameter("measure grid denominator must be positive".into()));
    }
    // C(q + n - 1, n - 1)
    let mut count: u128 = 1;
    for i in 0..(n - 1) as u128 {
        count = count * (q as u128 + 1 + i) / (i + 1);
        if count > cap as u128 {
            return Err(Error::ResourceCap(format!(
                "measure grid M_{q} on {n} points exceeds {cap} measures"
            )));
        }
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut parts = vec![0usize; n];
    fn rec(i: usize, left: usize, q: usize, parts: &mut Vec<usize>, out: &mut Vec<DiscreteMeasure>) {
        let n = parts.len();
        if i + 1 == n {
            parts[i] = left;
            out.push(DiscreteMeasure {
                atoms: parts
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(j, &k)| (Point::from(j), Rational::new(k as i128, q as i128)))
                    .collect(),
            });
            return;
        }
        for k in (0..=left).rev() {
            parts[i] = k;
            rec(i + 1, left - k, q, parts, out);
        }
    }
    rec(0, q, q, &mut parts, &mut out);
    Ok(out)
}

fn check_space(space: &MetricSpace, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<()> {
    if mu.fits(space) && nu.fits(space) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// Smallest `eps` (as an infimum) with `m <= G(eps) + eps`, where
/// `G(eps) = sum of w over breakpoints (r, w) with r < eps`.
/// `breaks` must be sorted by distance.
fn min_feasible_eps(m: Rational, breaks: &[(Scalar, Rational)]) -> Scalar {
    let mut lo = Scalar::ZERO;
    let mut covered = Rational::zero();
    for &(r, w) in breaks {
        // on (lo, r] the fattened mass is `covered`
        let cand = lo.max_total(Scalar::Exact(m - covered));
        if cand.le_tol(&r) {
            return cand;
        }
        covered += w;
        lo = r;
    }
    lo.max_total(Scalar::Exact(m - covered))
}

/// Prohorov distance by enumerating all subsets of `supp(mu)` (the oracle).
pub fn prohorov_bruteforce(space: &MetricSpace, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<Scalar> {
    prohorov_bruteforce_with(space, mu, nu, ENUMERATION_CAP, Exec::default())
}

pub fn prohorov_bruteforce_with(
    space: &MetricSpace,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    cap: usize,
    exec: Exec,
) -> Result<Scalar> {
    check_space(space, mu, nu)?;
    let m = mu.support_len();
    if m > cap {
        return Err(Error::EnumerationCap { size: m, cap });
    }
    let dist: Vec<Vec<Scalar>> = mu
        .support()
        .map(|x| nu.support().map(|y| space.distance(x, y)).collect())
        .collect();
    let eval = |mask: usize| -> Scalar {
        let mass: Rational = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| mu.atoms[i].1).sum();
        let mut breaks: Vec<(Scalar, Rational)> = nu
            .atoms
            .iter()
            .enumerate()
            .map(|(j, (_, w))| {
                let r = (0..m)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| dist[i][j])
                    .reduce(Scalar::min_total)
                    .expect("nonempty subset");
                (r, *w)
            })
            .collect();
        breaks.sort_by(|a, b| a.0.total_cmp(&b.0));
        min_feasible_eps(mass, &breaks)
    };
    let full = 1usize << m;
    let best = if full > 4096 {
        // chunk the subset lattice; the max is order independent
        let chunks = 64usize;
        let per = full.div_ceil(chunks);
        exec.map_range(0..chunks, |c| {
            ((c * per).max(1)..((c + 1) * per).min(full))
                .map(eval)
                .fold(Scalar::ZERO, Scalar::max_total)
        })
        .into_iter()
        .fold(Scalar::ZERO, Scalar::max_total)
    } else {
        (1..full).map(eval).fold(Scalar::ZERO, Scalar::max_total)
    };
    Ok(best)
}

/// Prohorov distance via breakpoint search and min-cut.
pub fn prohorov_fast(space: &MetricSpace, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<Scalar> {
    check_space(space, mu, nu)?;
    if mu == nu {
        return Ok(Scalar::ZERO);
    }
    let dist: Vec<Vec<Scalar>> = mu
        .support()
        .map(|x| nu.support().map(|y| space.distance(x, y)).collect())
        .collect();
    let mut breaks: Vec<Scalar> = dist.iter().flatten().copied().collect();
    breaks.push(Scalar::ZERO);
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup_by(|a, b| a.identical(b));

    let profit: Vec<Rational> = mu.atoms.iter().map(|(_, w)| *w).collect();
    let cost: Vec<Rational> = nu.atoms.iter().map(|(_, w)| *w).collect();
    // worst violation for eps in (breaks[j], breaks[j+1]]
    let violation = |j: usize| -> Rational {
        let r = breaks[j];
        max_weight_closure(&profit, &cost, |i, k| {
            dist[i][k].total_cmp(&r) != std::cmp::Ordering::Greater
        })
    };
    let feasible = |j: usize, v: Rational| -> bool {
        match breaks.get(j + 1) {
            Some(next) => Scalar::Exact(v).le_tol(next),
            None => true,
        }
    };
    // the violation is nonincreasing in j, so feasibility is monotone
    let (mut lo, mut hi) = (0usize, breaks.len() - 1);
    let mut answer = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        let v = violation(mid);
        if feasible(mid, v) {
            answer = Some((mid, v));
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let (j, v) = match answer {
        Some((j, v)) if j == lo => (j, v),
        _ => (lo, violation(lo)),
    };
    Ok(breaks[j].max_total(Scalar::Exact(v)))
}

/// `P(delta_z, nu)` in closed form: the smallest `eps` with
/// `nu(B(z, eps)) + eps >= 1`.
pub fn prohorov_from_dirac(space: &MetricSpace, z: Point, nu: &DiscreteMeasure) -> Scalar {
    let mut breaks: Vec<(Scalar, Rational)> = nu.atoms.iter().map(|(y, w)| (space.distance(z, *y), *w)).collect();
    breaks.sort_by(|a, b| a.0.total_cmp(&b.0));
    min_feasible_eps(Rational::one(), &breaks)
}

/// Weight-grid resolution guaranteeing an empirical approximation within
/// `eps`: any quantization to `den` atoms moves at most `|supp|/den` mass.
pub fn density_denominator(eps: Rational, support: usize) -> usize {
    let inv = (Rational::one() / eps)
        .ceil()
        .to_integer()
        .to_usize()
        .unwrap_or(usize::MAX);
    support.max(1) * inv.max(1)
}

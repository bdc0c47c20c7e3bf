//! Separated sets and finite-stage (sequence) entropy estimates.
//!
//! A set is `(n, ε, A)`-separated when every pair is more than `ε` apart at
//! some observation time `a_j`, `0 ≤ j < n`, where `a_0 = 0`. The reported
//! rate is a finite-resolution lower-bound surrogate for the entropy; no
//! limit in `n` or `ε` is taken.

use serde::Serialize;

use crate::detect::{MeasureGridSystem, StateSystem};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::par::Exec;
use crate::scalar::TOL;
use crate::space::{Point, SpaceKind};
use crate::systems::SystemDef;

/// Largest sample accepted by the exact solver.
pub const EXACT_CAP: usize = 64;

/// Observation sequence `a_1 < a_2 < …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum TimeSequence {
    AllIntegers,
    Explicit { entries: Vec<usize> },
}

impl TimeSequence {
    pub fn explicit(entries: Vec<usize>) -> Result<Self> {
        if entries.first().is_some_and(|&a| a == 0) || entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter(
                "time sequence must be strictly increasing from 1".into(),
            ));
        }
        Ok(TimeSequence::Explicit { entries })
    }

    /// `a_k`, with `a_0 = 0`.
    pub fn a(&self, k: usize) -> Result<usize> {
        match self {
            _ if k == 0 => Ok(0),
            TimeSequence::AllIntegers => Ok(k),
            TimeSequence::Explicit { entries } => entries
                .get(k - 1)
                .copied()
                .ok_or_else(|| Error::Parameter(format!("time sequence has no entry a_{k}"))),
        }
    }

    /// `[a_0, …, a_{n-1}]`.
    pub fn observation_times(&self, n: usize) -> Result<Vec<usize>> {
        (0..n).map(|j| self.a(j)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SepMode {
    Exact,
    Greedy,
}

impl SepMode {
    fn for_sample(len: usize) -> Self {
        if len <= EXACT_CAP {
            SepMode::Exact
        } else {
            SepMode::Greedy
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparatedSet {
    pub cardinality: usize,
    /// Sample states forming the set.
    pub members: Vec<usize>,
    pub method: SepMode,
}

/// States of each sample point at the observation times, plus an optional
/// line coordinate of the starting state used to prune pair checks.
struct Trajectories {
    states: Vec<Vec<usize>>,
    keys: Option<Vec<f64>>,
}

fn trajectories<S: StateSystem + ?Sized>(sys: &S, sample: &[usize], times: &[usize], exec: Exec) -> Trajectories {
    let last = times.last().copied().unwrap_or(0);
    let states = exec.map(sample, |&x| {
        let mut out = Vec::with_capacity(times.len());
        let mut cur = x;
        let mut t = 0;
        for &a in times {
            while t < a {
                cur = sys.step(t, cur);
                t += 1;
            }
            out.push(cur);
        }
        debug_assert!(t <= last);
        out
    });
    let keys: Option<Vec<f64>> = sample.iter().map(|&x| sys.line_coordinate(x)).collect();
    Trajectories { states, keys }
}

fn separated<S: StateSystem + ?Sized>(sys: &S, a: &[usize], b: &[usize], n: usize, eps: f64) -> bool {
    (0..n).any(|j| sys.distance_f64(a[j], b[j]) > eps + TOL)
}

fn greedy<S: StateSystem + ?Sized>(sys: &S, tr: &Trajectories, order: &[usize], n: usize, eps: f64) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    match &tr.keys {
        Some(keys) => {
            // chosen sample indices sorted by starting coordinate; a pair
            // closer than eps at time 0 must lie in the window [k - eps, k + eps]
            let mut sorted: Vec<(f64, usize)> = Vec::new();
            for &i in order {
                let k = keys[i];
                let lo = sorted.partition_point(|e| e.0 < k - eps - TOL);
                let hi = sorted.partition_point(|e| e.0 <= k + eps + TOL);
                let clash = sorted[lo..hi]
                    .iter()
                    .any(|&(_, c)| !separated(sys, &tr.states[i], &tr.states[c], n, eps));
                if !clash {
                    let at = sorted.partition_point(|e| e.0 < k);
                    sorted.insert(at, (k, i));
                    chosen.push(i);
                }
            }
        }
        None => {
            for &i in order {
                if chosen
                    .iter()
                    .all(|&c| separated(sys, &tr.states[i], &tr.states[c], n, eps))
                {
                    chosen.push(i);
                }
            }
        }
    }
    chosen
}

/// Maximum clique by branch and bound with greedy colouring bounds.
fn max_clique(adj: &[u64]) -> Vec<usize> {
    let n = adj.len();
    // degeneracy order: repeatedly remove a minimum-degree vertex
    let mut order = Vec::with_capacity(n);
    let mut alive: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    while alive != 0 {
        let v = (0..n)
            .filter(|&v| alive >> v & 1 == 1)
            .min_by_key(|&v| (adj[v] & alive).count_ones())
            .expect("alive vertex");
        order.push(v);
        alive &= !(1u64 << v);
    }
    order.reverse();

    struct Search<'a> {
        adj: &'a [u64],
        order: Vec<usize>,
        best: Vec<usize>,
    }
    impl Search<'_> {
        fn colour_bound(&self, p: u64) -> Vec<(usize, usize)> {
            // (vertex, colour) in increasing colour
            let mut out = Vec::new();
            let mut uncoloured = p;
            let mut colour = 0;
            while uncoloured != 0 {
                colour += 1;
                let mut avail = uncoloured;
                for &v in &self.order {
                    if avail >> v & 1 == 1 {
                        out.push((v, colour));
                        uncoloured &= !(1u64 << v);
                        avail &= !(1u64 << v) & !self.adj[v];
                    }
                }
            }
            out
        }

        fn expand(&mut self, r: &mut Vec<usize>, mut p: u64) {
            let coloured = self.colour_bound(p);
            for &(v, c) in coloured.iter().rev() {
                if r.len() + c <= self.best.len() {
                    return;
                }
                r.push(v);
                let np = p & self.adj[v];
                if np == 0 {
                    if r.len() > self.best.len() {
                        self.best = r.clone();
                    }
                } else {
                    self.expand(r, np);
                }
                r.pop();
                p &= !(1u64 << v);
            }
        }
    }

    let mut s = Search {
        adj,
        order,
        best: Vec::new(),
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if n > 0 {
        s.expand(&mut Vec::new(), all);
    }
    let mut best = s.best;
    best.sort_unstable();
    best
}

fn exact<S: StateSystem + ?Sized>(sys: &S, tr: &Trajectories, n: usize, eps: f64) -> Vec<usize> {
    let m = tr.states.len();
    let mut adj = vec![0u64; m];
    for i in 0..m {
        for j in i + 1..m {
            if separated(sys, &tr.states[i], &tr.states[j], n, eps) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    max_clique(&adj)
}

fn solve<S: StateSystem + ?Sized>(
    sys: &S,
    tr: &Trajectories,
    order: &[usize],
    n: usize,
    eps: f64,
    mode: SepMode,
) -> Result<Vec<usize>> {
    match mode {
        SepMode::Greedy => Ok(greedy(sys, tr, order, n, eps)),
        SepMode::Exact if tr.states.len() > EXACT_CAP => Err(Error::ExactCap {
            size: tr.states.len(),
            cap: EXACT_CAP,
        }),
        SepMode::Exact => Ok(exact(sys, tr, n, eps)),
    }
}

/// Largest (exact) or maximal-by-inclusion in sample order (greedy)
/// `(n, ε, A)`-separated subset of `sample`.
pub fn separated_set<S: StateSystem + ?Sized>(
    sys: &S,
    sample: &[usize],
    n: usize,
    eps: f64,
    a: &TimeSequence,
    mode: SepMode,
) -> Result<SeparatedSet> {
    if n == 0 || sample.is_empty() {
        return Err(Error::Parameter(
            "separated sets need n >= 1 and a nonempty sample".into(),
        ));
    }
    if let Some(&bad) = sample.iter().find(|&&x| x >= sys.num_states()) {
        return Err(Error::NotInSpace(format!("#{bad}")));
    }
    let times = a.observation_times(n)?;
    let tr = trajectories(sys, sample, &times, Exec::Sequential);
    let order: Vec<usize> = (0..sample.len()).collect();
    let idx = solve(sys, &tr, &order, n, eps, mode)?;
    Ok(SeparatedSet {
        cardinality: idx.len(),
        members: idx.into_iter().map(|i| sample[i]).collect(),
        method: mode,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyRow {
    pub eps: f64,
    pub n: usize,
    pub a_n: usize,
    pub s_n: usize,
    pub method: SepMode,
    /// `log(s_n) / a_n`.
    pub rate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyEstimate {
    pub rows: Vec<EntropyRow>,
    /// Least-squares slope of `log s_n` against `a_n` per `ε`, clamped at
    /// zero, over the rows below the saturation guard (all rows when fewer
    /// than three qualify).
    pub slopes: Vec<(f64, f64)>,
    pub estimate: f64,
    pub eps_range: (f64, f64),
    pub n_range: (usize, usize),
    pub label: String,
    pub note: Option<String>,
}

const LABEL: &str = "finite-resolution lower-bound estimate";

/// Rows whose separated set exceeds this fraction of the sample are left out
/// of the slope fit: there the grid spacing, not the dynamics, limits growth.
pub const SATURATION_GUARD: f64 = 0.125;

fn slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 || points.iter().all(|p| p.1 == points[0].1) {
        return 0.0;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        (sxy / sxx).max(0.0)
    }
}

/// Separated-set cardinalities over the `(ε, n)` grid and the growth-rate
/// estimate (largest per-`ε` slope). On a genuinely finite space `s_n` is
/// bounded by the number of points, so the estimate is exactly zero.
pub fn entropy_estimate(
    sys: &SystemDef,
    a: &TimeSequence,
    eps_list: &[f64],
    n_list: &[usize],
    sample: Option<&[usize]>,
    exec: Exec,
) -> Result<EntropyEstimate> {
    if eps_list.is_empty() || n_list.is_empty() || n_list.contains(&0) {
        return Err(Error::Parameter(
            "entropy needs nonempty eps and positive n grids".into(),
        ));
    }
    let all: Vec<usize> = (0..sys.space().len()).collect();
    let sample = sample.unwrap_or(&all);
    if sample.is_empty() {
        return Err(Error::Parameter("empty sample".into()));
    }
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut epss = eps_list.to_vec();
    epss.sort_by(|x, y| y.total_cmp(x));
    epss.dedup();
    let n_max = *ns.last().expect("nonempty");
    let times = a.observation_times(n_max)?;
    let tr = trajectories(sys, sample, &times, exec);
    let mode = SepMode::for_sample(sample.len());
    let order: Vec<usize> = (0..sample.len()).collect();

    let jobs: Vec<(f64, usize)> = epss.iter().flat_map(|&e| ns.iter().map(move |&n| (e, n))).collect();
    let sizes = exec.map(&jobs, |&(eps, n)| {
        solve(sys, &tr, &order, n, eps, mode).map(|v| v.len())
    });
    let mut rows = Vec::with_capacity(jobs.len());
    for (&(eps, n), s) in jobs.iter().zip(sizes) {
        let s_n = s?;
        let a_n = a.a(n)?;
        rows.push(EntropyRow {
            eps,
            n,
            a_n,
            s_n,
            method: mode,
            rate: (s_n as f64).ln() / a_n as f64,
        });
    }

    let finite = sys.space().kind() == SpaceKind::Finite;
    let guard = sample.len() as f64 * SATURATION_GUARD;
    let slopes: Vec<(f64, f64)> = epss
        .iter()
        .map(|&e| {
            let curve: Vec<&EntropyRow> = rows.iter().filter(|r| r.eps == e).collect();
            let unsaturated: Vec<(f64, f64)> = curve
                .iter()
                .filter(|r| r.s_n as f64 <= guard)
                .map(|r| (r.a_n as f64, (r.s_n as f64).ln()))
                .collect();
            let pts = if unsaturated.len() >= 3 {
                unsaturated
            } else {
                curve.iter().map(|r| (r.a_n as f64, (r.s_n as f64).ln())).collect()
            };
            let s = if finite {
                0.0
            } else if pts.len() == 1 {
                pts[0].1 / pts[0].0
            } else {
                slope(&pts)
            };
            (e, s)
        })
        .collect();
    let estimate = slopes.iter().map(|s| s.1).fold(0.0, f64::max);
    Ok(EntropyEstimate {
        rows,
        slopes,
        estimate,
        eps_range: (*epss.last().expect("nonempty"), epss[0]),
        n_range: (ns[0], n_max),
        label: LABEL.into(),
        note: finite.then(|| format!("finite space: s_n <= {} for all n", sys.space().len())),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub q: usize,
    pub states: usize,
    pub s_base: usize,
    pub s_dirac: usize,
    pub s_induced: usize,
    pub method: SepMode,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthTable {
    pub eps: f64,
    pub n: usize,
    pub rows: Vec<GrowthRow>,
    /// `s_base <= s_dirac` on every row.
    pub embedding_holds: bool,
    pub monotone: bool,
    pub note: Option<String>,
}

/// Separated-set sizes of the induced system on `M_q` for each `q`, next to
/// the base size and the size over Dirac images. Greedy runs visit the
/// previous row's witness first, so rows are nondecreasing whenever the
/// previous grid embeds in the next one.
pub fn induced_entropy_growth(
    base: &SystemDef,
    q_list: &[usize],
    a: &TimeSequence,
    eps: f64,
    n: usize,
    cap: usize,
    exec: Exec,
) -> Result<GrowthTable> {
    let s = base.space();
    let points: Vec<usize> = (0..s.len()).collect();
    let base_set = separated_set(base, &points, n, eps, a, SepMode::for_sample(points.len()))?;
    let times = a.observation_times(n)?;
    let mut rows = Vec::new();
    let mut note = None;
    let mut prev_witness: Vec<DiscreteMeasure> = Vec::new();
    for &q in q_list {
        let grid = match MeasureGridSystem::build(base, q, cap, exec) {
            Ok(g) => g,
            Err(Error::ResourceCap(msg)) => {
                note = Some(format!("stopped at q={q}: {msg}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let diracs: Vec<usize> = s
            .points()
            .map(|p: Point| {
                grid.index_of(&DiscreteMeasure::dirac(s, p).expect("point in space"))
                    .expect("Dirac in grid")
            })
            .collect();
        let dirac_set = separated_set(&grid, &diracs, n, eps, a, SepMode::for_sample(diracs.len()))?;
        let all: Vec<usize> = (0..grid.num_states()).collect();
        let mode = SepMode::for_sample(all.len());
        let tr = trajectories(&grid, &all, &times, exec);
        let seed: Vec<usize> = if prev_witness.is_empty() {
            dirac_set.members.clone()
        } else {
            prev_witness.iter().filter_map(|m| grid.index_of(m)).collect()
        };
        let mut order = seed.clone();
        order.extend(all.iter().copied().filter(|i| !seed.contains(i)));
        let chosen = solve(&grid, &tr, &order, n, eps, mode)?;
        prev_witness = chosen.iter().map(|&i| grid.measure(i).clone()).collect();
        rows.push(GrowthRow {
            q,
            states: grid.num_states(),
            s_base: base_set.cardinality,
            s_dirac: dirac_set.cardinality,
            s_induced: chosen.len(),
            method: mode,
        });
    }
    let embedding_holds = rows.iter().all(|r| r.s_base <= r.s_dirac && r.s_dirac <= r.s_induced);
    let monotone = rows.windows(2).all(|w| w[0].s_induced <= w[1].s_induced);
    Ok(GrowthTable {
        eps,
        n,
        rows,
        embedding_holds,
        monotone,
        note,
    })
}

//! Deciders for recurrence, chain and shadowing properties, sensitivity and
//! chaotic-pair statistics.
//!
//! Finite systems are handled through [`StateSystem`]: a finite state set,
//! a time-indexed transition and a metric. Points of a grid system and
//! measures of a measure grid `M_q` both fit. Open sets are represented by
//! singletons, which are open in the discrete topology of a finite set.

pub mod cells;
pub mod chains;
pub mod claims;
pub mod hitting;
pub mod pairs;
pub mod sensitivity;
pub mod shadowing;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{measure_grid, prohorov_fast, AtomRecord, DiscreteMeasure};
use crate::par::Exec;
use crate::scalar::Scalar;
use crate::space::{MetricSpace, Point};
use crate::systems::SystemDef;

pub use cells::{decide_cell_mixing, decide_cell_transitive, CellPartition};
pub use chains::{constructive_measure_chain, find_chain, validate_measure_chain, Chain, ChainSearch};
pub use claims::{verify_circle_obstruction, verify_ex56_convergence, verify_thm22_separation, Thm22Config};
pub use hitting::{decide_mixing, decide_transitive, decide_weak_mixing_order, hitting_times};
pub use pairs::{pair_stats, PairStats};
pub use sensitivity::{sensitivity_candidates, sensitivity_times, sensitivity_times_induced, verify_lemma41};
pub use shadowing::{decide_shadowing, recheck_pseudo_orbit, thm38_pseudo_orbit, verify_thm38, SHADOWING_NODE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

/// Re-checkable evidence attached to a verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `N({u}, {v})` is empty.
    EmptyHitting {
        u: usize,
        v: usize,
        u_label: String,
        v_label: String,
    },
    /// `f_0^n(u) != v` for every `n = first_miss + k * period`.
    PeriodicMiss {
        u: usize,
        v: usize,
        u_label: String,
        v_label: String,
        first_miss: usize,
        period: usize,
    },
    /// No common time `n >= 1` with `f_0^n(us[i]) = vs[i]` for all `i`.
    TupleMiss {
        us: Vec<usize>,
        vs: Vec<usize>,
        labels: Vec<(String, String)>,
    },
    /// A `delta`-pseudo-orbit prefix that no state `eps`-shadows.
    PseudoOrbit {
        states: Vec<usize>,
        labels: Vec<String>,
        delta: Scalar,
        eps: Scalar,
    },
    /// Interval cells `u`, `v` of a cell partition.
    Cells { u: usize, v: usize, detail: String },
    /// A sampled measure violating a claim at time `time`.
    Measure {
        atoms: Vec<AtomRecord>,
        time: usize,
        value: Scalar,
        detail: String,
    },
    /// A measure-level pseudo-orbit together with its best shadowing margin.
    MeasureOrbit {
        states: Vec<Vec<AtomRecord>>,
        detail: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyVerdict {
    pub property: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropertyVerdict {
    pub fn holds(property: &str) -> Self {
        PropertyVerdict {
            property: property.to_string(),
            status: Status::Holds,
            witness: None,
            horizon: None,
            note: None,
        }
    }

    pub fn fails(property: &str, witness: Witness) -> Self {
        PropertyVerdict {
            property: property.to_string(),
            status: Status::Fails,
            witness: Some(witness),
            horizon: None,
            note: None,
        }
    }

    pub fn unknown(property: &str, horizon: Option<usize>, note: impl Into<String>) -> Self {
        PropertyVerdict {
            property: property.to_string(),
            status: Status::Unknown,
            witness: None,
            horizon,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = Some(horizon);
        self
    }
}

/// A finite set of times `n` in `[1, horizon]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimeSet {
    pub horizon: usize,
    pub members: BTreeSet<usize>,
    /// Every time in the last half of the horizon is a member.
    pub cofinite_at_horizon: bool,
    /// Largest gap between consecutive members, counting from 0.
    pub max_gap: Option<usize>,
    /// `|members| / horizon`.
    pub lower_density: f64,
}

impl TimeSet {
    pub fn new(horizon: usize, members: BTreeSet<usize>) -> Self {
        debug_assert!(members.iter().all(|&n| (1..=horizon).contains(&n)));
        let tail_from = horizon / 2 + 1;
        let cofinite_at_horizon = horizon > 0 && (tail_from..=horizon).all(|n| members.contains(&n));
        let max_gap = if members.is_empty() {
            None
        } else {
            let mut prev = 0;
            let mut gap = 0;
            for &n in &members {
                gap = gap.max(n - prev);
                prev = n;
            }
            Some(gap)
        };
        let lower_density = if horizon == 0 {
            0.0
        } else {
            members.len() as f64 / horizon as f64
        };
        TimeSet {
            horizon,
            members,
            cofinite_at_horizon,
            max_gap,
            lower_density,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &TimeSet) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Syndetic with gap bound `l` up to the horizon.
    pub fn syndetic_with(&self, l: usize) -> bool {
        self.max_gap.map(|g| g <= l).unwrap_or(false)
            && self.members.last().map(|&m| self.horizon - m < l).unwrap_or(false)
    }
}

/// A finite state set with time-dependent transitions and a metric.
pub trait StateSystem: Sync {
    fn num_states(&self) -> usize;
    /// `f_n(s)`.
    fn step(&self, n: usize, s: usize) -> usize;
    fn distance(&self, a: usize, b: usize) -> Scalar;
    /// `(prefix, period)` such that `f_n` depends only on [`phase_of`].
    fn phases(&self) -> Option<(usize, usize)>;
    fn label(&self, s: usize) -> String;
    /// Distance as `f64`, for hot loops.
    fn distance_f64(&self, a: usize, b: usize) -> f64 {
        self.distance(a, b).to_f64()
    }
    /// Real coordinate with `|c(a) - c(b)| <= d(a, b)`, when states lie on a line.
    fn line_coordinate(&self, _s: usize) -> Option<f64> {
        None
    }
}

/// Phase index of time `n` under `(prefix, period)`.
pub fn phase_of(n: usize, (prefix, period): (usize, usize)) -> usize {
    if n < prefix {
        n
    } else {
        prefix + (n - prefix) % period
    }
}

/// Representative time of a phase.
pub fn phase_time(phase: usize) -> usize {
    phase
}

/// Next phase after `phase`.
pub fn next_phase(phase: usize, (prefix, period): (usize, usize)) -> usize {
    if phase + 1 < prefix + period {
        phase + 1
    } else {
        prefix
    }
}

impl StateSystem for SystemDef {
    fn num_states(&self) -> usize {
        self.space().len()
    }

    fn step(&self, n: usize, s: usize) -> usize {
        SystemDef::step(self, n, Point::from(s)).idx()
    }

    fn distance(&self, a: usize, b: usize) -> Scalar {
        self.space().distance(Point::from(a), Point::from(b))
    }

    fn phases(&self) -> Option<(usize, usize)> {
        SystemDef::phases(self)
    }

    fn label(&self, s: usize) -> String {
        self.space().label(Point::from(s)).to_string()
    }

    fn distance_f64(&self, a: usize, b: usize) -> f64 {
        self.space().distance_f64(Point::from(a), Point::from(b))
    }

    fn line_coordinate(&self, s: usize) -> Option<f64> {
        self.space().interval_bounds()?;
        self.space()
            .coordinate(Point::from(s))
            .map(|c| crate::scalar::rational_to_f64(&c))
    }
}

/// Default measure-grid resolution.
pub const DEFAULT_MEASURE_GRID: usize = 20;

/// The induced system restricted to the measure grid `M_q`, which
/// pushforward maps into itself.
pub struct MeasureGridSystem {
    space: Arc<MetricSpace>,
    q: usize,
    states: Vec<DiscreteMeasure>,
    index: HashMap<DiscreteMeasure, usize>,
    phases: (usize, usize),
    /// transition table per phase
    tables: Vec<Vec<usize>>,
    dist: Vec<Scalar>,
}

impl MeasureGridSystem {
    pub fn build(system: &SystemDef, q: usize, cap: usize, exec: Exec) -> Result<Self> {
        let phases = system
            .phases()
            .ok_or_else(|| Error::Parameter("measure grid needs an eventually periodic generator".into()))?;
        let space = system.space_arc();
        let states = measure_grid(&space, q, cap)?;
        let index: HashMap<DiscreteMeasure, usize> = states.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let nphase = phases.0 + phases.1;
        let tables = (0..nphase)
            .map(|ph| {
                let map = system.map_at(phase_time(ph));
                states.iter().map(|mu| index[&map.push(mu)]).collect()
            })
            .collect();
        let n = states.len();
        let rows = exec.map_range(0..n, |i| {
            (0..n)
                .map(|j| {
                    if j < i {
                        Scalar::ZERO
                    } else {
                        prohorov_fast(&space, &states[i], &states[j]).expect("same space")
                    }
                })
                .collect::<Vec<_>>()
        });
        let mut dist = vec![Scalar::ZERO; n * n];
        for (i, row) in rows.into_iter().enumerate() {
            for (j, d) in row.into_iter().enumerate().skip(i) {
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(MeasureGridSystem {
            space,
            q,
            states,
            index,
            phases,
            tables,
            dist,
        })
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn measure(&self, s: usize) -> &DiscreteMeasure {
        &self.states[s]
    }

    pub fn measures(&self) -> &[DiscreteMeasure] {
        &self.states
    }

    pub fn index_of(&self, mu: &DiscreteMeasure) -> Option<usize> {
        self.index.get(mu).copied()
    }
}

impl StateSystem for MeasureGridSystem {
    fn num_states(&self) -> usize {
        self.states.len()
    }

    fn step(&self, n: usize, s: usize) -> usize {
        self.tables[phase_of(n, self.phases)][s]
    }

    fn distance(&self, a: usize, b: usize) -> Scalar {
        self.dist[a * self.states.len() + b]
    }

    fn phases(&self) -> Option<(usize, usize)> {
        Some(self.phases)
    }

    fn label(&self, s: usize) -> String {
        self.states[s].describe(&self.space)
    }
}

/// States strictly within `r` of each state, computed on demand.
pub(crate) struct Balls<'a, S: StateSystem + ?Sized> {
    sys: &'a S,
    r: Scalar,
    cache: Vec<Option<Vec<usize>>>,
}

impl<'a, S: StateSystem + ?Sized> Balls<'a, S> {
    pub(crate) fn new(sys: &'a S, r: Scalar) -> Self {
        Balls {
            sys,
            r,
            cache: vec![None; sys.num_states()],
        }
    }

    pub(crate) fn get(&mut self, center: usize) -> &[usize] {
        if self.cache[center].is_none() {
            let (sys, r) = (self.sys, self.r);
            let ball = (0..sys.num_states())
                .filter(|&v| sys.distance(center, v).lt_tol(&r))
                .collect();
            self.cache[center] = Some(ball);
        }
        self.cache[center].as_deref().expect("filled")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::zoo;

    #[test]
    fn timeset_classification() {
        let t = TimeSet::new(10, (1..=10).filter(|n| n % 2 == 1).collect());
        assert_eq!(t.max_gap, Some(2));
        assert!(!t.cofinite_at_horizon);
        assert!((t.lower_density - 0.5).abs() < 1e-12);
        assert!(t.syndetic_with(2));
        let full = TimeSet::new(10, (3..=10).collect());
        assert!(full.cofinite_at_horizon);
        assert_eq!(full.max_gap, Some(3));
    }

    #[test]
    fn measure_grid_system_on_swap() {
        let sys = zoo::swap2();
        let grid = MeasureGridSystem::build(&sys, 4, 1000, Exec::default()).unwrap();
        assert_eq!(grid.num_states(), 5);
        for s in 0..5 {
            assert_eq!(grid.step(0, grid.step(0, s)), s);
            for t in 0..5 {
                assert!(grid.distance(s, t).identical(&grid.distance(t, s)));
            }
        }
        let half = grid
            .index_of(&DiscreteMeasure::empirical(sys.space(), &[Point(0), Point(1)]).unwrap())
            .unwrap();
        assert_eq!(grid.step(0, half), half);
    }
}

//! Hitting-time sets `N(U, V)` and the transitivity / mixing / weak-mixing
//! deciders built on eventually periodic singleton orbits.

use std::collections::{BTreeSet, HashMap};

use super::{phase_of, PropertyVerdict, StateSystem, TimeSet, Witness};
use crate::error::{Error, Result};
use crate::par::Exec;

/// Product-state cap for weak mixing of higher order.
pub const PRODUCT_CAP: usize = 1 << 20;

/// `N(U, V) ∩ [1, horizon]` by forward propagation of `U`.
pub fn hitting_times<S: StateSystem + ?Sized>(
    sys: &S,
    u: &BTreeSet<usize>,
    v: &BTreeSet<usize>,
    horizon: usize,
) -> Result<TimeSet> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::Parameter("hitting sets need nonempty U and V".into()));
    }
    let mut cur = u.clone();
    let mut members = BTreeSet::new();
    for n in 1..=horizon {
        cur = cur.iter().map(|&x| sys.step(n - 1, x)).collect();
        if cur.iter().any(|x| v.contains(x)) {
            members.insert(n);
        }
    }
    Ok(TimeSet::new(horizon, members))
}

/// Orbit of a tuple of states until its configuration (tuple, phase) repeats.
#[derive(Clone, Debug)]
pub(crate) struct TupleOrbit {
    /// states at times `0 .. cycle_start + period`
    pub states: Vec<Vec<usize>>,
    pub cycle_start: usize,
    pub period: usize,
}

impl TupleOrbit {
    pub(crate) fn at(&self, n: usize) -> &[usize] {
        if n < self.states.len() {
            &self.states[n]
        } else {
            &self.states[self.cycle_start + (n - self.cycle_start) % self.period]
        }
    }

    /// Distinct tuples occurring at times `n >= 1`.
    pub(crate) fn reached(&self) -> BTreeSet<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = self.states[1..].iter().cloned().collect();
        if self.cycle_start == 0 {
            out.insert(self.states[0].clone());
        }
        out
    }
}

pub(crate) fn tuple_orbit<S: StateSystem + ?Sized>(sys: &S, start: &[usize], phases: (usize, usize)) -> TupleOrbit {
    let mut seen: HashMap<(Vec<usize>, usize), usize> = HashMap::new();
    let mut states = Vec::new();
    let mut cur = start.to_vec();
    let mut n = 0usize;
    loop {
        let key = (cur.clone(), phase_of(n, phases));
        if let Some(&first) = seen.get(&key) {
            return TupleOrbit {
                states,
                cycle_start: first,
                period: n - first,
            };
        }
        seen.insert(key, n);
        let next = cur.iter().map(|&x| sys.step(n, x)).collect();
        states.push(std::mem::replace(&mut cur, next));
        n += 1;
    }
}

fn no_phases(property: &str) -> PropertyVerdict {
    PropertyVerdict::unknown(property, None, "generator is not eventually periodic")
}

/// Transitivity over singleton open sets: `N({u}, {v}) != ∅` for all `u, v`.
pub fn decide_transitive<S: StateSystem + ?Sized>(sys: &S, exec: Exec) -> PropertyVerdict {
    const P: &str = "transitive";
    let Some(phases) = sys.phases() else {
        return no_phases(P);
    };
    let n = sys.num_states();
    let missing = exec.map_range(0..n, |u| {
        let reached: BTreeSet<usize> = tuple_orbit(sys, &[u], phases)
            .reached()
            .into_iter()
            .map(|t| t[0])
            .collect();
        (0..n).find(|v| !reached.contains(v))
    });
    match missing.into_iter().enumerate().find_map(|(u, v)| v.map(|v| (u, v))) {
        None => PropertyVerdict::holds(P),
        Some((u, v)) => PropertyVerdict::fails(
            P,
            Witness::EmptyHitting {
                u,
                v,
                u_label: sys.label(u),
                v_label: sys.label(v),
            },
        ),
    }
}

/// Mixing over singleton open sets: `N({u}, {v})` cofinite for all `u, v`.
pub fn decide_mixing<S: StateSystem + ?Sized>(sys: &S, exec: Exec) -> PropertyVerdict {
    const P: &str = "mixing";
    let Some(phases) = sys.phases() else {
        return no_phases(P);
    };
    let n = sys.num_states();
    let found = exec.map_range(0..n, |u| {
        let orbit = tuple_orbit(sys, &[u], phases);
        let start = orbit.cycle_start.max(1);
        (0..n).find_map(|v| {
            (start..start + orbit.period)
                .find(|&t| orbit.at(t)[0] != v)
                .map(|t| (v, t, orbit.period))
        })
    });
    match found.into_iter().enumerate().find_map(|(u, f)| f.map(|f| (u, f))) {
        None => PropertyVerdict::holds(P),
        Some((u, (v, first_miss, period))) => PropertyVerdict::fails(
            P,
            Witness::PeriodicMiss {
                u,
                v,
                u_label: sys.label(u),
                v_label: sys.label(v),
                first_miss,
                period,
            },
        ),
    }
}

fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(k as u32)).map(move |mut i| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = i % n;
            i /= n;
        }
        t
    })
}

/// Weak mixing of order `k`: transitivity of the `k`-fold product over
/// singleton open sets.
pub fn decide_weak_mixing_order<S: StateSystem + ?Sized>(sys: &S, k: usize, exec: Exec) -> PropertyVerdict {
    let property = format!("weak_mixing_order_{k}");
    let Some(phases) = sys.phases() else {
        return no_phases(&property);
    };
    let n = sys.num_states();
    let total = match n.checked_pow(k as u32) {
        Some(t) if t <= PRODUCT_CAP && k >= 1 => t,
        _ => return PropertyVerdict::unknown(&property, None, format!("product exceeds {PRODUCT_CAP} states")),
    };
    let starts: Vec<Vec<usize>> = tuples(n, k).collect();
    let missing = exec.map(&starts, |us| {
        let reached = tuple_orbit(sys, us, phases).reached();
        if reached.len() == total {
            None
        } else {
            tuples(n, k).find(|vs| !reached.contains(vs))
        }
    });
    match starts.into_iter().zip(missing).find_map(|(us, m)| m.map(|vs| (us, vs))) {
        None => PropertyVerdict::holds(&property),
        Some((us, vs)) => {
            let labels = us
                .iter()
                .zip(&vs)
                .map(|(&u, &v)| (sys.label(u), sys.label(v)))
                .collect();
            PropertyVerdict::fails(&property, Witness::TupleMiss { us, vs, labels })
        }
    }
}

/// Re-validate a hitting-type witness against the system.
pub fn recheck_hitting_witness<S: StateSystem + ?Sized>(sys: &S, witness: &Witness) -> bool {
    let Some(phases) = sys.phases() else {
        return false;
    };
    match witness {
        Witness::EmptyHitting { u, v, .. } => !tuple_orbit(sys, &[*u], phases).reached().contains(&vec![*v]),
        Witness::PeriodicMiss {
            u,
            v,
            first_miss,
            period,
            ..
        } => {
            // the configuration at first_miss recurs after `period` steps
            let orbit = tuple_orbit(sys, &[*u], phases);
            let (a, b) = (*first_miss, first_miss + period);
            *first_miss >= 1
                && orbit.at(a) == orbit.at(b)
                && phase_of(a, phases) == phase_of(b, phases)
                && orbit.at(a)[0] != *v
        }
        Witness::TupleMiss { us, vs, .. } => !tuple_orbit(sys, us, phases).reached().contains(vs),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::Status;
    use crate::space::MetricSpace;
    use crate::systems::{zoo, MapSpec, SystemDef};

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn swap_hitting_times() {
        let sys = zoo::swap2();
        let t = hitting_times(&sys, &set(&[0]), &set(&[1]), 6).unwrap();
        assert_eq!(t.members, set(&[1, 3, 5]));
        let t = hitting_times(&sys, &set(&[0]), &set(&[0]), 6).unwrap();
        assert_eq!(t.members, set(&[2, 4, 6]));
        assert!(hitting_times(&sys, &set(&[]), &set(&[0]), 6).is_err());
    }

    #[test]
    fn swap_transitive_not_mixing() {
        let sys = zoo::swap2();
        assert_eq!(decide_transitive(&sys, Exec::Sequential).status, Status::Holds);
        let m = decide_mixing(&sys, Exec::Sequential);
        assert_eq!(m.status, Status::Fails);
        let w = m.witness.unwrap();
        assert!(recheck_hitting_witness(&sys, &w));
        let wm = decide_weak_mixing_order(&sys, 2, Exec::Sequential);
        assert_eq!(wm.status, Status::Fails);
        assert!(recheck_hitting_witness(&sys, &wm.witness.unwrap()));
    }

    #[test]
    fn identity_not_transitive() {
        let sys = SystemDef::autonomous("id", MetricSpace::two_point(), MapSpec::Identity).unwrap();
        let v = decide_transitive(&sys, Exec::Sequential);
        assert_eq!(v.status, Status::Fails);
        assert!(matches!(v.witness, Some(Witness::EmptyHitting { u: 0, v: 1, .. })));
        assert!(recheck_hitting_witness(&sys, v.witness.as_ref().unwrap()));
    }

    #[test]
    fn fig1_right_half_maps_left() {
        let sys = zoo::fig1(16).unwrap();
        let s = sys.space();
        let pts = |a, b| -> BTreeSet<usize> {
            s.points()
                .filter(|&p| {
                    let c = s.coordinate(p).unwrap();
                    c > a && c <= b
                })
                .map(|p| p.idx())
                .collect()
        };
        use crate::scalar::rat;
        let u = pts(rat(0, 1), rat(1, 1));
        let v: BTreeSet<usize> = s
            .points()
            .filter(|&p| s.coordinate(p).unwrap() < rat(0, 1))
            .map(|p| p.idx())
            .collect();
        let _ = &pts;
        assert!(hitting_times(&sys, &u, &v, 4).unwrap().members.contains(&1));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let sys = zoo::ex34(16).unwrap();
        let a = decide_transitive(&sys, Exec::Sequential);
        let b = decide_transitive(&sys, Exec::Parallel);
        assert_eq!(a, b);
    }
}

//! Exact shadowing decider on finite systems and the explicit unshadowable
//! pseudo-orbit of the induced two-point swap.
//!
//! A configuration is `(x, phase, S)`: the current pseudo-orbit state, the
//! phase of the current time, and the set `S` of current positions of all
//! true orbits that have stayed strictly within `eps` of the pseudo-orbit so
//! far. A reachable configuration with `S = ∅` is a failure: every state has
//! its own image as a δ-successor, so the prefix extends to an infinite
//! unshadowed pseudo-orbit. If no such configuration is reachable, every
//! δ-pseudo-orbit is shadowed.

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::chains::Chain;
use super::{next_phase, phase_of, phase_time, Balls, PropertyVerdict, StateSystem, Witness};
use crate::error::{Error, Result};
use crate::measure::{prohorov_fast, DiscreteMeasure};
use crate::par::Exec;
use crate::scalar::{rat, Rational, Scalar};
use crate::space::Point;
use crate::systems::{induced, zoo, SystemDef};

/// Configuration cap of the subset construction.
pub const SHADOWING_NODE_CAP: usize = 2_000_000;

type Bits = Vec<u64>;

fn bits_of(n: usize, items: impl IntoIterator<Item = usize>) -> Bits {
    let mut b = vec![0u64; n.div_ceil(64)];
    for i in items {
        b[i / 64] |= 1 << (i % 64);
    }
    b
}

fn members(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter()
        .enumerate()
        .flat_map(|(w, &word)| (0..64).filter(move |i| word >> i & 1 == 1).map(move |i| w * 64 + i))
}

struct Node {
    x: usize,
    phase: usize,
    set: Bits,
    parent: Option<usize>,
}

/// Does every `delta`-pseudo-orbit have an `eps`-shadowing true orbit?
pub fn decide_shadowing<S: StateSystem + ?Sized>(sys: &S, delta: Scalar, eps: Scalar, cap: usize) -> PropertyVerdict {
    const P: &str = "shadowing";
    let Some(phases) = sys.phases() else {
        return PropertyVerdict::unknown(P, None, "generator is not eventually periodic");
    };
    let n = sys.num_states();
    let mut dballs = Balls::new(sys, delta);
    let mut eballs = Balls::new(sys, eps);
    let mut nodes: Vec<Node> = Vec::new();
    let mut index: HashMap<(usize, usize, Bits), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let start_phase = phase_of(0, phases);
    for x in 0..n {
        let set = bits_of(n, eballs.get(x).iter().copied());
        let key = (x, start_phase, set.clone());
        if index.contains_key(&key) {
            continue;
        }
        index.insert(key, nodes.len());
        queue.push_back(nodes.len());
        nodes.push(Node {
            x,
            phase: start_phase,
            set,
            parent: None,
        });
    }
    while let Some(id) = queue.pop_front() {
        let (x, phase) = (nodes[id].x, nodes[id].phase);
        let t = phase_time(phase);
        let moved: Vec<usize> = {
            let mut m: Vec<usize> = members(&nodes[id].set).map(|w| sys.step(t, w)).collect();
            m.sort_unstable();
            m.dedup();
            m
        };
        let succ = dballs.get(sys.step(t, x)).to_vec();
        for x2 in succ {
            let ball = eballs.get(x2);
            let kept: Vec<usize> = moved
                .iter()
                .copied()
                .filter(|w| ball.binary_search(w).is_ok())
                .collect();
            if kept.is_empty() {
                let mut states = vec![x2];
                let mut cur = Some(id);
                while let Some(c) = cur {
                    states.push(nodes[c].x);
                    cur = nodes[c].parent;
                }
                states.reverse();
                let labels = states.iter().map(|&s| sys.label(s)).collect();
                return PropertyVerdict::fails(
                    P,
                    Witness::PseudoOrbit {
                        states,
                        labels,
                        delta,
                        eps,
                    },
                );
            }
            let set = bits_of(n, kept);
            let ph2 = next_phase(phase, phases);
            let key = (x2, ph2, set.clone());
            if index.contains_key(&key) {
                continue;
            }
            if nodes.len() >= cap {
                return PropertyVerdict::unknown(P, None, format!("node cap {cap} reached"));
            }
            index.insert(key, nodes.len());
            queue.push_back(nodes.len());
            nodes.push(Node {
                x: x2,
                phase: ph2,
                set,
                parent: Some(id),
            });
        }
    }
    PropertyVerdict::holds(P).with_note(format!("{} configurations explored", nodes.len()))
}

/// Recheck a pseudo-orbit witness: valid δ-hops and no `eps`-shadowing state.
pub fn recheck_pseudo_orbit<S: StateSystem + ?Sized>(sys: &S, witness: &Witness) -> bool {
    let Witness::PseudoOrbit { states, delta, eps, .. } = witness else {
        return false;
    };
    let hops_ok =
        (0..states.len().saturating_sub(1)).all(|i| sys.distance(sys.step(i, states[i]), states[i + 1]).lt_tol(delta));
    let unshadowed = (0..sys.num_states()).all(|z| {
        let mut cur = z;
        for (i, &x) in states.iter().enumerate() {
            if !sys.distance(cur, x).lt_tol(eps) {
                return true;
            }
            cur = sys.step(i, cur);
        }
        false
    });
    hops_ok && unshadowed
}

/// Index of the first time at which the pseudo-orbit stays at the midpoint.
pub fn thm38_n0(delta: Rational) -> usize {
    (Rational::one() / delta).floor().to_integer().to_usize().unwrap_or(0)
}

/// Least even time beyond `n0`.
pub fn thm38_big_n0(delta: Rational) -> usize {
    let n0 = thm38_n0(delta);
    if n0.is_multiple_of(2) {
        n0 + 2
    } else {
        n0 + 1
    }
}

/// `ν_n = (1 - nδ/2) δ_a + (nδ/2) δ_b` for even `n <= n0`, the same with
/// `a, b` exchanged for odd `n`, and `(δ_a + δ_b)/2` after `n0`.
pub fn thm38_measure(sys: &SystemDef, delta: Rational, n: usize) -> Result<DiscreteMeasure> {
    let s = sys.space();
    let (a, b) = (Point(0), Point(1));
    if n > thm38_n0(delta) {
        return DiscreteMeasure::empirical(s, &[a, b]);
    }
    let t = delta * Rational::from_integer(n as i128) / Rational::from_integer(2);
    let (major, minor) = if n.is_multiple_of(2) { (a, b) } else { (b, a) };
    DiscreteMeasure::from_atoms(s, [(major, Rational::one() - t), (minor, t)])
}

/// The pseudo-orbit `ν_0, …, ν_{N0}` on the induced two-point swap.
pub fn thm38_pseudo_orbit(delta: Rational) -> Result<(SystemDef, Chain<DiscreteMeasure>)> {
    if delta <= Rational::zero() || delta >= rat(1, 2) {
        return Err(Error::Parameter("delta must lie in (0, 1/2)".into()));
    }
    let sys = zoo::swap2();
    let len = thm38_big_n0(delta);
    let states = (0..=len)
        .map(|n| thm38_measure(&sys, delta, n))
        .collect::<Result<Vec<_>>>()?;
    let ind = induced(&sys);
    let hop_slacks = (0..len)
        .map(|n| prohorov_fast(sys.space(), &ind.step(n, &states[n]), &states[n + 1]))
        .collect::<Result<Vec<_>>>()?;
    let chain = Chain {
        states,
        delta: Scalar::Exact(delta),
        hop_slacks,
        start_time: 0,
    };
    Ok((sys, chain))
}

/// Check the pseudo-orbit (hops `<= δ/2`) and that every
/// `μ_α = α δ_a + (1-α) δ_b` on the `1/alpha_den` grid ends up at least
/// `ε0 = P(δ_a, (δ_a+δ_b)/2) / 2` away at time 0 or `N0`.
pub fn verify_thm38(delta: Rational, alpha_den: usize, exec: Exec) -> Result<PropertyVerdict> {
    const P: &str = "thm38_non_shadowing";
    let (sys, chain) = thm38_pseudo_orbit(delta)?;
    let s = sys.space();
    let half_delta = Scalar::Exact(delta / Rational::from_integer(2));
    if let Some(i) = chain.hop_slacks.iter().position(|h| !h.le_tol(&half_delta)) {
        return Ok(PropertyVerdict::fails(
            P,
            Witness::Measure {
                atoms: chain.states[i].to_records(s),
                time: i,
                value: chain.hop_slacks[i],
                detail: "pseudo-orbit hop exceeds delta/2".into(),
            },
        ));
    }
    let da = DiscreteMeasure::dirac(s, Point(0))?;
    let mid = DiscreteMeasure::empirical(s, &[Point(0), Point(1)])?;
    let eps0 = Scalar::Exact(prohorov_fast(s, &da, &mid)?.as_rational().expect("exact") / Rational::from_integer(2));
    let big_n0 = chain.len();
    let nu0 = &chain.states[0];
    let nu_end = &chain.states[big_n0];
    let ind = induced(&sys);
    let alphas: Vec<usize> = (0..=alpha_den).collect();
    let results = exec.map(
        &alphas,
        |&j| -> Result<Option<(DiscreteMeasure, Scalar, &'static str)>> {
            let alpha = Rational::new(j as i128, alpha_den as i128);
            let mu = DiscreteMeasure::interpolate(alpha, &da, &DiscreteMeasure::dirac(s, Point(1))?)?;
            let start = prohorov_fast(s, &mu, nu0)?;
            let end = prohorov_fast(s, &ind.compose(&mu, big_n0), nu_end)?;
            let worst = start.max_total(end);
            let closed = Scalar::Exact((Rational::one() - alpha).max((alpha - rat(1, 2)).abs()));
            if !worst.eq_tol(&closed) {
                return Ok(Some((mu, worst, "oracle disagrees with max(1-a, |a-1/2|)")));
            }
            if worst.lt_tol(&eps0) {
                return Ok(Some((mu, worst, "measure shadows the pseudo-orbit")));
            }
            Ok(None)
        },
    );
    for r in results {
        if let Some((mu, value, detail)) = r? {
            return Ok(PropertyVerdict::fails(
                P,
                Witness::Measure {
                    atoms: mu.to_records(s),
                    time: big_n0,
                    value,
                    detail: detail.into(),
                },
            ));
        }
    }
    Ok(PropertyVerdict::holds(P).with_note(format!(
        "n0={}, N0={big_n0}, eps0={eps0}, max hop {}",
        thm38_n0(delta),
        chain.max_slack()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::{MeasureGridSystem, Status};
    use crate::space::MetricSpace;
    use crate::systems::MapSpec;

    #[test]
    fn swap_base_has_shadowing() {
        let sys = zoo::swap2();
        let v = decide_shadowing(&sys, Scalar::exact(1, 2), Scalar::exact(1, 2), SHADOWING_NODE_CAP);
        assert_eq!(v.status, Status::Holds);
        let id = SystemDef::autonomous("id", MetricSpace::two_point(), MapSpec::Identity).unwrap();
        let v = decide_shadowing(&id, Scalar::exact(1, 2), Scalar::exact(1, 2), SHADOWING_NODE_CAP);
        assert_eq!(v.status, Status::Holds);
    }

    #[test]
    fn induced_swap_fails_shadowing() {
        let sys = zoo::swap2();
        let grid = MeasureGridSystem::build(&sys, 20, 10_000, Exec::default()).unwrap();
        let v = decide_shadowing(&grid, Scalar::exact(1, 10), Scalar::exact(6, 25), SHADOWING_NODE_CAP);
        assert_eq!(v.status, Status::Fails);
        assert!(recheck_pseudo_orbit(&grid, v.witness.as_ref().unwrap()));
    }

    #[test]
    fn thm38_construction() {
        let delta = rat(1, 10);
        assert_eq!(thm38_n0(delta), 10);
        assert_eq!(thm38_big_n0(delta), 12);
        let (sys, chain) = thm38_pseudo_orbit(delta).unwrap();
        let s = sys.space();
        let nu1 = DiscreteMeasure::from_atoms(s, [(Point(1), rat(19, 20)), (Point(0), rat(1, 20))]).unwrap();
        assert_eq!(chain.states[1], nu1);
        assert!(chain.hop_slacks.iter().all(|h| h.le_tol(&Scalar::exact(1, 20))));
        let v = verify_thm38(delta, 1000, Exec::default()).unwrap();
        assert_eq!(v.status, Status::Holds, "{v:?}");
        assert!(thm38_pseudo_orbit(rat(1, 2)).is_err());
    }
}

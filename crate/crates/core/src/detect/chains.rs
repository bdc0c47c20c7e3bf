//! δ-chains: breadth-first search on the δ-edge graph and the constructive
//! measure-level chain between any two measures of a surjective system.

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{phase_of, Balls, StateSystem};
use crate::error::{Error, Result};
use crate::measure::{prohorov_fast, DiscreteMeasure};
use crate::scalar::{Rational, Scalar};
use crate::space::Point;
use crate::systems::{induced, SystemDef};

/// A finite pseudo-orbit `states[0..=k]` started at time `start_time`, with
/// `hop_slacks[i] = d(f_{start+i}(states[i]), states[i+1])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Chain<S> {
    pub states: Vec<S>,
    pub delta: Scalar,
    pub hop_slacks: Vec<Scalar>,
    pub start_time: usize,
}

impl<S> Chain<S> {
    pub fn len(&self) -> usize {
        self.states.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every hop strictly below `delta`.
    pub fn is_valid(&self) -> bool {
        self.hop_slacks.len() + 1 == self.states.len() && self.hop_slacks.iter().all(|h| h.lt_tol(&self.delta))
    }

    pub fn max_slack(&self) -> Scalar {
        self.hop_slacks.iter().copied().fold(Scalar::ZERO, Scalar::max_total)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ChainSearch {
    Found(Chain<usize>),
    Absent {
        /// A set containing every δ-successor of `x` at time 0 and closed
        /// under δ-successors at every phase, avoiding `y`.
        closure: Option<BTreeSet<usize>>,
        /// Absence holds for every length, not just up to `max_len`.
        certified: bool,
    },
}

impl ChainSearch {
    pub fn chain(&self) -> Option<&Chain<usize>> {
        match self {
            ChainSearch::Found(c) => Some(c),
            ChainSearch::Absent { .. } => None,
        }
    }
}

fn succ<S: StateSystem + ?Sized>(sys: &S, balls: &mut Balls<'_, S>, n: usize, u: usize) -> Vec<usize> {
    balls.get(sys.step(n, u)).to_vec()
}

/// Successor closure over all phases, seeded with the time-0 successors of `x`.
fn closure<S: StateSystem + ?Sized>(
    sys: &S,
    balls: &mut Balls<'_, S>,
    x: usize,
    phases: (usize, usize),
) -> BTreeSet<usize> {
    let nphase = phases.0 + phases.1;
    let mut set: BTreeSet<usize> = succ(sys, balls, 0, x).into_iter().collect();
    let mut stack: Vec<usize> = set.iter().copied().collect();
    while let Some(u) = stack.pop() {
        for ph in 0..nphase {
            for v in succ(sys, balls, ph, u) {
                if set.insert(v) {
                    stack.push(v);
                }
            }
        }
    }
    set
}

/// Recheck an absence certificate.
pub fn recheck_closure<S: StateSystem + ?Sized>(
    sys: &S,
    x: usize,
    y: usize,
    delta: Scalar,
    set: &BTreeSet<usize>,
) -> bool {
    let Some(phases) = sys.phases() else {
        return false;
    };
    let mut balls = Balls::new(sys, delta);
    let nphase = phases.0 + phases.1;
    !set.contains(&y)
        && succ(sys, &mut balls, 0, x).iter().all(|v| set.contains(v))
        && set
            .iter()
            .all(|&u| (0..nphase).all(|ph| succ(sys, &mut balls, ph, u).iter().all(|v| set.contains(v))))
}

/// Shortest δ-chain from `x` to `y` (length `>= 1`), lexicographically least
/// among the shortest, or a certificate of absence.
pub fn find_chain<S: StateSystem + ?Sized>(sys: &S, x: usize, y: usize, delta: Scalar, max_len: usize) -> ChainSearch {
    let mut balls = Balls::new(sys, delta);
    if let Some(phases) = sys.phases() {
        let set = closure(sys, &mut balls, x, phases);
        if !set.contains(&y) {
            return ChainSearch::Absent {
                closure: Some(set),
                certified: true,
            };
        }
    }
    let mut layers: Vec<BTreeSet<usize>> = vec![BTreeSet::from([x])];
    let mut seen: HashSet<(BTreeSet<usize>, usize)> = HashSet::new();
    for n in 0..max_len {
        let next: BTreeSet<usize> = layers[n].iter().flat_map(|&u| succ(sys, &mut balls, n, u)).collect();
        let hit = next.contains(&y);
        layers.push(next);
        if hit {
            return ChainSearch::Found(reconstruct(sys, &mut balls, &layers, y, delta));
        }
        if let Some(phases) = sys.phases() {
            let key = (layers[n + 1].clone(), phase_of(n + 1, phases));
            if !seen.insert(key) {
                return ChainSearch::Absent {
                    closure: None,
                    certified: true,
                };
            }
        }
    }
    ChainSearch::Absent {
        closure: None,
        certified: false,
    }
}

fn reconstruct<S: StateSystem + ?Sized>(
    sys: &S,
    balls: &mut Balls<'_, S>,
    layers: &[BTreeSet<usize>],
    y: usize,
    delta: Scalar,
) -> Chain<usize> {
    let k = layers.len() - 1;
    // back[j]: states of layer j from which y is reachable at time k
    let mut back: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k + 1];
    back[k].insert(y);
    for j in (0..k).rev() {
        let keep: BTreeSet<usize> = layers[j]
            .iter()
            .copied()
            .filter(|&u| succ(sys, balls, j, u).iter().any(|v| back[j + 1].contains(v)))
            .collect();
        back[j] = keep;
    }
    let mut states = vec![*layers[0].iter().next().expect("start")];
    for j in 0..k {
        let next = succ(sys, balls, j, states[j])
            .into_iter()
            .find(|v| back[j + 1].contains(v))
            .expect("backward set is reachable");
        states.push(next);
    }
    let hop_slacks = (0..k)
        .map(|j| sys.distance(sys.step(j, states[j]), states[j + 1]))
        .collect();
    Chain {
        states,
        delta,
        hop_slacks,
        start_time: 0,
    }
}

/// Recompute the slacks of a state chain and check validity.
pub fn validate_state_chain<S: StateSystem + ?Sized>(sys: &S, chain: &Chain<usize>) -> bool {
    let recomputed: Vec<Scalar> = (0..chain.len())
        .map(|i| {
            let n = chain.start_time + i;
            sys.distance(sys.step(n, chain.states[i]), chain.states[i + 1])
        })
        .collect();
    recomputed.len() == chain.hop_slacks.len()
        && recomputed.iter().zip(&chain.hop_slacks).all(|(a, b)| a.identical(b))
        && chain.is_valid()
}

/// Recompute the slacks of a measure chain with the Prohorov solver.
pub fn validate_measure_chain(sys: &SystemDef, chain: &Chain<DiscreteMeasure>) -> Result<bool> {
    let ind = induced(sys);
    for i in 0..chain.len() {
        let image = ind.step(chain.start_time + i, &chain.states[i]);
        let slack = prohorov_fast(sys.space(), &image, &chain.states[i + 1])?;
        if !slack.identical(&chain.hop_slacks[i]) {
            return Ok(false);
        }
    }
    Ok(chain.is_valid())
}

/// Least `N` with `N * eps / 2 >= 1`.
pub fn interpolation_steps(eps: Rational) -> Result<usize> {
    if eps <= Rational::zero() {
        return Err(Error::Parameter("eps must be positive".into()));
    }
    (Rational::from_integer(2) / eps)
        .ceil()
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::Parameter("eps too small".into()))
}

/// Point `x` with `f_0^k(x) = y`, built from smallest one-step preimages.
pub fn iterated_preimage(sys: &SystemDef, y: Point, k: usize) -> Result<Point> {
    (0..k)
        .rev()
        .try_fold(y, |target, j| sys.map_at(j).preimage_witness(sys.space(), target))
}

/// The interpolating chain from `mu` to `nu` of length `k`:
/// `mu_n = (1 - n eps/2) f̂_0^n(mu) + (n eps/2) f̂_0^n(nu*)` for `n < N`, then
/// `f̂_0^n(nu*)`, where `f̂_0^k(nu*) = nu`.
pub fn constructive_measure_chain(
    sys: &SystemDef,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    eps: Rational,
    k: usize,
) -> Result<Chain<DiscreteMeasure>> {
    let big_n = interpolation_steps(eps)?;
    if k < big_n {
        return Err(Error::ChainTooShort { k, min: big_n });
    }
    let space = sys.space();
    let pre = nu
        .atoms()
        .iter()
        .map(|&(y, w)| Ok((iterated_preimage(sys, y, k)?, w)))
        .collect::<Result<Vec<_>>>()?;
    let nu_star = DiscreteMeasure::from_atoms(space, pre)?;
    let ind = induced(sys);
    let mu_orbit = ind.orbit(mu, big_n);
    let star_orbit = ind.orbit(&nu_star, k);
    let half = eps / Rational::from_integer(2);
    let mut states = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let t = (half * Rational::from_integer(n as i128)).min(Rational::one());
        let state = if n < big_n && t < Rational::one() {
            DiscreteMeasure::interpolate(t, &star_orbit[n], &mu_orbit[n])?
        } else {
            star_orbit[n].clone()
        };
        states.push(state);
    }
    let hop_slacks = (0..k)
        .map(|n| prohorov_fast(space, &ind.step(n, &states[n]), &states[n + 1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Chain {
        states,
        delta: Scalar::Exact(eps),
        hop_slacks,
        start_time: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::systems::zoo;

    #[test]
    fn swap_chain_of_length_one() {
        let sys = zoo::swap2();
        let r = find_chain(&sys, 0, 1, Scalar::exact(1, 2), 3);
        let c = r.chain().unwrap();
        assert_eq!(c.states, vec![0, 1]);
        assert!(validate_state_chain(&sys, c));
    }

    #[test]
    fn ex34_chain_absent_with_closure() {
        let sys = zoo::ex34(16).unwrap();
        let s = sys.space();
        let y = s.snap_interval(Scalar::exact(2, 3)).unwrap().idx();
        let delta = Scalar::exact(3, 10);
        match find_chain(&sys, 0, y, delta, 100) {
            ChainSearch::Absent {
                closure: Some(c),
                certified: true,
            } => {
                assert!(recheck_closure(&sys, 0, y, delta, &c));
                assert!(c.iter().all(|&p| s.coordinate(Point::from(p)).unwrap() < rat(3, 10)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn interpolation_count() {
        assert_eq!(interpolation_steps(rat(1, 2)).unwrap(), 4);
        assert_eq!(interpolation_steps(rat(1, 4)).unwrap(), 8);
        assert_eq!(interpolation_steps(rat(2, 5)).unwrap(), 5);
    }

    #[test]
    fn swap_constructive_chains() {
        let sys = zoo::swap2();
        let s = sys.space();
        let a = DiscreteMeasure::dirac(s, Point(0)).unwrap();
        let mu = DiscreteMeasure::from_atoms(s, [(Point(0), rat(3, 4)), (Point(1), rat(1, 4))]).unwrap();
        assert!(matches!(
            constructive_measure_chain(&sys, &mu, &a, rat(1, 2), 3),
            Err(Error::ChainTooShort { k: 3, min: 4 })
        ));
        for k in 4..=8 {
            let c = constructive_measure_chain(&sys, &mu, &a, rat(1, 2), k).unwrap();
            assert!(c.is_valid());
            assert_eq!(c.states[k], a);
            assert!(c.hop_slacks.iter().all(|h| h.le_tol(&Scalar::exact(1, 4))));
            assert!(validate_measure_chain(&sys, &c).unwrap());
        }
        let c = constructive_measure_chain(&sys, &a, &a, rat(1, 2), 4).unwrap();
        assert_eq!(c.states[0], a);
        assert_eq!(c.states[4], a);
    }
}

//! Exact max-flow (Dinic) over rational capacities and the maximum-weight
//! closure reduction used by the Prohorov solver.

use std::collections::VecDeque;

use num_traits::Zero;

use crate::scalar::Rational;

struct Edge {
    to: usize,
    rev: usize,
    cap: Rational,
}

pub struct FlowNetwork {
    adj: Vec<Vec<Edge>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork {
            adj: (0..n).map(|_| Vec::new()).collect(),
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: Rational) {
        let rev_from = self.adj[to].len();
        let rev_to = self.adj[from].len();
        self.adj[from].push(Edge { to, rev: rev_from, cap });
        self.adj[to].push(Edge {
            to: from,
            rev: rev_to,
            cap: Rational::zero(),
        });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for e in &self.adj[u] {
                if e.cap > Rational::zero() && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[u] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, limit: Rational) -> Rational {
        if u == t {
            return limit;
        }
        while self.iter[u] < self.adj[u].len() {
            let i = self.iter[u];
            let (to, cap) = (self.adj[u][i].to, self.adj[u][i].cap);
            if cap > Rational::zero() && self.level[to] == self.level[u] + 1 {
                let pushed = self.dfs(to, t, limit.min(cap));
                if pushed > Rational::zero() {
                    self.adj[u][i].cap -= pushed;
                    let rev = self.adj[u][i].rev;
                    self.adj[to][rev].cap += pushed;
                    return pushed;
                }
            }
            self.iter[u] += 1;
        }
        Rational::zero()
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> Rational {
        let mut total = Rational::zero();
        let unbounded: Rational = self
            .adj
            .iter()
            .flatten()
            .map(|e| e.cap)
            .fold(Rational::zero(), |a, b| a + b)
            + Rational::from_integer(1);
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, unbounded);
                if f.is_zero() {
                    break;
                }
                total += f;
            }
        }
        total
    }
}

/// Maximum of `sum(profit[A]) - sum(cost[N(A)])` over subsets `A` of the
/// left side, where `N(A)` is the set of right vertices adjacent to `A`.
/// The empty selection is allowed, so the result is never negative.
pub fn max_weight_closure(profit: &[Rational], cost: &[Rational], adjacent: impl Fn(usize, usize) -> bool) -> Rational {
    let (nl, nr) = (profit.len(), cost.len());
    let (src, sink) = (nl + nr, nl + nr + 1);
    let total: Rational = profit.iter().fold(Rational::zero(), |a, b| a + b);
    // larger than any cut that avoids the middle edges
    let big = total + cost.iter().fold(Rational::zero(), |a, b| a + b) + Rational::from_integer(1);
    let mut net = FlowNetwork::new(nl + nr + 2);
    for (i, &p) in profit.iter().enumerate() {
        net.add_edge(src, i, p);
        for j in 0..nr {
            if adjacent(i, j) {
                net.add_edge(i, nl + j, big);
            }
        }
    }
    for (j, &c) in cost.iter().enumerate() {
        net.add_edge(nl + j, sink, c);
    }
    total - net.max_flow(src, sink)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn textbook_flow() {
        let mut net = FlowNetwork::new(4);
        net.add_edge(0, 1, rat(3, 1));
        net.add_edge(0, 2, rat(2, 1));
        net.add_edge(1, 2, rat(1, 2));
        net.add_edge(1, 3, rat(2, 1));
        net.add_edge(2, 3, rat(3, 1));
        assert_eq!(net.max_flow(0, 3), rat(9, 2));
    }

    #[test]
    fn closure_matches_enumeration() {
        let profit = [rat(1, 2), rat(1, 3), rat(1, 6)];
        let cost = [rat(1, 4), rat(1, 4), rat(1, 2)];
        let adj = |i: usize, j: usize| (i + j).is_multiple_of(2) || i == j;
        let mut best = rat(0, 1);
        for mask in 0u32..8 {
            let gain: Rational = (0..3).filter(|i| mask >> i & 1 == 1).map(|i| profit[i]).sum();
            let loss: Rational = (0..3)
                .filter(|&j| (0..3).any(|i| mask >> i & 1 == 1 && adj(i, j)))
                .map(|j| cost[j])
                .sum();
            best = best.max(gain - loss);
        }
        assert_eq!(max_weight_closure(&profit, &cost, adj), best);
    }
}

//! Branch and bound for a maximum-weight independent set of the candidate
//! conflict graph.

use std::time::Instant;

use fixedbitset::FixedBitSet;

use super::{Budget, Engine, SolveError, SolveResult, Stats};
use crate::abg::{
    enumerate_candidates, score, AmbiguousBreakpointGraph, Candidate, CandidateKind, Resolution,
};
use crate::bp_graph::SigmaIndex;

/// Conflict graph over candidate indices.
fn conflict_graph(cands: &[Candidate], vertex_count: usize, squares: usize) -> Vec<FixedBitSet> {
    let n = cands.len();
    let mut adj = vec![FixedBitSet::with_capacity(n); n];
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    let mut by_square: Vec<[Vec<usize>; 2]> = vec![[Vec::new(), Vec::new()]; squares];
    for (i, c) in cands.iter().enumerate() {
        for &v in c.sorted_vertices() {
            by_vertex[v as usize].push(i);
        }
        for &(sq, bit) in &c.required {
            by_square[sq as usize][usize::from(bit)].push(i);
        }
    }
    for group in &by_vertex {
        for &i in group {
            for &j in group {
                if i != j {
                    adj[i].insert(j);
                }
            }
        }
    }
    for [zero, one] in &by_square {
        for &i in zero {
            for &j in one {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    adj
}

/// Connected components, each sorted ascending.
fn components(adj: &[FixedBitSet]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut comp = Vec::new();
        while let Some(x) = stack.pop() {
            comp.push(x);
            for y in adj[x].ones() {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

struct Component {
    /// Local index to global candidate index, heaviest first.
    order: Vec<usize>,
    weight: Vec<i64>,
    adj: Vec<FixedBitSet>,
}

impl Component {
    fn new(members: &[usize], cands: &[Candidate], global: &[FixedBitSet]) -> Self {
        let w = |i: usize| match cands[i].kind {
            CandidateKind::Cycle => 2,
            CandidateKind::EvenPath => 1,
        };
        let mut order = members.to_vec();
        order.sort_by_key(|&i| (-w(i), std::cmp::Reverse(global[i].count_ones(..)), i));
        let mut local = vec![usize::MAX; global.len()];
        for (l, &g) in order.iter().enumerate() {
            local[g] = l;
        }
        let n = order.len();
        let adj = order
            .iter()
            .map(|&g| {
                let mut row = FixedBitSet::with_capacity(n);
                for h in global[g].ones() {
                    if local[h] != usize::MAX {
                        row.insert(local[h]);
                    }
                }
                row
            })
            .collect();
        Component {
            weight: order.iter().map(|&g| w(g)).collect(),
            order,
            adj,
        }
    }
}

struct Search<'a> {
    comp: &'a Component,
    best: i64,
    best_set: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    aborted: bool,
}

impl Search<'_> {
    /// Greedy clique cover: each clique contributes its heaviest member,
    /// which is its first since vertices are sorted by weight.
    fn bound(&self, p: &FixedBitSet) -> i64 {
        let mut remaining = p.clone();
        let mut total = 0;
        while let Some(v) = remaining.ones().next() {
            total += self.comp.weight[v];
            remaining.set(v, false);
            let mut cand = remaining.clone();
            cand.intersect_with(&self.comp.adj[v]);
            while let Some(u) = cand.ones().next() {
                remaining.set(u, false);
                cand.set(u, false);
                cand.intersect_with(&self.comp.adj[u]);
            }
        }
        total
    }

    fn expand(&mut self, mut p: FixedBitSet, weight: i64) {
        loop {
            if self.aborted {
                return;
            }
            self.nodes += 1;
            if self.nodes > self.max_nodes
                || (self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() > d))
            {
                self.aborted = true;
                return;
            }
            let Some(v) = p.ones().next() else {
                if weight > self.best {
                    self.best = weight;
                    self.best_set = self.current.clone();
                }
                return;
            };
            if weight + self.bound(&p) <= self.best {
                return;
            }
            let mut include = p.clone();
            include.difference_with(&self.comp.adj[v]);
            include.set(v, false);
            self.current.push(v);
            self.expand(include, weight + self.comp.weight[v]);
            self.current.pop();
            p.set(v, false);
        }
    }
}

fn greedy(comp: &Component) -> (i64, Vec<usize>) {
    let n = comp.order.len();
    let mut blocked = FixedBitSet::with_capacity(n);
    let mut chosen = Vec::new();
    let mut total = 0;
    for v in 0..n {
        if !blocked.contains(v) {
            chosen.push(v);
            total += comp.weight[v];
            blocked.union_with(&comp.adj[v]);
        }
    }
    (total, chosen)
}

/// `ss_k` as isolated vertices plus a maximum-weight set of pairwise
/// compatible candidates. The witness fixes the squares its candidates
/// force and leaves every other square solid; the reported score is the
/// witness's actual k-score. `optimal` is false when the budget ran out.
pub fn ss_mis(
    abg: &AmbiguousBreakpointGraph,
    k: u32,
    budget: &Budget,
) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    let set = enumerate_candidates(abg, k)?;
    let cands = &set.candidates;
    let adj = conflict_graph(cands, abg.vertex_count(), abg.a_star());
    let deadline = budget.max_time.map(|t| start + t);
    let mut chosen: Vec<usize> = Vec::new();
    let mut nodes = 0;
    let mut optimal = true;
    for members in components(&adj) {
        let comp = Component::new(&members, cands, &adj);
        let (gw, gset) = greedy(&comp);
        let mut search = Search {
            comp: &comp,
            best: gw,
            best_set: gset,
            current: Vec::new(),
            nodes: 0,
            max_nodes: budget.max_nodes.saturating_sub(nodes),
            deadline,
            aborted: false,
        };
        let n = comp.order.len();
        let mut all = FixedBitSet::with_capacity(n);
        all.insert_range(..);
        search.expand(all, 0);
        nodes += search.nodes;
        optimal &= !search.aborted;
        chosen.extend(search.best_set.iter().map(|&l| comp.order[l]));
    }
    let mut tau = Resolution::solid(abg.a_star());
    for &i in &chosen {
        for &(sq, bit) in &cands[i].required {
            tau.0[sq as usize] = bit;
        }
    }
    let value = score(abg, &tau, SigmaIndex::Finite(k))?;
    let stats = Stats {
        nodes,
        candidates: cands.len(),
        elapsed: start.elapsed(),
    };
    Ok(SolveResult::new(
        abg,
        value,
        tau,
        optimal,
        Engine::Mis,
        stats,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abg::build_abg;
    use crate::genome::{random_cognate_pair, singularize};
    use crate::half::HalfInt;
    use crate::solver::ss_naive;

    #[test]
    fn agrees_with_naive_on_random_pairs() {
        for seed in 0..80u64 {
            let n = 2 + (seed % 7) as usize;
            let (s, d) = random_cognate_pair(n, true, 1 + (seed % 5) as usize, seed).unwrap();
            let abg = build_abg(&s, &singularize(&d).unwrap()).unwrap();
            for k in [2, 4, 6, 8, 10] {
                let naive = ss_naive(&abg, SigmaIndex::Finite(k), &Budget::default()).unwrap();
                let mis = ss_mis(&abg, k, &Budget::default()).unwrap();
                assert!(mis.optimal);
                assert_eq!(mis.score, naive.score, "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn candidate_free_graph() {
        let abg = crate::abg::AmbiguousBreakpointGraph::new(0, vec![], vec![], 10).unwrap();
        let r = ss_mis(&abg, 8, &Budget::default()).unwrap();
        assert_eq!(r.score, HalfInt::from_int(5));
        assert_eq!(r.stats.candidates, 0);
    }

    #[test]
    fn exhausted_budget_is_flagged() {
        let (s, d) = random_cognate_pair(9, true, 6, 77).unwrap();
        let abg = build_abg(&s, &singularize(&d).unwrap()).unwrap();
        let r = ss_mis(
            &abg,
            10,
            &Budget {
                max_nodes: 1,
                ..Budget::default()
            },
        )
        .unwrap();
        assert!(!r.optimal);
        assert_eq!(
            score(&abg, &r.tau, SigmaIndex::Finite(10)).unwrap(),
            r.score
        );
        let full = ss_mis(&abg, 10, &Budget::default()).unwrap();
        assert!(full.optimal && full.score >= r.score);
    }
}

//! Short alternating components that some resolution can realize.
//!
//! A walk from vertex `x` alternates fixed edges with square edges. Every
//! vertex of an alternating cycle or even path is entered or left through its
//! square, so the component exists in `BG(τ, Ď)` exactly when `τ` agrees with
//! the square bits recorded along the walk.
//!
//! The search visits at most `2^(k/2)` walks per start vertex.

use std::fmt;

use super::{AbgError, AmbiguousBreakpointGraph};
use crate::bp_graph::SigmaIndex;
use crate::half::HalfInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CandidateKind {
    Cycle,
    EvenPath,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub kind: CandidateKind,
    /// Number of edges.
    pub length: usize,
    /// Walk order. Cycles start at their smallest vertex and leave it through
    /// its fixed edge; paths start at their S-telomere.
    pub vertices: Vec<u32>,
    /// `(square, bit)` for every square the walk crosses, sorted by square.
    pub required: Vec<(u32, bool)>,
    sorted_vertices: Vec<u32>,
}

impl Candidate {
    fn new(kind: CandidateKind, vertices: Vec<u32>, mut required: Vec<(u32, bool)>) -> Self {
        required.sort_unstable();
        required.dedup();
        let length = match kind {
            CandidateKind::Cycle => vertices.len(),
            CandidateKind::EvenPath => vertices.len() - 1,
        };
        let mut sorted_vertices = vertices.clone();
        sorted_vertices.sort_unstable();
        Candidate {
            kind,
            length,
            vertices,
            required,
            sorted_vertices,
        }
    }

    /// 1 for a cycle, ½ for an even path.
    pub fn weight(&self) -> HalfInt {
        match self.kind {
            CandidateKind::Cycle => HalfInt::from_int(1),
            CandidateKind::EvenPath => HalfInt::from_halves(1),
        }
    }

    pub fn sorted_vertices(&self) -> &[u32] {
        &self.sorted_vertices
    }

    pub fn forces(&self, square: u32) -> Option<bool> {
        self.required
            .binary_search_by_key(&square, |&(s, _)| s)
            .ok()
            .map(|i| self.required[i].1)
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            CandidateKind::Cycle => "cycle",
            CandidateKind::EvenPath => "path",
        };
        let verts: Vec<String> = self.vertices.iter().map(u32::to_string).collect();
        let req: Vec<String> = self
            .required
            .iter()
            .map(|&(s, b)| format!("{s}:{}", u8::from(b)))
            .collect();
        write!(
            f,
            "{kind} len={} [{}] forces {{{}}}",
            self.length,
            verts.join(" "),
            req.join(", ")
        )
    }
}

#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub k: u32,
    pub candidates: Vec<Candidate>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn cycles_of_length(&self, length: usize) -> impl Iterator<Item = &Candidate> {
        self.candidates
            .iter()
            .filter(move |c| c.kind == CandidateKind::Cycle && c.length == length)
    }

    pub fn shortest_cycle(&self) -> Option<usize> {
        self.candidates
            .iter()
            .filter(|c| c.kind == CandidateKind::Cycle)
            .map(|c| c.length)
            .min()
    }
}

/// Two candidates cannot coexist if they share a vertex or need different
/// matchings on the same square.
pub fn conflict(c1: &Candidate, c2: &Candidate) -> bool {
    let (a, b) = (&c1.sorted_vertices, &c2.sorted_vertices);
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    let (a, b) = (&c1.required, &c2.required);
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if a[i].1 != b[j].1 {
                    return true;
                }
                i += 1;
                j += 1;
            }
        }
    }
    false
}

struct Search<'a> {
    abg: &'a AmbiguousBreakpointGraph,
    k: usize,
    visited: Vec<bool>,
    assigned: Vec<Option<bool>>,
    walk: Vec<u32>,
    choices: Vec<(u32, bool)>,
    out: Vec<Candidate>,
}

impl Search<'_> {
    /// Continue from `x`, entered through its fixed edge, using the square
    /// edge at `x` next. `start` is the cycle root, or `None` for paths.
    fn extend(&mut self, x: u32, start: Option<u32>) {
        let Some(sq) = self.abg.square_of(x) else {
            return;
        };
        let square = self.abg.squares[sq];
        let length = self.walk.len(); // edges after the square edge
        for bit in [false, true] {
            if self.assigned[sq].is_some_and(|b| b != bit) {
                continue;
            }
            let y = square.partner(x, bit);
            if Some(y) == start {
                if length <= self.k {
                    self.choices.push((sq as u32, bit));
                    self.out.push(Candidate::new(
                        CandidateKind::Cycle,
                        self.walk.clone(),
                        self.choices.clone(),
                    ));
                    self.choices.pop();
                }
                continue;
            }
            if self.visited[y as usize] || start.is_some_and(|s| y < s) {
                continue;
            }
            let previous = self.assigned[sq];
            self.assigned[sq] = Some(bit);
            self.choices.push((sq as u32, bit));
            self.visited[y as usize] = true;
            self.walk.push(y);
            match self.abg.d_partner(y) {
                None => {
                    if start.is_none() && length + 2 <= self.k {
                        self.out.push(Candidate::new(
                            CandidateKind::EvenPath,
                            self.walk.clone(),
                            self.choices.clone(),
                        ));
                    }
                }
                Some(z) => {
                    // a cycle needs at least one more square edge, an even
                    // path one more square edge and room for the final `+2`
                    let limit = if start.is_some() {
                        self.k
                    } else {
                        self.k.saturating_sub(2)
                    };
                    let fresh = !self.visited[z as usize] && start.is_none_or(|s| z > s);
                    if fresh && length + 2 <= limit {
                        self.visited[z as usize] = true;
                        self.walk.push(z);
                        self.extend(z, start);
                        self.walk.pop();
                        self.visited[z as usize] = false;
                    }
                }
            }
            self.walk.pop();
            self.visited[y as usize] = false;
            self.choices.pop();
            self.assigned[sq] = previous;
        }
    }
}

/// All alternating cycles of length at most `k` and even paths of length at
/// most `k − 2`, each listed once.
pub fn enumerate_candidates(
    abg: &AmbiguousBreakpointGraph,
    k: u32,
) -> Result<CandidateSet, AbgError> {
    SigmaIndex::finite(k)?;
    let mut search = Search {
        abg,
        k: k as usize,
        visited: vec![false; abg.vertex_count()],
        assigned: vec![None; abg.a_star()],
        walk: Vec::new(),
        choices: Vec::new(),
        out: Vec::new(),
    };
    for s in 0..abg.vertex_count() as u32 {
        let Some(x) = abg.d_partner(s) else {
            continue;
        };
        let is_s_telomere = abg.square_of(s).is_none();
        if !is_s_telomere && x < s {
            continue;
        }
        let start = (!is_s_telomere).then_some(s);
        search.visited[s as usize] = true;
        search.visited[x as usize] = true;
        search.walk.extend([s, x]);
        search.extend(x, start);
        search.walk.clear();
        search.visited[s as usize] = false;
        search.visited[x as usize] = false;
    }
    Ok(CandidateSet {
        k,
        candidates: search.out,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::small_abg;
    use super::super::{resolve, Resolution, Square};
    use super::*;
    use crate::abg::build_abg;
    use crate::genome::{parse_genome, random_cognate_pair, singularize};

    /// A closed p-flower: squares `i` on `(4i, 4i+1, 4i+2, 4i+3)` with fixed
    /// edges `b_i–a_{i+1}` and `b̂_i–â_{i+1}` cyclically.
    fn closed_flower(p: u32) -> AmbiguousBreakpointGraph {
        let squares = (0..p)
            .map(|i| Square::new(4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3))
            .collect();
        let edges = (0..p)
            .flat_map(|i| {
                let j = (i + 1) % p;
                [(4 * i + 2, 4 * j), (4 * i + 3, 4 * j + 1)]
            })
            .collect();
        AmbiguousBreakpointGraph::new(4 * p as usize, squares, edges, 0).unwrap()
    }

    #[test]
    fn small_graph_candidates() {
        let abg = small_abg();
        let set = enumerate_candidates(&abg, 8).unwrap();
        let labels = abg.labels().unwrap();
        let names = |c: &Candidate| -> Vec<String> {
            c.vertices
                .iter()
                .map(|&v| labels[v as usize].to_string())
                .collect()
        };
        let two_cycles: Vec<_> = set.cycles_of_length(2).collect();
        let found: Vec<Vec<String>> = two_cycles.iter().map(|c| names(c)).collect();
        assert!(found.contains(&vec!["1h_a".to_string(), "2t_a".to_string()]));
        assert_eq!(two_cycles[0].required, vec![(0, false)]);
        // the 4-path and 2-path of resolution 01 are both candidates
        let paths: Vec<_> = set
            .candidates
            .iter()
            .filter(|c| c.kind == CandidateKind::EvenPath)
            .map(|c| c.length)
            .collect();
        assert!(paths.contains(&2) && paths.contains(&4));
    }

    #[test]
    fn flower_has_no_short_cycles() {
        let flower = closed_flower(5);
        assert!(enumerate_candidates(&flower, 8).unwrap().is_empty());
        let set = enumerate_candidates(&flower, 10).unwrap();
        // any even number of switches closes two parallel 10-cycles
        assert_eq!(set.len(), 2 * 16);
        let solid: Vec<_> = set
            .candidates
            .iter()
            .filter(|c| c.required.iter().all(|&(_, b)| !b))
            .collect();
        assert_eq!(solid.len(), 2);
        assert!(!conflict(solid[0], solid[1]));
        assert!(conflict(solid[0], solid[0]));
        assert_eq!(
            enumerate_candidates(&flower, 20).unwrap().shortest_cycle(),
            Some(10)
        );
    }

    #[test]
    fn single_square_with_parallel_edges() {
        let abg = build_abg(
            &parse_genome("(1)").unwrap(),
            &parse_genome("(1.a 1.b)").unwrap(),
        )
        .unwrap();
        let set = enumerate_candidates(&abg, 4).unwrap();
        let mut lens: Vec<(usize, Vec<(u32, bool)>)> = set
            .candidates
            .iter()
            .map(|c| (c.length, c.required.clone()))
            .collect();
        lens.sort();
        // β = 1t, so the solid side pairs 1t_a with 1h_a and closes one
        // 4-cycle through both fixed edges; the other side gives two 2-cycles
        assert_eq!(
            lens,
            vec![
                (2, vec![(0, true)]),
                (2, vec![(0, true)]),
                (4, vec![(0, false)])
            ]
        );
        for a in &set.candidates {
            for b in &set.candidates {
                assert!(conflict(a, b) || (a.length == 2 && b.length == 2));
            }
        }
    }

    #[test]
    fn opposite_bits_conflict() {
        let a = Candidate::new(CandidateKind::Cycle, vec![0, 1], vec![(3, false)]);
        let b = Candidate::new(CandidateKind::Cycle, vec![5, 6], vec![(3, true)]);
        let c = Candidate::new(
            CandidateKind::Cycle,
            vec![7, 8],
            vec![(3, false), (4, true)],
        );
        assert!(conflict(&a, &b));
        assert!(!conflict(&a, &c));
        assert!(conflict(&b, &c));
        assert!(enumerate_candidates(&small_abg(), 7).is_err());
    }

    /// Every short component of every resolution is a candidate whose forced
    /// bits agree with the resolution, and nothing else is listed.
    #[test]
    fn completeness_and_soundness_on_random_pairs() {
        for seed in 0..60u64 {
            let (s, d) = random_cognate_pair(4, true, 3, seed).unwrap();
            let abg = build_abg(&s, &singularize(&d).unwrap()).unwrap();
            for k in [2u32, 4, 6, 8] {
                let set = enumerate_candidates(&abg, k).unwrap();
                for p in 0..1u64 << abg.a_star() {
                    let tau = Resolution::from_pattern(p, abg.a_star());
                    let census = resolve(&abg, &tau).unwrap();
                    let realized: Vec<&Candidate> = set
                        .candidates
                        .iter()
                        .filter(|c| c.required.iter().all(|&(sq, b)| tau.0[sq as usize] == b))
                        .collect();
                    let cycles = realized
                        .iter()
                        .filter(|c| c.kind == CandidateKind::Cycle)
                        .count();
                    let paths = realized.len() - cycles;
                    let expect_cycles: usize =
                        census.cycles.range(..=k as usize).map(|(_, c)| c).sum();
                    let expect_paths: usize = census
                        .paths
                        .iter()
                        .filter(|(&l, _)| l > 0 && l % 2 == 0 && l + 2 <= k as usize)
                        .map(|(_, c)| c)
                        .sum();
                    assert_eq!(
                        (cycles, paths),
                        (expect_cycles, expect_paths),
                        "seed {seed} k {k} tau {tau}"
                    );
                }
            }
        }
    }
}

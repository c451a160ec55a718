//! Ambiguous breakpoint graphs: squares for the adjacencies of a singular
//! genome, fixed edges for a singularized duplicated genome, and resolutions
//! that pick one matching per square.

mod candidates;
mod dot;

use std::collections::BTreeMap;
use std::fmt;

use crate::bp_graph::{walk_components, BpError, ComponentCensus, ComponentKind, SigmaIndex};
use crate::genome::{classify_pair, Adjacency, CopyIndex, Extremity, Genome, PairClass, Side};
use crate::half::HalfInt;

pub use candidates::{conflict, enumerate_candidates, Candidate, CandidateKind, CandidateSet};
pub use dot::to_dot;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AbgError {
    #[error("genomes do not form a [1·2]-cognate pair with a singular first genome")]
    NotCognate,
    #[error("inconsistent copy indices: {0}")]
    InconsistentIndices(String),
    #[error("malformed graph: {0}")]
    InvalidStructure(String),
    #[error("resolution has {got} choices but the graph has {expected} squares")]
    ResolutionLength { expected: usize, got: usize },
    #[error(transparent)]
    Sigma(#[from] BpError),
}

/// Two paralogous vertex pairs `(u, û)` and `(v, v̂)`. The solid matching is
/// `{u–v, û–v̂}`, the complementary one `{u–v̂, û–v}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Square {
    pub u: u32,
    pub u_hat: u32,
    pub v: u32,
    pub v_hat: u32,
    /// The adjacency of the singular genome this square encodes, if any.
    pub source: Option<Adjacency>,
}

impl Square {
    pub fn new(u: u32, u_hat: u32, v: u32, v_hat: u32) -> Self {
        Square {
            u,
            u_hat,
            v,
            v_hat,
            source: None,
        }
    }

    pub fn vertices(&self) -> [u32; 4] {
        [self.u, self.u_hat, self.v, self.v_hat]
    }

    /// The two edges chosen by `bit` (`false` = solid).
    pub fn matching(&self, bit: bool) -> [(u32, u32); 2] {
        if bit {
            [(self.u, self.v_hat), (self.u_hat, self.v)]
        } else {
            [(self.u, self.v), (self.u_hat, self.v_hat)]
        }
    }

    /// Neighbour of `x` under the matching chosen by `bit`.
    pub fn partner(&self, x: u32, bit: bool) -> u32 {
        let [(a, b), (c, d)] = self.matching(bit);
        match x {
            _ if x == a => b,
            _ if x == b => a,
            _ if x == c => d,
            _ if x == d => c,
            _ => panic!("vertex {x} is not in this square"),
        }
    }
}

/// One bit per square: `false` selects the solid matching, `true` the
/// complementary one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Resolution(pub Vec<bool>);

impl Resolution {
    pub fn solid(len: usize) -> Self {
        Resolution(vec![false; len])
    }

    /// Bit `i` of `pattern` is square `i`.
    pub fn from_pattern(pattern: u64, len: usize) -> Self {
        Resolution((0..len).map(|i| pattern >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Number of complementary choices.
    pub fn switched(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct AmbiguousBreakpointGraph {
    vertex_count: usize,
    squares: Vec<Square>,
    d_edges: Vec<(u32, u32)>,
    isolated: usize,
    labels: Option<Vec<Extremity>>,
    isolated_labels: Vec<Extremity>,
    square_of: Vec<u32>,
    d_partner: Vec<u32>,
}

const NO_SQUARE: u32 = u32::MAX;

impl AmbiguousBreakpointGraph {
    /// Assemble a graph on vertices `0..vertex_count` plus `isolated` vertices
    /// that touch no edge.
    pub fn new(
        vertex_count: usize,
        squares: Vec<Square>,
        d_edges: Vec<(u32, u32)>,
        isolated: usize,
    ) -> Result<Self, AbgError> {
        let bad = |m: String| Err(AbgError::InvalidStructure(m));
        let mut square_of = vec![NO_SQUARE; vertex_count];
        for (i, sq) in squares.iter().enumerate() {
            for x in sq.vertices() {
                match square_of.get(x as usize) {
                    None => return bad(format!("square {i} uses unknown vertex {x}")),
                    Some(&NO_SQUARE) => square_of[x as usize] = i as u32,
                    Some(_) => return bad(format!("vertex {x} lies in two squares")),
                }
            }
        }
        let mut d_partner: Vec<u32> = (0..vertex_count as u32).collect();
        for &(x, y) in &d_edges {
            if x == y || x as usize >= vertex_count || y as usize >= vertex_count {
                return bad(format!("invalid edge {x}–{y}"));
            }
            if d_partner[x as usize] != x || d_partner[y as usize] != y {
                return bad(format!("vertex of edge {x}–{y} has two edges"));
            }
            d_partner[x as usize] = y;
            d_partner[y as usize] = x;
        }
        for x in 0..vertex_count {
            if square_of[x] == NO_SQUARE && d_partner[x] as usize == x {
                return bad(format!("vertex {x} has no edge; count it as isolated"));
            }
        }
        Ok(AmbiguousBreakpointGraph {
            vertex_count,
            squares,
            d_edges,
            isolated,
            labels: None,
            isolated_labels: Vec::new(),
            square_of,
            d_partner,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// All vertices, isolated ones included.
    pub fn total_vertex_count(&self) -> usize {
        self.vertex_count + self.isolated
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    /// Number of squares, `a*`.
    pub fn a_star(&self) -> usize {
        self.squares.len()
    }

    /// Twice the gene count of the underlying pair.
    pub fn n_star_doubled(&self) -> usize {
        self.total_vertex_count() / 2
    }

    pub fn d_edges(&self) -> &[(u32, u32)] {
        &self.d_edges
    }

    pub fn isolated_count(&self) -> usize {
        self.isolated
    }

    pub fn labels(&self) -> Option<&[Extremity]> {
        self.labels.as_deref()
    }

    pub fn isolated_labels(&self) -> &[Extremity] {
        &self.isolated_labels
    }

    pub fn square_of(&self, x: u32) -> Option<usize> {
        let s = self.square_of[x as usize];
        (s != NO_SQUARE).then_some(s as usize)
    }

    pub fn d_partner(&self, x: u32) -> Option<u32> {
        let y = self.d_partner[x as usize];
        (y != x).then_some(y)
    }

    /// Non-isolated vertices outside every square.
    pub fn s_telomeres(&self) -> Vec<u32> {
        (0..self.vertex_count as u32)
            .filter(|&x| self.square_of(x).is_none())
            .collect()
    }

    /// Vertices in a square but without a fixed edge.
    pub fn d_telomeres(&self) -> Vec<u32> {
        (0..self.vertex_count as u32)
            .filter(|&x| self.square_of(x).is_some() && self.d_partner(x).is_none())
            .collect()
    }

    pub fn degree(&self, x: u32) -> usize {
        2 * usize::from(self.square_of(x).is_some()) + usize::from(self.d_partner(x).is_some())
    }

    fn check_len(&self, tau: &Resolution) -> Result<(), AbgError> {
        if tau.len() != self.squares.len() {
            return Err(AbgError::ResolutionLength {
                expected: self.squares.len(),
                got: tau.len(),
            });
        }
        Ok(())
    }

    fn fill_s_partner(&self, bits: impl Fn(usize) -> bool, out: &mut [u32]) {
        for (x, p) in out.iter_mut().enumerate() {
            *p = x as u32;
        }
        for (i, sq) in self.squares.iter().enumerate() {
            for (a, b) in sq.matching(bits(i)) {
                out[a as usize] = b;
                out[b as usize] = a;
            }
        }
    }
}

/// Build `ABG(S, Ď)`. Each adjacency `βγ` of `s` (β the smaller extremity)
/// becomes a square with `u = β_a`, `û = β_b`, `v = γ_a`, `v̂ = γ_b`; squares
/// follow the sorted adjacency order of `s`. Extremities telomeric in both
/// genomes are isolated.
pub fn build_abg(s: &Genome, d_check: &Genome) -> Result<AmbiguousBreakpointGraph, AbgError> {
    let erased = d_check.erase_indices();
    if classify_pair(s, &erased)
        != (PairClass::OneTwoCognate {
            singular: Side::First,
        })
    {
        return Err(AbgError::NotCognate);
    }
    let keys = d_check.gene_keys();
    if keys
        .iter()
        .any(|(k, &c)| k.copy == CopyIndex::None || c != 1)
    {
        return Err(AbgError::InconsistentIndices(
            "every gene must occur once as copy a and once as copy b".into(),
        ));
    }
    let mut d_partner: BTreeMap<Extremity, Extremity> = BTreeMap::new();
    for a in d_check.adjacencies() {
        let (x, y) = a.ends();
        d_partner.insert(x, y);
        d_partner.insert(y, x);
    }
    let s_telomeres = s.telomeres();
    let mut all: Vec<Extremity> = keys.keys().flat_map(|k| [k.tail(), k.head()]).collect();
    all.sort();
    let s_telomere_set: Vec<Extremity> = s_telomeres
        .iter()
        .flat_map(|t| [t.with_copy(CopyIndex::A), t.with_copy(CopyIndex::B)])
        .collect();
    let is_isolated = |x: &Extremity| s_telomere_set.contains(x) && !d_partner.contains_key(x);
    let (isolated_labels, labels): (Vec<Extremity>, Vec<Extremity>) =
        all.into_iter().partition(is_isolated);
    let index: BTreeMap<Extremity, u32> = labels
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i as u32))
        .collect();
    let squares = s
        .adjacencies()
        .into_iter()
        .map(|adj| {
            let (beta, gamma) = adj.ends();
            let id = |x: Extremity, c: CopyIndex| index[&x.with_copy(c)];
            Square {
                u: id(beta, CopyIndex::A),
                u_hat: id(beta, CopyIndex::B),
                v: id(gamma, CopyIndex::A),
                v_hat: id(gamma, CopyIndex::B),
                source: Some(adj),
            }
        })
        .collect();
    let d_edges = d_check
        .adjacencies()
        .into_iter()
        .map(|a| {
            let (x, y) = a.ends();
            (index[&x], index[&y])
        })
        .collect();
    let mut abg =
        AmbiguousBreakpointGraph::new(labels.len(), squares, d_edges, isolated_labels.len())?;
    abg.labels = Some(labels);
    abg.isolated_labels = isolated_labels;
    Ok(abg)
}

/// Census of the breakpoint graph induced by `tau`, isolated vertices
/// counted as 0-paths.
pub fn resolve(
    abg: &AmbiguousBreakpointGraph,
    tau: &Resolution,
) -> Result<ComponentCensus, AbgError> {
    abg.check_len(tau)?;
    let mut s_partner = vec![0; abg.vertex_count];
    abg.fill_s_partner(|i| tau.0[i], &mut s_partner);
    let mut seen = vec![false; abg.vertex_count];
    let mut census = ComponentCensus::default();
    walk_components(
        &s_partner,
        &abg.d_partner,
        &mut seen,
        |kind, len| match kind {
            ComponentKind::Cycle => census.add_cycle(len),
            ComponentKind::Path => census.add_path(len),
        },
    );
    census.add_paths(0, abg.isolated);
    Ok(census)
}

/// The k-score `s_k(τ)`: σ_k of the induced breakpoint graph.
pub fn score(
    abg: &AmbiguousBreakpointGraph,
    tau: &Resolution,
    k: SigmaIndex,
) -> Result<HalfInt, AbgError> {
    let k = k.validate()?;
    Ok(resolve(abg, tau)?.sigma_checked(k))
}

/// Allocation-free repeated scoring for exhaustive search.
pub(crate) struct Scorer<'a> {
    abg: &'a AmbiguousBreakpointGraph,
    bound: Option<usize>,
    s_partner: Vec<u32>,
    seen: Vec<bool>,
}

impl<'a> Scorer<'a> {
    pub(crate) fn new(abg: &'a AmbiguousBreakpointGraph, k: SigmaIndex) -> Self {
        Scorer {
            abg,
            bound: k.bound().map(|b| b as usize),
            s_partner: vec![0; abg.vertex_count],
            seen: vec![false; abg.vertex_count],
        }
    }

    /// Score in halves of the resolution whose bit `i` is `pattern >> i & 1`.
    pub(crate) fn halves(&mut self, pattern: u64) -> i64 {
        self.abg
            .fill_s_partner(|i| pattern >> i & 1 == 1, &mut self.s_partner);
        self.seen.iter_mut().for_each(|s| *s = false);
        let bound = self.bound;
        let mut halves = self.abg.isolated as i64;
        walk_components(
            &self.s_partner,
            &self.abg.d_partner,
            &mut self.seen,
            |kind, len| match kind {
                ComponentKind::Cycle if bound.is_none_or(|k| len <= k) => halves += 2,
                ComponentKind::Path if len % 2 == 0 && bound.is_none_or(|k| len + 2 <= k) => {
                    halves += 1
                }
                _ => {}
            },
        );
        halves
    }
}

//! Genomes as multisets of linear and circular chromosomes of oriented genes.
//!
//! A gene occurrence may carry a copy index (`a`/`b`) once a duplicated genome
//! has been singularized. Genes are keyed by `(id, copy)`, so a singularized
//! genome is singular over its keys even though every id occurs twice.

mod dcj;
mod doubling;
mod parse;
mod random;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

pub use dcj::{AdjacencyMap, Cut};
pub use doubling::{double, enumerate_resolved_doublings, singularize, Doubling};
pub use parse::{format_genome, parse_genome};
pub use random::{random_cognate_pair, random_genome};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenomeError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("empty chromosome at line {line}")]
    EmptyChromosome { line: usize },
    #[error("a genome must contain at least one chromosome")]
    EmptyGenome,
    #[error("gene {0} is used more often than its copy index allows")]
    GeneOveruse(GeneKey),
    #[error("gene {0} mixes occurrences with and without copy index")]
    MixedCopyIndices(u32),
    #[error("genome is not singular")]
    NotSingular,
    #[error("genome is not duplicated")]
    NotDuplicated,
    #[error("invalid adjacency set: {0}")]
    InvalidAdjacencies(String),
    #[error("cut not found in genome: {0}")]
    CutNotFound(String),
    #[error("invalid rejoin: {0}")]
    InvalidRejoin(String),
    #[error("size budget exceeded: {0}")]
    SizeBudget(String),
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Forward,
    Reverse,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Reverse,
            Orientation::Reverse => Orientation::Forward,
        }
    }
}

/// Singularization index of a gene occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CopyIndex {
    None,
    A,
    B,
}

impl CopyIndex {
    fn suffix(self) -> &'static str {
        match self {
            CopyIndex::None => "",
            CopyIndex::A => ".a",
            CopyIndex::B => ".b",
        }
    }
}

/// Identity of a gene inside a genome: its id plus copy index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneKey {
    pub id: u32,
    pub copy: CopyIndex,
}

impl GeneKey {
    pub fn new(id: u32, copy: CopyIndex) -> Self {
        GeneKey { id, copy }
    }

    pub fn plain(id: u32) -> Self {
        GeneKey {
            id,
            copy: CopyIndex::None,
        }
    }

    pub fn tail(self) -> Extremity {
        Extremity::new(self.id, End::Tail, self.copy)
    }

    pub fn head(self) -> Extremity {
        Extremity::new(self.id, End::Head, self.copy)
    }
}

impl fmt::Display for GeneKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.id, self.copy.suffix())
    }
}

/// One occurrence of a gene in a chromosome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneOccurrence {
    pub id: u32,
    pub orientation: Orientation,
    pub copy: CopyIndex,
}

impl GeneOccurrence {
    pub fn new(id: u32, orientation: Orientation, copy: CopyIndex) -> Self {
        GeneOccurrence {
            id,
            orientation,
            copy,
        }
    }

    pub fn forward(id: u32) -> Self {
        Self::new(id, Orientation::Forward, CopyIndex::None)
    }

    pub fn reverse(id: u32) -> Self {
        Self::new(id, Orientation::Reverse, CopyIndex::None)
    }

    pub fn key(&self) -> GeneKey {
        GeneKey::new(self.id, self.copy)
    }

    pub fn flipped(&self) -> Self {
        Self::new(self.id, self.orientation.flipped(), self.copy)
    }

    pub fn with_copy(&self, copy: CopyIndex) -> Self {
        Self::new(self.id, self.orientation, copy)
    }

    /// Extremity met first when reading left to right.
    pub fn left_end(&self) -> Extremity {
        match self.orientation {
            Orientation::Forward => self.key().tail(),
            Orientation::Reverse => self.key().head(),
        }
    }

    /// Extremity met last when reading left to right.
    pub fn right_end(&self) -> Extremity {
        match self.orientation {
            Orientation::Forward => self.key().head(),
            Orientation::Reverse => self.key().tail(),
        }
    }
}

impl fmt::Display for GeneOccurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.orientation {
            Orientation::Forward => "",
            Orientation::Reverse => "-",
        };
        write!(f, "{sign}{}{}", self.id, self.copy.suffix())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Tail,
    Head,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Extremity {
    pub gene: u32,
    pub copy: CopyIndex,
    pub end: End,
}

impl Extremity {
    pub fn new(gene: u32, end: End, copy: CopyIndex) -> Self {
        Extremity { gene, copy, end }
    }

    pub fn key(&self) -> GeneKey {
        GeneKey::new(self.gene, self.copy)
    }

    /// The other extremity of the same gene occurrence.
    pub fn opposite(&self) -> Extremity {
        let end = match self.end {
            End::Tail => End::Head,
            End::Head => End::Tail,
        };
        Extremity::new(self.gene, end, self.copy)
    }

    pub fn with_copy(&self, copy: CopyIndex) -> Self {
        Extremity::new(self.gene, self.end, copy)
    }
}

impl fmt::Display for Extremity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = match self.end {
            End::Tail => "t",
            End::Head => "h",
        };
        let copy = match self.copy {
            CopyIndex::None => "",
            CopyIndex::A => "_a",
            CopyIndex::B => "_b",
        };
        write!(f, "{}{end}{copy}", self.gene)
    }
}

/// An unordered pair of extremities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Adjacency {
    lo: Extremity,
    hi: Extremity,
}

impl Adjacency {
    pub fn new(x: Extremity, y: Extremity) -> Self {
        if x <= y {
            Adjacency { lo: x, hi: y }
        } else {
            Adjacency { lo: y, hi: x }
        }
    }

    pub fn ends(&self) -> (Extremity, Extremity) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, x: Extremity) -> bool {
        self.lo == x || self.hi == x
    }
}

impl fmt::Display for Adjacency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    Linear,
    Circular,
}

/// A chromosome as written. Equality and ordering use the canonical form.
#[derive(Debug, Clone)]
pub struct Chromosome {
    shape: Shape,
    genes: Vec<GeneOccurrence>,
}

fn reverse_complement(genes: &[GeneOccurrence]) -> Vec<GeneOccurrence> {
    genes.iter().rev().map(GeneOccurrence::flipped).collect()
}

impl Chromosome {
    /// Returns `None` for an empty gene list.
    pub fn new(shape: Shape, genes: Vec<GeneOccurrence>) -> Option<Self> {
        (!genes.is_empty()).then_some(Chromosome { shape, genes })
    }

    pub fn linear(genes: Vec<GeneOccurrence>) -> Option<Self> {
        Self::new(Shape::Linear, genes)
    }

    pub fn circular(genes: Vec<GeneOccurrence>) -> Option<Self> {
        Self::new(Shape::Circular, genes)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Genes in the order they were written or traced.
    pub fn genes(&self) -> &[GeneOccurrence] {
        &self.genes
    }

    /// Lexicographically least representation among the reverse complement
    /// and, for circular chromosomes, all rotations of both.
    pub fn canonical_genes(&self) -> Vec<GeneOccurrence> {
        let rc = reverse_complement(&self.genes);
        match self.shape {
            Shape::Linear => std::cmp::min(self.genes.clone(), rc),
            Shape::Circular => {
                let n = self.genes.len();
                let mut best: Option<Vec<GeneOccurrence>> = None;
                for seq in [&self.genes, &rc] {
                    for start in 0..n {
                        let rotated: Vec<_> =
                            seq[start..].iter().chain(&seq[..start]).copied().collect();
                        if best.as_ref().is_none_or(|b| rotated < *b) {
                            best = Some(rotated);
                        }
                    }
                }
                best.expect("chromosomes are non-empty")
            }
        }
    }

    pub fn canonical(&self) -> Chromosome {
        Chromosome {
            shape: self.shape,
            genes: self.canonical_genes(),
        }
    }

    fn canonical_key(&self) -> (Vec<GeneOccurrence>, Shape) {
        (self.canonical_genes(), self.shape)
    }

    pub fn adjacencies(&self) -> Vec<Adjacency> {
        let mut out: Vec<Adjacency> = self
            .genes
            .windows(2)
            .map(|w| Adjacency::new(w[0].right_end(), w[1].left_end()))
            .collect();
        if self.shape == Shape::Circular {
            let first = self.genes[0];
            let last = self.genes[self.genes.len() - 1];
            out.push(Adjacency::new(last.right_end(), first.left_end()));
        }
        out
    }

    pub fn telomeres(&self) -> Vec<Extremity> {
        match self.shape {
            Shape::Circular => Vec::new(),
            Shape::Linear => vec![
                self.genes[0].left_end(),
                self.genes[self.genes.len() - 1].right_end(),
            ],
        }
    }
}

impl PartialEq for Chromosome {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape
            && self.genes.len() == other.genes.len()
            && self.canonical_genes() == other.canonical_genes()
    }
}

impl Eq for Chromosome {}

impl PartialOrd for Chromosome {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Chromosome {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }
}

impl Hash for Chromosome {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_key().hash(state);
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, close) = match self.shape {
            Shape::Linear => ('[', ']'),
            Shape::Circular => ('(', ')'),
        };
        write!(f, "{open}")?;
        for (i, g) in self.canonical_genes().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "{close}")
    }
}

/// How two genomes relate by gene content.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    Canonical,
    /// One singular and one duplicated genome over the same gene ids.
    OneTwoCognate {
        singular: Side,
    },
    TwoTwoCognate,
    NotCognate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// A non-empty multiset of chromosomes.
///
/// Chromosomes are kept sorted by canonical form; each one keeps its written
/// gene order, which only matters for [`singularize`].
#[derive(Debug, Clone)]
pub struct Genome {
    chromosomes: Vec<Chromosome>,
}

impl Genome {
    pub fn new(mut chromosomes: Vec<Chromosome>) -> Result<Self, GenomeError> {
        if chromosomes.is_empty() {
            return Err(GenomeError::EmptyGenome);
        }
        let mut counts: BTreeMap<GeneKey, usize> = BTreeMap::new();
        let mut copy_kinds: BTreeMap<u32, (bool, bool)> = BTreeMap::new();
        for g in chromosomes.iter().flat_map(|c| c.genes.iter()) {
            let count = counts.entry(g.key()).or_default();
            *count += 1;
            let limit = if g.copy == CopyIndex::None { 2 } else { 1 };
            if *count > limit {
                return Err(GenomeError::GeneOveruse(g.key()));
            }
            let kinds = copy_kinds.entry(g.id).or_default();
            if g.copy == CopyIndex::None {
                kinds.0 = true;
            } else {
                kinds.1 = true;
            }
            if kinds.0 && kinds.1 {
                return Err(GenomeError::MixedCopyIndices(g.id));
            }
        }
        chromosomes.sort();
        Ok(Genome { chromosomes })
    }

    pub fn chromosomes(&self) -> &[Chromosome] {
        &self.chromosomes
    }

    /// Rebuild a genome from its adjacencies over the given gene keys.
    /// Extremities not covered by an adjacency become telomeres.
    pub fn from_adjacencies(
        genes: &[GeneKey],
        adjacencies: &[Adjacency],
    ) -> Result<Self, GenomeError> {
        let map = AdjacencyMap::from_parts(genes, adjacencies)?;
        Ok(map.to_genome())
    }

    pub fn gene_keys(&self) -> BTreeMap<GeneKey, usize> {
        let mut counts = BTreeMap::new();
        for g in self.chromosomes.iter().flat_map(|c| c.genes.iter()) {
            *counts.entry(g.key()).or_default() += 1;
        }
        counts
    }

    /// Distinct gene identifiers, ignoring copy indices.
    pub fn gene_ids(&self) -> BTreeSet<u32> {
        self.chromosomes
            .iter()
            .flat_map(|c| c.genes.iter().map(|g| g.id))
            .collect()
    }

    /// Number of gene occurrences.
    pub fn gene_count(&self) -> usize {
        self.chromosomes.iter().map(|c| c.genes.len()).sum()
    }

    pub fn linear_count(&self) -> usize {
        self.chromosomes
            .iter()
            .filter(|c| c.shape == Shape::Linear)
            .count()
    }

    pub fn circular_count(&self) -> usize {
        self.chromosomes.len() - self.linear_count()
    }

    /// Sorted adjacency multiset.
    pub fn adjacencies(&self) -> Vec<Adjacency> {
        let mut out: Vec<_> = self
            .chromosomes
            .iter()
            .flat_map(Chromosome::adjacencies)
            .collect();
        out.sort();
        out
    }

    /// Sorted telomere multiset.
    pub fn telomeres(&self) -> Vec<Extremity> {
        let mut out: Vec<_> = self
            .chromosomes
            .iter()
            .flat_map(Chromosome::telomeres)
            .collect();
        out.sort();
        out
    }

    /// Every gene key occurs exactly once.
    pub fn is_singular(&self) -> bool {
        self.gene_keys().values().all(|&c| c == 1)
    }

    /// Every gene key occurs exactly twice (so no copy indices are present).
    pub fn is_duplicated(&self) -> bool {
        self.gene_keys().values().all(|&c| c == 2)
    }

    /// Duplicated, with every adjacency and telomere of even multiplicity.
    pub fn is_doubled(&self) -> bool {
        fn all_even<T: Ord + Copy>(items: &[T]) -> bool {
            let mut counts: BTreeMap<T, usize> = BTreeMap::new();
            for &x in items {
                *counts.entry(x).or_default() += 1;
            }
            counts.values().all(|c| c % 2 == 0)
        }
        self.is_duplicated() && all_even(&self.adjacencies()) && all_even(&self.telomeres())
    }

    pub fn has_copy_indices(&self) -> bool {
        self.chromosomes
            .iter()
            .flat_map(|c| c.genes.iter())
            .any(|g| g.copy != CopyIndex::None)
    }

    /// Drop all copy indices, turning a singularized genome back into a
    /// duplicated one.
    pub fn erase_indices(&self) -> Genome {
        let chromosomes = self
            .chromosomes
            .iter()
            .map(|c| Chromosome {
                shape: c.shape,
                genes: c
                    .genes
                    .iter()
                    .map(|g| g.with_copy(CopyIndex::None))
                    .collect(),
            })
            .collect();
        Genome::new(chromosomes).expect("erasing indices keeps at most two copies per id")
    }

    fn canonical_key(&self) -> Vec<(Vec<GeneOccurrence>, Shape)> {
        self.chromosomes
            .iter()
            .map(Chromosome::canonical_key)
            .collect()
    }
}

impl PartialEq for Genome {
    fn eq(&self, other: &Self) -> bool {
        self.chromosomes.len() == other.chromosomes.len()
            && self.canonical_key() == other.canonical_key()
    }
}

impl Eq for Genome {}

impl Hash for Genome {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_key().hash(state);
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_genome(self))
    }
}

/// Classify two genomes by gene content.
pub fn classify_pair(g1: &Genome, g2: &Genome) -> PairClass {
    let (k1, k2) = (g1.gene_keys(), g2.gene_keys());
    let singular = |k: &BTreeMap<GeneKey, usize>| k.values().all(|&c| c == 1);
    let duplicated = |k: &BTreeMap<GeneKey, usize>| k.values().all(|&c| c == 2);
    let same_keys = k1.keys().eq(k2.keys());
    match (singular(&k1), singular(&k2)) {
        (true, true) if same_keys => PairClass::Canonical,
        (true, false) if duplicated(&k2) && same_keys => PairClass::OneTwoCognate {
            singular: Side::First,
        },
        (false, true) if duplicated(&k1) && same_keys => PairClass::OneTwoCognate {
            singular: Side::Second,
        },
        (false, false) if duplicated(&k1) && duplicated(&k2) && same_keys => {
            PairClass::TwoTwoCognate
        }
        _ => PairClass::NotCognate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(text: &str) -> Genome {
        parse_genome(text).unwrap()
    }

    fn adj(a: Extremity, b: Extremity) -> Adjacency {
        Adjacency::new(a, b)
    }

    fn h(id: u32) -> Extremity {
        GeneKey::plain(id).head()
    }

    fn t(id: u32) -> Extremity {
        GeneKey::plain(id).tail()
    }

    #[test]
    fn singular_example_adjacencies_and_telomeres() {
        let s = g("(1 -3 2)\n(4)\n[5 -6]");
        let mut expected = vec![
            adj(h(1), h(3)),
            adj(t(3), t(2)),
            adj(h(2), t(1)),
            adj(h(4), t(4)),
            adj(h(5), h(6)),
        ];
        expected.sort();
        assert_eq!(s.adjacencies(), expected);
        assert_eq!(s.telomeres(), vec![t(5), t(6)]);
        assert!(s.is_singular());
        assert_eq!(s.linear_count(), 1);
        assert_eq!(s.circular_count(), 2);
    }

    #[test]
    fn one_gene_linear() {
        let s = g("[1]");
        assert!(s.adjacencies().is_empty());
        assert_eq!(s.telomeres(), vec![t(1), h(1)]);
    }

    #[test]
    fn duplicated_example() {
        let d = g("(1 2 -3 1)\n[3 -2]");
        assert!(d.is_duplicated());
        assert!(!d.is_doubled());
        let a = d.adjacencies();
        for expected in [
            adj(h(1), t(2)),
            adj(h(2), h(3)),
            adj(t(3), t(1)),
            adj(h(1), t(1)),
            adj(h(3), h(2)),
        ] {
            assert!(a.contains(&expected), "missing {expected}");
        }
        assert_eq!(d.telomeres(), vec![t(2), t(3)]);
    }

    #[test]
    fn doubled_examples() {
        assert!(g("(1 2)(1 2)[3 4][3 4]").is_doubled());
        assert!(g("(1 2 1 2)[3 4][3 4]").is_doubled());
        assert_eq!(
            g("(1 2)(1 2)[3 4][3 4]").adjacencies(),
            g("(1 2 1 2)[3 4][3 4]").adjacencies()
        );
    }

    #[test]
    fn size_relations_hold() {
        for text in [
            "(1 -3 2)\n(4)\n[5 -6]",
            "[1]",
            "(1 2 -3 1)[3 -2]",
            "[1 2][3][4 5 6]",
        ] {
            let genome = g(text);
            assert_eq!(genome.telomeres().len(), 2 * genome.linear_count());
            assert_eq!(
                genome.adjacencies().len(),
                genome.gene_count() - genome.linear_count()
            );
        }
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_pair(&g("(1 2)[3 -4]"), &g("(1 -3 2)[4]")),
            PairClass::Canonical
        );
        assert_eq!(
            classify_pair(&g("[1 2 3]"), &g("[1 2 -3 1][-3 2]")),
            PairClass::OneTwoCognate {
                singular: Side::First
            }
        );
        assert_eq!(
            classify_pair(&g("[1 2 -3 1][-3 2]"), &g("[1 2 3]")),
            PairClass::OneTwoCognate {
                singular: Side::Second
            }
        );
        assert_eq!(classify_pair(&g("[1]"), &g("[2]")), PairClass::NotCognate);
        assert_eq!(
            classify_pair(&g("[1 1]"), &g("(1)(1)")),
            PairClass::TwoTwoCognate
        );
        assert_eq!(
            classify_pair(&g("[1.a 2.a][1.b 2.b]"), &g("(1.a 2.b 1.b 2.a)")),
            PairClass::Canonical
        );
    }

    #[test]
    fn chromosome_equality_is_up_to_rotation_and_reflection() {
        let a = Chromosome::circular(vec![
            GeneOccurrence::forward(1),
            GeneOccurrence::forward(2),
            GeneOccurrence::reverse(3),
        ])
        .unwrap();
        let b = Chromosome::circular(vec![
            GeneOccurrence::forward(3),
            GeneOccurrence::reverse(2),
            GeneOccurrence::reverse(1),
        ])
        .unwrap();
        assert_eq!(a, b);
        let lin = Chromosome::linear(a.genes().to_vec()).unwrap();
        assert_ne!(a, lin);
    }

    #[test]
    fn overuse_and_mixing_rejected() {
        assert!(matches!(
            parse_genome("[1 1 1]"),
            Err(GenomeError::GeneOveruse(_))
        ));
        assert!(matches!(
            parse_genome("[1.a 1.a]"),
            Err(GenomeError::GeneOveruse(_))
        ));
        assert!(matches!(
            parse_genome("[1.a 1]"),
            Err(GenomeError::MixedCopyIndices(1))
        ));
    }
}

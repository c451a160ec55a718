use std::collections::BTreeSet;

use super::{Adjacency, Chromosome, CopyIndex, Extremity, GeneKey, Genome, GenomeError};

/// Largest number of adjacencies for which all resolved doublings are listed.
pub const MAX_DOUBLING_SQUARES: usize = 20;

/// The doubled adjacency and telomere multisets of a singular genome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Doubling {
    pub adjacencies: Vec<Adjacency>,
    pub telomeres: Vec<Extremity>,
    /// Number of distinct doubled genomes sharing these multisets: `2^o`.
    pub layout_count: u128,
}

fn twice<T: Ord + Copy>(v: Vec<T>) -> Vec<T> {
    let mut out: Vec<T> = v.iter().flat_map(|&x| [x, x]).collect();
    out.sort();
    out
}

pub fn double(s: &Genome) -> Result<Doubling, GenomeError> {
    if !s.is_singular() || s.has_copy_indices() {
        return Err(GenomeError::NotSingular);
    }
    Ok(Doubling {
        adjacencies: twice(s.adjacencies()),
        telomeres: twice(s.telomeres()),
        layout_count: 1u128
            .checked_shl(s.circular_count() as u32)
            .unwrap_or(u128::MAX),
    })
}

/// The indexed copies of adjacency `βγ` under one square choice: `false`
/// keeps `β_a γ_a, β_b γ_b`, `true` crosses to `β_a γ_b, β_b γ_a`.
pub(crate) fn square_adjacencies(adj: Adjacency, crossed: bool) -> [Adjacency; 2] {
    let (beta, gamma) = adj.ends();
    let (ga, gb) = if crossed {
        (CopyIndex::B, CopyIndex::A)
    } else {
        (CopyIndex::A, CopyIndex::B)
    };
    [
        Adjacency::new(beta.with_copy(CopyIndex::A), gamma.with_copy(ga)),
        Adjacency::new(beta.with_copy(CopyIndex::B), gamma.with_copy(gb)),
    ]
}

/// Every genome of `S^a_b(2S)`: one per choice of copy pairing on each
/// adjacency of `s`, in ascending order of the choice bit pattern (bit `i`
/// belongs to the `i`-th adjacency in sorted order).
///
/// Distinct layouts of the doubled genome and distinct index labelings are
/// both covered, since every indexed genome over the doubled multisets is
/// produced exactly once. Index erasure maps them onto `2^o` doubled genomes.
pub fn enumerate_resolved_doublings(s: &Genome) -> Result<Vec<Genome>, GenomeError> {
    if !s.is_singular() || s.has_copy_indices() {
        return Err(GenomeError::NotSingular);
    }
    let adjacencies = s.adjacencies();
    if adjacencies.len() > MAX_DOUBLING_SQUARES {
        return Err(GenomeError::SizeBudget(format!(
            "{} adjacencies exceed the limit of {MAX_DOUBLING_SQUARES}",
            adjacencies.len()
        )));
    }
    let keys: Vec<GeneKey> = s
        .gene_ids()
        .into_iter()
        .flat_map(|id| {
            [
                GeneKey::new(id, CopyIndex::A),
                GeneKey::new(id, CopyIndex::B),
            ]
        })
        .collect();
    let mut out = Vec::with_capacity(1 << adjacencies.len());
    for bits in 0u64..(1 << adjacencies.len()) {
        let indexed: Vec<Adjacency> = adjacencies
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| square_adjacencies(a, bits >> i & 1 == 1))
            .collect();
        out.push(Genome::from_adjacencies(&keys, &indexed)?);
    }
    Ok(out)
}

/// Label the two copies of every gene: the first occurrence met when walking
/// the chromosomes in genome order, genes left to right, becomes `a`.
pub fn singularize(d: &Genome) -> Result<Genome, GenomeError> {
    if !d.is_duplicated() || d.has_copy_indices() {
        return Err(GenomeError::NotDuplicated);
    }
    let mut seen = BTreeSet::new();
    let chromosomes = d
        .chromosomes()
        .iter()
        .map(|c| {
            let genes = c
                .genes()
                .iter()
                .map(|g| {
                    let copy = if seen.insert(g.id) {
                        CopyIndex::A
                    } else {
                        CopyIndex::B
                    };
                    g.with_copy(copy)
                })
                .collect();
            Chromosome::new(c.shape(), genes).expect("non-empty")
        })
        .collect();
    Genome::new(chromosomes)
}

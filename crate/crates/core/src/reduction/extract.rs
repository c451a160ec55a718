use std::collections::{BTreeMap, BTreeSet};

use crate::abg::{build_abg, AmbiguousBreakpointGraph};
use crate::genome::{
    Adjacency, Chromosome, CopyIndex, End, Extremity, GeneKey, GeneOccurrence, Genome,
};

use super::{ReductionError, ReductionOutput, ReductionShape};

/// Genomes realizing a reduction graph, with the vertex labeling used.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub s: Genome,
    pub d: Genome,
    pub d_check: Genome,
    /// Extremity of every non-isolated vertex.
    pub labels: Vec<Extremity>,
    pub isolated_labels: Vec<Extremity>,
}

fn ext(gene: u32, end: End, copy: CopyIndex) -> Extremity {
    Extremity::new(gene, end, copy)
}

/// Circular shape: square `i` encodes `(i+1)^h (i+2)^t` of `S = (1 … a*)`,
/// wrapping to `a*^h 1^t`. Linear shape: square `i` encodes
/// `(2i+1)^h (2i+2)^h` of `S = [1 -2][3 -4]…` and every tail is isolated.
pub fn extract_genomes(r: &ReductionOutput) -> Result<Extraction, ReductionError> {
    let g = &r.graph;
    let fail = |m: &str| Err(ReductionError::Extraction(m.into()));
    let n_sq = g.a_star() as u32;
    if n_sq == 0 {
        return fail("the graph has no squares");
    }
    if g.vertex_count() != 4 * n_sq as usize
        || (0..g.vertex_count() as u32).any(|x| g.degree(x) != 3)
    {
        return fail("every vertex must lie in a square and carry a fixed edge");
    }
    let (s, genes, ends): (Genome, u32, Box<dyn Fn(u32) -> (Extremity, Extremity)>) = match r.shape
    {
        ReductionShape::Circular => {
            if g.isolated_count() != 0 {
                return fail("circular extraction needs a graph without isolated vertices");
            }
            let chrom = Chromosome::circular((1..=n_sq).map(GeneOccurrence::forward).collect())
                .expect("non-empty");
            let ends = move |i: u32| {
                (
                    ext(i + 1, End::Head, CopyIndex::None),
                    ext((i + 1) % n_sq + 1, End::Tail, CopyIndex::None),
                )
            };
            (Genome::new(vec![chrom])?, n_sq, Box::new(ends))
        }
        ReductionShape::Linear => {
            if g.isolated_count() != g.vertex_count() {
                return fail("linear extraction needs one isolated vertex per graph vertex");
            }
            let chroms = (0..n_sq)
                .map(|i| {
                    Chromosome::linear(vec![
                        GeneOccurrence::forward(2 * i + 1),
                        GeneOccurrence::reverse(2 * i + 2),
                    ])
                    .expect("non-empty")
                })
                .collect();
            let ends = |i: u32| {
                (
                    ext(2 * i + 1, End::Head, CopyIndex::None),
                    ext(2 * i + 2, End::Head, CopyIndex::None),
                )
            };
            (Genome::new(chroms)?, 2 * n_sq, Box::new(ends))
        }
    };
    let mut labels = vec![ext(1, End::Tail, CopyIndex::None); g.vertex_count()];
    for (i, sq) in g.squares().iter().enumerate() {
        let (beta, gamma) = ends(i as u32);
        labels[sq.u as usize] = beta.with_copy(CopyIndex::A);
        labels[sq.u_hat as usize] = beta.with_copy(CopyIndex::B);
        labels[sq.v as usize] = gamma.with_copy(CopyIndex::A);
        labels[sq.v_hat as usize] = gamma.with_copy(CopyIndex::B);
    }
    let isolated_labels: Vec<Extremity> = match r.shape {
        ReductionShape::Circular => Vec::new(),
        ReductionShape::Linear => (1..=genes)
            .flat_map(|gene| [CopyIndex::A, CopyIndex::B].map(|c| ext(gene, End::Tail, c)))
            .collect(),
    };
    let keys: Vec<GeneKey> = (1..=genes)
        .flat_map(|gene| [CopyIndex::A, CopyIndex::B].map(|c| GeneKey::new(gene, c)))
        .collect();
    let adjacencies: Vec<Adjacency> = g
        .d_edges()
        .iter()
        .map(|&(x, y)| Adjacency::new(labels[x as usize], labels[y as usize]))
        .collect();
    let d_check = Genome::from_adjacencies(&keys, &adjacencies)?;
    Ok(Extraction {
        d: d_check.erase_indices(),
        s,
        d_check,
        labels,
        isolated_labels,
    })
}

impl Extraction {
    /// Rebuild the graph from the genomes and check it equals `graph` under
    /// the extraction labeling: same squares with the same solid matchings,
    /// same fixed edges, same isolated extremities.
    pub fn verify(
        &self,
        graph: &AmbiguousBreakpointGraph,
    ) -> Result<AmbiguousBreakpointGraph, String> {
        let rebuilt = build_abg(&self.s, &self.d_check).map_err(|e| e.to_string())?;
        if rebuilt.a_star() != graph.a_star()
            || rebuilt.d_edges().len() != graph.d_edges().len()
            || rebuilt.isolated_count() != graph.isolated_count()
            || rebuilt.vertex_count() != graph.vertex_count()
        {
            return Err(format!(
                "counts differ: squares {}/{}, edges {}/{}, isolated {}/{}",
                rebuilt.a_star(),
                graph.a_star(),
                rebuilt.d_edges().len(),
                graph.d_edges().len(),
                rebuilt.isolated_count(),
                graph.isolated_count()
            ));
        }
        let rl = rebuilt.labels().ok_or("rebuilt graph has no labels")?;
        let index: BTreeMap<Extremity, u32> =
            rl.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
        let map: Vec<u32> = self
            .labels
            .iter()
            .map(|e| {
                index
                    .get(e)
                    .copied()
                    .ok_or_else(|| format!("label {e} missing"))
            })
            .collect::<Result<_, _>>()?;
        let pair = |a: u32, b: u32| (a.min(b), a.max(b));
        for sq in graph.squares() {
            let i = rebuilt
                .square_of(map[sq.u as usize])
                .ok_or("square vertex outside every rebuilt square")?;
            let rsq = &rebuilt.squares()[i];
            for bit in [false, true] {
                let want: BTreeSet<_> = sq
                    .matching(bit)
                    .iter()
                    .map(|&(a, b)| pair(map[a as usize], map[b as usize]))
                    .collect();
                let got: BTreeSet<_> = rsq.matching(bit).iter().map(|&(a, b)| pair(a, b)).collect();
                if want != got {
                    return Err(format!("square {i} matchings differ"));
                }
            }
        }
        for &(x, y) in graph.d_edges() {
            if rebuilt.d_partner(map[x as usize]) != Some(map[y as usize]) {
                return Err(format!("fixed edge {x}–{y} missing"));
            }
        }
        let a: BTreeSet<_> = self.isolated_labels.iter().collect();
        let b: BTreeSet<_> = rebuilt.isolated_labels().iter().collect();
        if a != b {
            return Err("isolated extremities differ".into());
        }
        Ok(rebuilt)
    }
}

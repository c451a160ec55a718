use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    enumerate_resolved_doublings, AdjacencyMap, Chromosome, GeneOccurrence, Genome, GenomeError,
    Orientation, Shape,
};

/// A random singular genome over genes `1..=n` with the given chromosome
/// counts. Deterministic for a fixed seed.
pub fn random_genome(
    n: usize,
    linear_count: usize,
    circular_count: usize,
    seed: u64,
) -> Result<Genome, GenomeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build_random(n, linear_count, circular_count, &mut rng)
}

fn build_random(
    n: usize,
    linear_count: usize,
    circular_count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Genome, GenomeError> {
    let parts = linear_count + circular_count;
    if parts == 0 || parts > n || n > u32::MAX as usize {
        return Err(GenomeError::InfeasibleParameters(format!(
            "{n} genes cannot fill {linear_count} linear and {circular_count} circular chromosomes"
        )));
    }
    let mut genes: Vec<GeneOccurrence> = (1..=n as u32)
        .map(|id| {
            let orientation = if rng.gen_bool(0.5) {
                Orientation::Reverse
            } else {
                Orientation::Forward
            };
            GeneOccurrence::new(id, orientation, super::CopyIndex::None)
        })
        .collect();
    genes.shuffle(rng);
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    cuts.push(n);
    let mut start = 0;
    let mut chromosomes = Vec::with_capacity(parts);
    for (i, &end) in cuts.iter().enumerate() {
        let shape = if i < linear_count {
            Shape::Linear
        } else {
            Shape::Circular
        };
        chromosomes
            .push(Chromosome::new(shape, genes[start..end].to_vec()).expect("non-empty part"));
        start = end;
    }
    Genome::new(chromosomes)
}

/// Apply `ops` uniformly chosen non-trivial DCJs.
fn scramble(map: &mut AdjacencyMap, ops: usize, rng: &mut ChaCha8Rng) {
    for _ in 0..ops {
        let neighbors = map.neighbors();
        if let Some(next) = neighbors.choose(rng) {
            *map = next.clone();
        }
    }
}

/// A random pair over genes `1..=n`.
///
/// Without `wgd` both genomes are singular (a canonical pair). With `wgd` the
/// second genome is a random resolved doubling of the first, scrambled by
/// `ops` DCJs and stripped of copy indices, so the pair is [1·2]-cognate.
/// Either way the second genome is at most `ops` DCJs from a perfect image of
/// the first.
pub fn random_cognate_pair(
    n: usize,
    wgd: bool,
    ops: usize,
    seed: u64,
) -> Result<(Genome, Genome), GenomeError> {
    if n == 0 {
        return Err(GenomeError::InfeasibleParameters(
            "n must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chromosomes = rng.gen_range(1..=n.min(3));
    let linear = rng.gen_range(0..=chromosomes);
    let s = build_random(n, linear, chromosomes - linear, &mut rng)?;
    let start = if wgd {
        let all = enumerate_resolved_doublings(&s)?;
        all.choose(&mut rng).expect("at least one doubling").clone()
    } else {
        s.clone()
    };
    let mut map = AdjacencyMap::from_genome(&start)?;
    scramble(&mut map, ops, &mut rng);
    let second = map.to_genome();
    let second = if wgd { second.erase_indices() } else { second };
    Ok((s, second))
}

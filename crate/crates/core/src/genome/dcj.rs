//! Compact adjacency representation and double-cut-and-join moves.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{
    Adjacency, Chromosome, End, Extremity, GeneKey, GeneOccurrence, Genome, GenomeError,
    Orientation, Shape,
};

/// An element of a genome that a DCJ can cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cut {
    Adjacency(Adjacency),
    Telomere(Extremity),
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::Adjacency(a) => write!(f, "{a}"),
            Cut::Telomere(x) => write!(f, "{x}"),
        }
    }
}

/// A singular genome as a partner array over its `2n` extremities.
///
/// Gene key `i` (in sorted order) owns extremities `2i` (tail) and `2i + 1`
/// (head). A telomere is its own partner.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdjacencyMap {
    keys: Vec<GeneKey>,
    partner: Vec<u32>,
}

impl AdjacencyMap {
    pub fn from_genome(g: &Genome) -> Result<Self, GenomeError> {
        if !g.is_singular() {
            return Err(GenomeError::NotSingular);
        }
        let keys: Vec<GeneKey> = g.gene_keys().into_keys().collect();
        Self::from_parts(&keys, &g.adjacencies())
    }

    pub fn from_parts(genes: &[GeneKey], adjacencies: &[Adjacency]) -> Result<Self, GenomeError> {
        let mut keys = genes.to_vec();
        keys.sort();
        keys.dedup();
        if keys.len() != genes.len() {
            return Err(GenomeError::InvalidAdjacencies("repeated gene key".into()));
        }
        if keys.is_empty() {
            return Err(GenomeError::EmptyGenome);
        }
        let mut map = AdjacencyMap {
            partner: (0..2 * keys.len() as u32).collect(),
            keys,
        };
        for adj in adjacencies {
            let (x, y) = adj.ends();
            let (i, j) = match (map.index_of(x), map.index_of(y)) {
                (Some(i), Some(j)) => (i, j),
                _ => {
                    return Err(GenomeError::InvalidAdjacencies(format!(
                        "{adj} uses an unknown gene"
                    )))
                }
            };
            if i == j || map.partner[i] != i as u32 || map.partner[j] != j as u32 {
                return Err(GenomeError::InvalidAdjacencies(format!(
                    "extremity used twice in {adj}"
                )));
            }
            map.partner[i] = j as u32;
            map.partner[j] = i as u32;
        }
        Ok(map)
    }

    pub fn keys(&self) -> &[GeneKey] {
        &self.keys
    }

    pub fn partner(&self) -> &[u32] {
        &self.partner
    }

    pub fn index_of(&self, x: Extremity) -> Option<usize> {
        let i = self.keys.binary_search(&x.key()).ok()?;
        Some(2 * i + usize::from(x.end == End::Head))
    }

    pub fn extremity(&self, idx: usize) -> Extremity {
        let key = self.keys[idx / 2];
        if idx.is_multiple_of(2) {
            key.tail()
        } else {
            key.head()
        }
    }

    /// Rebuild chromosomes: linear ones traced from their lowest telomere,
    /// then circular ones from the tail of their lowest gene.
    pub fn to_genome(&self) -> Genome {
        let n = self.keys.len();
        let mut seen = vec![false; n];
        let mut chromosomes = Vec::new();
        let starts = (0..2 * n)
            .filter(|&x| self.partner[x] as usize == x)
            .map(|x| (x, Shape::Linear))
            .chain((0..n).map(|i| (2 * i, Shape::Circular)));
        for (start, shape) in starts {
            if seen[start / 2] {
                continue;
            }
            let mut genes = Vec::new();
            let mut x = start;
            loop {
                let gene = x / 2;
                if seen[gene] {
                    break;
                }
                seen[gene] = true;
                let key = self.keys[gene];
                let orientation = if x % 2 == 0 {
                    Orientation::Forward
                } else {
                    Orientation::Reverse
                };
                genes.push(GeneOccurrence::new(key.id, orientation, key.copy));
                let exit = x ^ 1;
                let next = self.partner[exit] as usize;
                if next == exit {
                    break;
                }
                x = next;
            }
            chromosomes.push(Chromosome::new(shape, genes).expect("traced at least one gene"));
        }
        Genome::new(chromosomes).expect("each key appears once")
    }

    /// The cut element containing extremity `x`, as its sorted end list.
    fn element(&self, x: usize) -> Vec<u32> {
        let y = self.partner[x] as usize;
        if y == x {
            vec![x as u32]
        } else {
            vec![x.min(y) as u32, x.max(y) as u32]
        }
    }

    /// One representative extremity per adjacency or telomere.
    pub fn element_starts(&self) -> Vec<usize> {
        (0..self.partner.len())
            .filter(|&x| self.partner[x] as usize >= x)
            .collect()
    }

    /// Cut the elements containing `x1` and `x2` and rejoin the open ends
    /// according to `pairs`; ends left unpaired become telomeres.
    pub fn apply(&mut self, x1: usize, x2: usize, pairs: &[(u32, u32)]) -> Result<(), String> {
        let e1 = self.element(x1);
        let e2 = self.element(x2);
        if e1 == e2 {
            return Err("the two cuts are the same element".into());
        }
        let open: Vec<u32> = e1.iter().chain(&e2).copied().collect();
        check_rejoin(&open, &e1, &e2, pairs)?;
        for &x in &open {
            self.partner[x as usize] = x;
        }
        for &(x, y) in pairs {
            self.partner[x as usize] = y;
            self.partner[y as usize] = x;
        }
        Ok(())
    }

    /// All genomes one non-trivial DCJ away.
    pub fn neighbors(&self) -> Vec<AdjacencyMap> {
        let starts = self.element_starts();
        let mut out = Vec::new();
        for (i, &x1) in starts.iter().enumerate() {
            for &x2 in &starts[i + 1..] {
                let e1 = self.element(x1);
                let e2 = self.element(x2);
                let open: Vec<u32> = e1.iter().chain(&e2).copied().collect();
                for pairs in partial_matchings(&open) {
                    if is_identity(&e1, &e2, &pairs, &open)
                        || check_rejoin(&open, &e1, &e2, &pairs).is_err()
                    {
                        continue;
                    }
                    let mut next = self.clone();
                    next.apply(x1, x2, &pairs).expect("rejoin checked above");
                    out.push(next);
                }
            }
        }
        out
    }

    /// Distinct genomes one non-trivial DCJ away, in no particular order.
    /// Same set as [`neighbors`](Self::neighbors), built without enumerating
    /// rejoins.
    pub fn successors(&self) -> Vec<AdjacencyMap> {
        let starts = self.element_starts();
        let mut out = Vec::new();
        let rejoin = |cut: &[u32], pairs: &[(u32, u32)]| {
            let mut next = self.clone();
            for &x in cut {
                next.partner[x as usize] = x;
            }
            for &(x, y) in pairs {
                next.partner[x as usize] = y;
                next.partner[y as usize] = x;
            }
            next
        };
        // fissions
        for &a in &starts {
            let b = self.partner[a];
            if b as usize != a {
                out.push(rejoin(&[a as u32, b], &[]));
            }
        }
        for (i, &x1) in starts.iter().enumerate() {
            let a = x1 as u32;
            let b = self.partner[x1];
            for &x2 in &starts[i + 1..] {
                let c = x2 as u32;
                let d = self.partner[x2];
                match (a != b, c != d) {
                    (true, true) => {
                        out.push(rejoin(&[a, b, c, d], &[(a, c), (b, d)]));
                        out.push(rejoin(&[a, b, c, d], &[(a, d), (b, c)]));
                    }
                    (true, false) => {
                        out.push(rejoin(&[a, b, c], &[(a, c)]));
                        out.push(rejoin(&[a, b, c], &[(b, c)]));
                    }
                    (false, true) => {
                        out.push(rejoin(&[a, c, d], &[(a, c)]));
                        out.push(rejoin(&[a, c, d], &[(a, d)]));
                    }
                    (false, false) => out.push(rejoin(&[a, c], &[(a, c)])),
                }
            }
        }
        out
    }
}

fn result_elements(open: &[u32], pairs: &[(u32, u32)]) -> BTreeSet<Vec<u32>> {
    let paired: BTreeSet<u32> = pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
    pairs
        .iter()
        .map(|&(x, y)| vec![x.min(y), x.max(y)])
        .chain(
            open.iter()
                .filter(|x| !paired.contains(x))
                .map(|&x| vec![x]),
        )
        .collect()
}

fn is_identity(e1: &[u32], e2: &[u32], pairs: &[(u32, u32)], open: &[u32]) -> bool {
    let original: BTreeSet<Vec<u32>> = [e1.to_vec(), e2.to_vec()].into_iter().collect();
    result_elements(open, pairs) == original
}

/// A rejoin is a partial matching of the open ends. It must not produce more
/// than two elements, except for a fission that leaves one cut element intact.
fn check_rejoin(open: &[u32], e1: &[u32], e2: &[u32], pairs: &[(u32, u32)]) -> Result<(), String> {
    let mut used = BTreeSet::new();
    for &(x, y) in pairs {
        if x == y || !open.contains(&x) || !open.contains(&y) {
            return Err(format!("pair ({x}, {y}) is not made of two open ends"));
        }
        if !used.insert(x) || !used.insert(y) {
            return Err("an open end is used twice".into());
        }
    }
    let result = result_elements(open, pairs);
    if is_identity(e1, e2, pairs, open) || result.len() <= 2 {
        return Ok(());
    }
    if result.len() == 3 && (result.contains(e1) || result.contains(e2)) {
        return Ok(());
    }
    Err("rejoin needs more than one double cut and join".into())
}

fn partial_matchings(points: &[u32]) -> Vec<Vec<(u32, u32)>> {
    match points.split_first() {
        None => vec![Vec::new()],
        Some((&first, rest)) => {
            let mut out = partial_matchings(rest);
            for (i, &other) in rest.iter().enumerate() {
                let remaining: Vec<u32> = rest
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &x)| x)
                    .collect();
                for mut m in partial_matchings(&remaining) {
                    m.insert(0, (first, other));
                    out.push(m);
                }
            }
            out
        }
    }
}

impl Genome {
    /// Apply one double cut and join to a genome that is singular over its
    /// gene keys. Open ends not listed in `rejoin` become telomeres.
    pub fn apply_dcj(
        &self,
        cut1: Cut,
        cut2: Cut,
        rejoin: &[(Extremity, Extremity)],
    ) -> Result<Genome, GenomeError> {
        let mut map = AdjacencyMap::from_genome(self)?;
        let locate = |cut: Cut| -> Result<usize, GenomeError> {
            let missing = || GenomeError::CutNotFound(cut.to_string());
            match cut {
                Cut::Telomere(x) => {
                    let i = map.index_of(x).ok_or_else(missing)?;
                    (map.partner[i] as usize == i)
                        .then_some(i)
                        .ok_or_else(missing)
                }
                Cut::Adjacency(a) => {
                    let (x, y) = a.ends();
                    let i = map.index_of(x).ok_or_else(missing)?;
                    let j = map.index_of(y).ok_or_else(missing)?;
                    (i != j && map.partner[i] as usize == j)
                        .then_some(i)
                        .ok_or_else(missing)
                }
            }
        };
        let (x1, x2) = (locate(cut1)?, locate(cut2)?);
        let mut pairs = Vec::with_capacity(rejoin.len());
        for &(x, y) in rejoin {
            let i = map.index_of(x);
            let j = map.index_of(y);
            match (i, j) {
                (Some(i), Some(j)) => pairs.push((i as u32, j as u32)),
                _ => {
                    return Err(GenomeError::InvalidRejoin(format!(
                        "{x}{y} uses an unknown extremity"
                    )))
                }
            }
        }
        map.apply(x1, x2, &pairs)
            .map_err(GenomeError::InvalidRejoin)?;
        Ok(map.to_genome())
    }

    /// All extremities, with multiplicity.
    pub fn extremities(&self) -> BTreeMap<Extremity, usize> {
        let mut out = BTreeMap::new();
        for a in self.adjacencies() {
            let (x, y) = a.ends();
            *out.entry(x).or_default() += 1;
            *out.entry(y).or_default() += 1;
        }
        for t in self.telomeres() {
            *out.entry(t).or_default() += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_genome;
    use super::*;

    fn h(id: u32) -> Extremity {
        GeneKey::plain(id).head()
    }

    fn t(id: u32) -> Extremity {
        GeneKey::plain(id).tail()
    }

    fn g(text: &str) -> Genome {
        parse_genome(text).unwrap()
    }

    #[test]
    fn inversion() {
        let out = g("(1 2 3 4)")
            .apply_dcj(
                Cut::Adjacency(Adjacency::new(h(1), t(2))),
                Cut::Adjacency(Adjacency::new(h(3), t(4))),
                &[(h(1), h(3)), (t(2), t(4))],
            )
            .unwrap();
        assert_eq!(out, g("(1 -3 -2 4)"));
    }

    #[test]
    fn fusion_of_two_linear_chromosomes() {
        let before = g("[1 2][3]");
        let out = before
            .apply_dcj(Cut::Telomere(h(2)), Cut::Telomere(t(3)), &[(h(2), t(3))])
            .unwrap();
        assert_eq!(out, g("[1 2 3]"));
        assert_eq!(out.chromosomes().len(), before.chromosomes().len() - 1);
        assert_eq!(out.extremities(), before.extremities());
    }

    #[test]
    fn identity_rejoin_keeps_genome() {
        let before = g("(1 2)");
        let out = before
            .apply_dcj(
                Cut::Adjacency(Adjacency::new(h(1), t(2))),
                Cut::Adjacency(Adjacency::new(h(2), t(1))),
                &[(h(1), t(2)), (h(2), t(1))],
            )
            .unwrap();
        assert_eq!(out, before);
    }

    #[test]
    fn fission_and_excision() {
        let out = g("[1 2 3]")
            .apply_dcj(
                Cut::Adjacency(Adjacency::new(h(1), t(2))),
                Cut::Adjacency(Adjacency::new(h(2), t(3))),
                &[(h(1), t(3)), (t(2), h(2))],
            )
            .unwrap();
        assert_eq!(out, g("[1 3](2)"));
        let out = g("[1 2]")
            .apply_dcj(
                Cut::Adjacency(Adjacency::new(h(1), t(2))),
                Cut::Telomere(t(1)),
                &[],
            )
            .unwrap();
        assert_eq!(out, g("[1][2]"));
    }

    #[test]
    fn invalid_requests() {
        let s = g("[1 2][3 4]");
        let a12 = Cut::Adjacency(Adjacency::new(h(1), t(2)));
        let a34 = Cut::Adjacency(Adjacency::new(h(3), t(4)));
        assert!(matches!(
            s.apply_dcj(Cut::Adjacency(Adjacency::new(h(2), t(3))), a12, &[]),
            Err(GenomeError::CutNotFound(_))
        ));
        assert!(matches!(
            s.apply_dcj(a12, a12, &[]),
            Err(GenomeError::InvalidRejoin(_))
        ));
        // four telomeres from two adjacencies is two moves
        assert!(matches!(
            s.apply_dcj(a12, a34, &[]),
            Err(GenomeError::InvalidRejoin(_))
        ));
        assert!(matches!(
            s.apply_dcj(a12, a34, &[(h(1), t(1))]),
            Err(GenomeError::InvalidRejoin(_))
        ));
        assert!(matches!(
            s.apply_dcj(a12, a34, &[(h(1), h(3)), (h(1), t(4))]),
            Err(GenomeError::InvalidRejoin(_))
        ));
        assert!(matches!(
            g("[1 1]").apply_dcj(Cut::Telomere(t(1)), Cut::Telomere(h(1)), &[]),
            Err(GenomeError::NotSingular)
        ));
    }

    #[test]
    fn neighbor_counts() {
        // two adjacencies: 2 swaps per pair; fissions of either side
        let map = AdjacencyMap::from_genome(&g("(1 2)")).unwrap();
        let n = map.neighbors();
        assert!(n.iter().all(|m| m != &map));
        let genomes: BTreeSet<String> = n.iter().map(|m| m.to_genome().to_string()).collect();
        assert!(genomes.contains("(1 -2)\n"));
        assert!(genomes.contains("(1)(2)\n") || genomes.contains("(1)\n(2)\n"));
        assert!(genomes.contains("[1 2]\n"));
    }

    #[test]
    fn successors_match_neighbors() {
        for text in [
            "(1 2)",
            "(1 2)[3 -4]",
            "[1]",
            "[1][2][3]",
            "(1 -2 3)",
            "[1 2][3](4)",
        ] {
            let map = AdjacencyMap::from_genome(&g(text)).unwrap();
            let fast: BTreeSet<Vec<u32>> = map
                .successors()
                .iter()
                .map(|m| m.partner().to_vec())
                .collect();
            let slow: BTreeSet<Vec<u32>> = map
                .neighbors()
                .iter()
                .map(|m| m.partner().to_vec())
                .collect();
            assert_eq!(fast.len(), map.successors().len(), "{text}");
            assert_eq!(fast, slow, "{text}");
        }
    }

    #[test]
    fn trace_orders_linear_first() {
        let map = AdjacencyMap::from_genome(&g("(1 2)[3 -4]")).unwrap();
        let back = map.to_genome();
        assert_eq!(back, g("(1 2)[3 -4]"));
        assert_eq!(back.to_string(), "(1 2)\n[3 -4]\n");
    }
}

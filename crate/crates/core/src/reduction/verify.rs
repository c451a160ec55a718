use std::collections::BTreeMap;

use serde::Serialize;

use crate::abg::{
    enumerate_candidates, resolve, AmbiguousBreakpointGraph, CandidateKind, Resolution,
};

use super::gadgets::Builder;
use super::{expected_counts, Pattern, ReductionError, ReductionOutput, ReductionShape};

#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub k: u32,
    /// Shortest alternating cycle of length at most k, if any.
    pub shortest_cycle: Option<usize>,
    pub cycles_below_k: usize,
    pub k_cycles: usize,
    pub registered_k_cycles: usize,
    /// k-cycles matching no registry entry.
    pub unregistered_k_cycles: usize,
    /// Registry entries with no matching k-cycle.
    pub missing_k_cycles: usize,
    pub degree_violations: usize,
    pub vertices: usize,
    pub expected_vertices: usize,
    pub squares: usize,
    pub expected_squares: usize,
    pub flowers: usize,
    pub expected_flowers: usize,
    pub extensions: usize,
    pub expected_extensions: usize,
    pub violations: Vec<String>,
}

impl StructureReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn sorted(p: &[(u32, bool)]) -> Pattern {
    let mut p = p.to_vec();
    p.sort_unstable();
    p
}

/// Check the shortest-cycle property, match every k-cycle against the
/// gadget registries, and compare sizes with the instance statistics.
pub fn verify_structure(r: &ReductionOutput) -> Result<StructureReport, ReductionError> {
    let g = &r.graph;
    let k = r.k;
    let mut violations = Vec::new();
    let below = enumerate_candidates(g, k - 2)?;
    let at = enumerate_candidates(g, k)?;
    let cycles_below_k = below
        .candidates
        .iter()
        .filter(|c| c.kind == CandidateKind::Cycle)
        .count();
    if cycles_below_k > 0 {
        violations.push(format!(
            "{cycles_below_k} alternating cycles shorter than {k}"
        ));
    }
    let mut registry: BTreeMap<Pattern, usize> = BTreeMap::new();
    for p in r.registered_cycles() {
        *registry.entry(sorted(p)).or_default() += 1;
    }
    let registered = r.registered_cycles().len();
    let mut k_cycles = 0;
    let mut unregistered = 0;
    for c in at.cycles_of_length(k as usize) {
        k_cycles += 1;
        match registry.get_mut(&sorted(&c.required)) {
            Some(n) if *n > 0 => *n -= 1,
            _ => unregistered += 1,
        }
    }
    let missing: usize = registry.values().sum();
    if unregistered > 0 {
        violations.push(format!(
            "{unregistered} {k}-cycles outside every registry entry"
        ));
    }
    if missing > 0 {
        violations.push(format!("{missing} registered {k}-cycles not found"));
    }
    let shortest_cycle = below.shortest_cycle().or(at.shortest_cycle());
    if shortest_cycle != Some(k as usize) && !r.instance.clauses.is_empty() {
        violations.push(format!(
            "shortest cycle is {shortest_cycle:?}, expected {k}"
        ));
    }
    let degree_violations = (0..g.vertex_count() as u32)
        .filter(|&x| g.degree(x) != 3)
        .count();
    if degree_violations > 0 {
        violations.push(format!("{degree_violations} vertices without degree 3"));
    }
    if r.shape == ReductionShape::Linear && g.isolated_count() != g.vertex_count() {
        violations.push("isolated count differs from the graph's vertex count".into());
    }
    let e = expected_counts(&r.stats, k);
    let sizes = [
        ("vertices", g.vertex_count(), e.vertices),
        ("squares", g.a_star(), e.squares),
        ("flowers", r.flowers.len(), e.flowers),
        ("extensions", r.extensions.len(), e.extensions),
        ("k-cycles", registered, e.k_cycles),
    ];
    for (what, got, want) in sizes {
        if got != want {
            violations.push(format!("{got} {what}, expected {want}"));
        }
    }
    if r.variables.len() != r.stats.variables
        || r.clauses.len() != r.stats.clauses
        || r.occurrences.len() != r.stats.occurrences
    {
        violations.push("gadget counts differ from the instance".into());
    }
    if r.flowers.iter().any(|f| f.p != k as usize / 2 + 1) {
        violations.push("flower of the wrong size".into());
    }
    Ok(StructureReport {
        k,
        shortest_cycle,
        cycles_below_k,
        k_cycles,
        registered_k_cycles: registered,
        unregistered_k_cycles: unregistered,
        missing_k_cycles: missing,
        degree_violations,
        vertices: g.vertex_count(),
        expected_vertices: e.vertices,
        squares: g.a_star(),
        expected_squares: e.squares,
        flowers: r.flowers.len(),
        expected_flowers: e.flowers,
        extensions: r.extensions.len(),
        expected_extensions: e.extensions,
        violations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowerReport {
    pub p: usize,
    pub resolutions: u64,
    pub even_checked: u64,
    pub odd_checked: u64,
    /// Bit patterns breaking the parity law.
    pub violations: Vec<u64>,
}

impl FlowerReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Resolve a closed `p`-flower in all `2^p` ways: an even number of
/// switched squares must give two `2p`-cycles, an odd number one
/// `4p`-cycle.
pub fn verify_flower(p: usize) -> Result<FlowerReport, ReductionError> {
    if !(3..=20).contains(&p) {
        return Err(ReductionError::SizeBudget(format!(
            "flower size {p} outside 3..=20"
        )));
    }
    let mut b = Builder::new(8);
    b.closed_flower(p);
    let g = AmbiguousBreakpointGraph::new(b.vertex_count as usize, b.squares, b.edges, 0)?;
    let mut report = FlowerReport {
        p,
        resolutions: 1 << p,
        even_checked: 0,
        odd_checked: 0,
        violations: Vec::new(),
    };
    for pattern in 0..1u64 << p {
        let census = resolve(&g, &Resolution::from_pattern(pattern, p))?;
        let even = pattern.count_ones() % 2 == 0;
        let want: Vec<(usize, usize)> = if even {
            vec![(2 * p, 2)]
        } else {
            vec![(4 * p, 1)]
        };
        let got: Vec<(usize, usize)> = census.cycles.iter().map(|(&l, &c)| (l, c)).collect();
        if even {
            report.even_checked += 1;
        } else {
            report.odd_checked += 1;
        }
        if got != want || !census.paths.is_empty() {
            report.violations.push(pattern);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GadgetKind {
    VariableTtf,
    VariableTf,
    Occurrence,
    Clause2,
    Clause3,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 5] = [
        GadgetKind::VariableTtf,
        GadgetKind::VariableTf,
        GadgetKind::Occurrence,
        GadgetKind::Clause2,
        GadgetKind::Clause3,
    ];
}

/// One gadget on its own, with its flowers and extensions but with open
/// ports left unconnected.
#[derive(Debug, Clone)]
pub struct MicroGadget {
    pub kind: GadgetKind,
    pub graph: AmbiguousBreakpointGraph,
    /// The gadget's own squares (flowers and chains excluded).
    pub core: Vec<u32>,
    /// Θ-cycles of variable and clause gadgets; the two routing paths of an
    /// occurrence gadget.
    pub patterns: Vec<Pattern>,
}

pub fn micro_gadget(kind: GadgetKind, k: u32) -> Result<MicroGadget, ReductionError> {
    if k < 8 || k % 2 == 1 {
        return Err(ReductionError::InvalidK(k));
    }
    let mut b = Builder::new(k);
    let (core, patterns) = match kind {
        GadgetKind::VariableTtf | GadgetKind::VariableTf => {
            let v = b.variable(kind == GadgetKind::VariableTf);
            (ids(&v.block), vec![v.theta_t, v.theta_f])
        }
        GadgetKind::Occurrence => {
            let w = b.occurrence();
            (ids(&w.block), vec![w.x_port.path, w.y_port.path])
        }
        GadgetKind::Clause2 | GadgetKind::Clause3 => {
            let c = b.clause(if kind == GadgetKind::Clause2 { 2 } else { 3 });
            (ids(&c.block), c.thetas)
        }
    };
    let graph = AmbiguousBreakpointGraph::new(b.vertex_count as usize, b.squares, b.edges, 0)?;
    Ok(MicroGadget {
        kind,
        graph,
        core,
        patterns,
    })
}

fn ids(b: &super::gadgets::Block) -> Vec<u32> {
    b.squares.iter().map(|s| s.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abg::conflict;
    use crate::reduction::{build_reduction, example_instance};

    #[test]
    fn example_formula_structure() {
        let r = build_reduction(&example_instance(), 8, ReductionShape::Circular).unwrap();
        let rep = verify_structure(&r).unwrap();
        assert!(rep.ok(), "{:?}", rep.violations);
        assert_eq!(rep.shortest_cycle, Some(8));
        assert_eq!(rep.k_cycles, 41);
        assert_eq!(rep.cycles_below_k, 0);
    }

    #[test]
    fn extended_structure() {
        for k in [10, 12] {
            let r = build_reduction(&example_instance(), k, ReductionShape::Circular).unwrap();
            let rep = verify_structure(&r).unwrap();
            assert!(rep.ok(), "k={k}: {:?}", rep.violations);
            assert_eq!(rep.k_cycles, 41);
        }
    }

    #[test]
    fn flowers_obey_parity() {
        for p in 3..=7 {
            let rep = verify_flower(p).unwrap();
            assert!(rep.ok());
            assert_eq!(rep.even_checked + rep.odd_checked, 1 << p);
        }
        assert!(verify_flower(2).is_err());
    }

    #[test]
    fn micro_gadget_cycles() {
        for k in [8, 10, 12] {
            for kind in GadgetKind::ALL {
                let m = micro_gadget(kind, k).unwrap();
                let set = enumerate_candidates(&m.graph, k).unwrap();
                let cycles: Vec<_> = set
                    .candidates
                    .iter()
                    .filter(|c| c.kind == CandidateKind::Cycle)
                    .collect();
                if kind == GadgetKind::Occurrence {
                    assert!(cycles.is_empty(), "{kind:?}");
                    continue;
                }
                assert_eq!(cycles.len(), m.patterns.len(), "{kind:?} k={k}");
                for c in &cycles {
                    assert_eq!(c.length, k as usize);
                    assert!(m.patterns.contains(&sorted(&c.required)));
                }
                for (i, a) in cycles.iter().enumerate() {
                    for b in &cycles[i + 1..] {
                        assert!(conflict(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn at_most_one_theta_per_gadget() {
        // core squares resolved exhaustively, everything else solid
        for kind in GadgetKind::ALL {
            let m = micro_gadget(kind, 8).unwrap();
            for pattern in 0..1u64 << m.core.len() {
                let mut tau = Resolution::solid(m.graph.a_star());
                for (i, &s) in m.core.iter().enumerate() {
                    tau.0[s as usize] = pattern >> i & 1 == 1;
                }
                let census = resolve(&m.graph, &tau).unwrap();
                assert!(census.cycle_count(8) <= 1, "{kind:?} {pattern:b}");
            }
        }
    }
}

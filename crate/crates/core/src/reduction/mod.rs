//! The (2,3)-SAT to σ_k-disambiguation reduction: gadget graphs `G_k(X, Y)`,
//! the padded linear variant, genome extraction and the maps between truth
//! assignments and resolutions.

mod extract;
mod gadgets;
mod sat;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::abg::{AbgError, AmbiguousBreakpointGraph, Resolution};
use crate::genome::GenomeError;
use crate::half::HalfInt;

pub use extract::{extract_genomes, Extraction};
pub use sat::{
    all_satisfying, example_instance, literal_true, normalize, parse_cnf, random_instance,
    sat_brute, InstanceStats, Literal, Normalized, SatInstance, VarOrigin, SAT_BRUTE_MAX_VARIABLES,
};
pub use verify::{
    micro_gadget, verify_flower, verify_structure, FlowerReport, GadgetKind, MicroGadget,
    StructureReport,
};

use gadgets::Builder;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("CNF line {line}: {message}")]
    Cnf { line: usize, message: String },
    #[error("instance outside (2,3)-SAT fragment: {0}")]
    OutsideFragment(String),
    #[error("instance is not in (2,3)-SAT normal form")]
    NotNormalized,
    #[error("k must be even and at least 8, got {0}")]
    InvalidK(u32),
    #[error("size budget exceeded: {0}")]
    SizeBudget(String),
    #[error("invalid assignment: {0}")]
    Assignment(String),
    #[error("cannot extract genomes: {0}")]
    Extraction(String),
    #[error(transparent)]
    Abg(#[from] AbgError),
    #[error(transparent)]
    Genome(#[from] GenomeError),
}

/// Whether the extracted genomes are circular or linear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionShape {
    Circular,
    Linear,
}

impl fmt::Display for ReductionShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionShape::Circular => "circular",
            ReductionShape::Linear => "linear",
        })
    }
}

impl FromStr for ReductionShape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "circular" => Ok(ReductionShape::Circular),
            "linear" => Ok(ReductionShape::Linear),
            _ => Err(format!("unknown shape `{s}` (expected circular or linear)")),
        }
    }
}

/// Square choices `(square, complementary?)`, sorted by square.
pub type Pattern = Vec<(u32, bool)>;

/// Two black vertices left open for a merge, and the resolution bits of
/// the 3-path joining them inside the gadget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Port {
    pub ends: (u32, u32),
    pub path: Pattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flower {
    pub squares: Vec<u32>,
    pub p: usize,
    /// Black vertices the open ends attach to.
    pub anchors: (u32, u32),
}

/// The chain of squares replacing one extended edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub squares: Vec<u32>,
    pub flowers: Vec<usize>,
    pub ends: (u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VariableGadget {
    /// 0-based variable of the normalized instance.
    pub variable: usize,
    pub squares: [u32; 6],
    pub theta_t: Pattern,
    pub theta_f: Pattern,
    /// One port per positive occurrence.
    pub t_ports: Vec<Port>,
    pub f_port: Port,
    pub flowers: Vec<usize>,
    pub extension: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseGadget {
    pub clause: usize,
    pub squares: [u32; 6],
    /// `Θ_i` is the cycle induced when literal `i` is the witness.
    pub thetas: Vec<Pattern>,
    /// Port `i` connects to the W gadget of literal `i`.
    pub ports: Vec<Port>,
    pub occurrences: Vec<usize>,
    pub flowers: Vec<usize>,
    pub extensions: Vec<usize>,
}

/// W gadget of one literal occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OccurrenceGadget {
    pub clause: usize,
    pub position: usize,
    pub literal: Literal,
    pub squares: [u32; 2],
    /// Routing toward the variable gadget.
    pub x_port: Port,
    /// Routing toward the clause gadget.
    pub y_port: Port,
    /// Complete cycle through the variable port (x-side routing).
    pub x_cycle: Pattern,
    /// Complete cycle through the clause port (y-side routing).
    pub y_cycle: Pattern,
    pub flower: usize,
    pub extension: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub graph: AmbiguousBreakpointGraph,
    pub k: u32,
    pub shape: ReductionShape,
    pub instance: SatInstance,
    pub stats: InstanceStats,
    pub p: usize,
    pub ell: usize,
    pub variables: Vec<VariableGadget>,
    pub clauses: Vec<ClauseGadget>,
    pub occurrences: Vec<OccurrenceGadget>,
    pub flowers: Vec<Flower>,
    pub extensions: Vec<Extension>,
    /// Vertex count of the unpadded graph, `ν_k`.
    pub nu: usize,
    pub bound: HalfInt,
}

impl ReductionOutput {
    /// Every k-cycle the construction intends, one per registry entry.
    pub fn registered_cycles(&self) -> Vec<&Pattern> {
        let mut out: Vec<&Pattern> = Vec::new();
        for v in &self.variables {
            out.push(&v.theta_t);
            out.push(&v.theta_f);
        }
        for c in &self.clauses {
            out.extend(c.thetas.iter());
        }
        for o in &self.occurrences {
            out.push(&o.x_cycle);
            out.push(&o.y_cycle);
        }
        out
    }

    pub fn m(&self) -> usize {
        self.stats.variables
            + self.stats.occurrences
            + self.stats.clauses
            + self.stats.three_clauses
    }
}

/// Expected sizes of `G_k(X, Y)` derived from instance statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpectedCounts {
    pub vertices: usize,
    pub squares: usize,
    pub flowers: usize,
    pub extensions: usize,
    pub k_cycles: usize,
}

pub fn expected_counts(stats: &InstanceStats, k: u32) -> ExpectedCounts {
    let p = k as usize / 2 + 1;
    let ell = (k as usize).saturating_sub(8) / 2;
    let m = stats.variables + stats.occurrences + stats.clauses + stats.three_clauses;
    let extensions = if ell > 0 { m } else { 0 };
    let gadget_squares = 6 * stats.variables + 2 * stats.occurrences + 6 * stats.clauses;
    let flowers = 2 * stats.variables
        + stats.tf_variables
        + stats.occurrences
        + 3 * stats.two_clauses
        + m * ell;
    let squares = gadget_squares + m * ell + p * flowers;
    ExpectedCounts {
        vertices: 4 * squares,
        squares,
        flowers,
        extensions,
        k_cycles: 2 * stats.variables
            + 2 * stats.two_clauses
            + 3 * stats.three_clauses
            + 2 * stats.occurrences,
    }
}

fn check_k(k: u32) -> Result<(), ReductionError> {
    if k < 8 || k % 2 == 1 {
        return Err(ReductionError::InvalidK(k));
    }
    Ok(())
}

/// `|X| + |Y| + ‖Y‖`, plus `ν/2` for the linear shape.
pub fn score_bound(
    inst: &SatInstance,
    shape: ReductionShape,
    k: u32,
) -> Result<HalfInt, ReductionError> {
    check_k(k)?;
    if !inst.is_normalized() {
        return Err(ReductionError::NotNormalized);
    }
    let s = inst.stats();
    let base = HalfInt::from_int((s.variables + s.clauses + s.occurrences) as i64);
    Ok(match shape {
        ReductionShape::Circular => base,
        ReductionShape::Linear => {
            base + HalfInt::from_halves(expected_counts(&s, k).vertices as i64)
        }
    })
}

/// Largest graph [`build_reduction`] will assemble, in vertices.
pub const MAX_REDUCTION_VERTICES: usize = 1 << 26;

pub fn build_reduction(
    inst: &SatInstance,
    k: u32,
    shape: ReductionShape,
) -> Result<ReductionOutput, ReductionError> {
    check_k(k)?;
    if !inst.is_normalized() {
        return Err(ReductionError::NotNormalized);
    }
    let stats = inst.stats();
    let expected = expected_counts(&stats, k);
    if expected.vertices > MAX_REDUCTION_VERTICES {
        return Err(ReductionError::SizeBudget(format!(
            "{} vertices",
            expected.vertices
        )));
    }
    let occ = inst.occurrences();
    let mut b = Builder::new(k);
    let mut variables = Vec::with_capacity(stats.variables);
    for (v, &(pos, neg)) in occ.iter().enumerate() {
        let parts = b.variable(pos + neg == 2);
        variables.push(VariableGadget {
            variable: v,
            squares: std::array::from_fn(|i| parts.block.id(i + 1)),
            theta_t: parts.theta_t,
            theta_f: parts.theta_f,
            t_ports: parts.t_ports,
            f_port: parts.f_port,
            flowers: parts.flowers,
            extension: parts.extension,
        });
    }
    let mut clauses = Vec::with_capacity(stats.clauses);
    let mut occurrences: Vec<OccurrenceGadget> = Vec::with_capacity(stats.occurrences);
    let mut positive_seen = vec![0usize; stats.variables];
    for (ci, clause) in inst.clauses.iter().enumerate() {
        let parts = b.clause(clause.len());
        let mut members = Vec::with_capacity(clause.len());
        for (j, &lit) in clause.iter().enumerate() {
            let w = b.occurrence();
            let var = &variables[lit.unsigned_abs() as usize - 1];
            let target = if lit > 0 {
                let t = &var.t_ports[positive_seen[var.variable]];
                positive_seen[var.variable] += 1;
                t
            } else {
                &var.f_port
            };
            b.merge(&w.x_port, target);
            b.merge(&w.y_port, &parts.ports[j]);
            let join = |a: &Pattern, c: &Pattern| {
                let mut p: Pattern = a.iter().chain(c).copied().collect();
                p.sort_unstable();
                p
            };
            members.push(occurrences.len());
            occurrences.push(OccurrenceGadget {
                clause: ci,
                position: j,
                literal: lit,
                squares: [w.block.id(1), w.block.id(2)],
                x_cycle: join(&w.x_port.path, &target.path),
                y_cycle: join(&w.y_port.path, &parts.ports[j].path),
                x_port: w.x_port,
                y_port: w.y_port,
                flower: w.flower,
                extension: w.extension,
            });
        }
        clauses.push(ClauseGadget {
            clause: ci,
            squares: std::array::from_fn(|i| parts.block.id(i + 1)),
            thetas: parts.thetas,
            ports: parts.ports,
            occurrences: members,
            flowers: parts.flowers,
            extensions: parts.extensions,
        });
    }
    let nu = b.vertex_count as usize;
    let isolated = match shape {
        ReductionShape::Circular => 0,
        ReductionShape::Linear => nu,
    };
    let graph = AmbiguousBreakpointGraph::new(nu, b.squares, b.edges, isolated)?;
    Ok(ReductionOutput {
        graph,
        k,
        shape,
        bound: score_bound(inst, shape, k)?,
        instance: inst.clone(),
        stats,
        p: b.p,
        ell: b.ell,
        variables,
        clauses,
        occurrences,
        flowers: b.flowers,
        extensions: b.extensions,
        nu,
    })
}

/// Truth values of the normalized variables, with an optional witness
/// (literal position) per clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub values: Vec<bool>,
    pub witnesses: Vec<Option<usize>>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment {
            values,
            witnesses: Vec::new(),
        }
    }

    pub fn with_witness(mut self, clause: usize, position: usize) -> Self {
        if self.witnesses.len() <= clause {
            self.witnesses.resize(clause + 1, None);
        }
        self.witnesses[clause] = Some(position);
        self
    }

    pub fn witness(&self, clause: usize) -> Option<usize> {
        self.witnesses.get(clause).copied().flatten()
    }
}

fn apply(tau: &mut Resolution, p: &Pattern) {
    for &(s, bit) in p {
        tau.0[s as usize] = bit;
    }
}

fn matches(tau: &Resolution, p: &Pattern) -> bool {
    p.iter().all(|&(s, bit)| tau.0[s as usize] == bit)
}

/// The resolution inducing `Θ_T` or `Θ_F` in every variable gadget, the
/// witness `Θ_i` in every clause gadget, and routing each W gadget toward
/// its variable (witness) or its clause (otherwise). Clauses without a
/// satisfied literal take `Θ_1`. All other squares stay solid.
pub fn assignment_to_solution(
    r: &ReductionOutput,
    a: &Assignment,
) -> Result<Resolution, ReductionError> {
    let inst = &r.instance;
    if a.values.len() != inst.variable_count {
        return Err(ReductionError::Assignment(format!(
            "{} values given for {} variables",
            a.values.len(),
            inst.variable_count
        )));
    }
    let mut tau = Resolution::solid(r.graph.a_star());
    for v in &r.variables {
        if a.values[v.variable] {
            apply(&mut tau, &v.theta_t);
            for t in &v.t_ports {
                apply(&mut tau, &t.path);
            }
        } else {
            apply(&mut tau, &v.theta_f);
            apply(&mut tau, &v.f_port.path);
        }
    }
    for c in &r.clauses {
        let lits = &inst.clauses[c.clause];
        let w = match a.witness(c.clause) {
            Some(w) if w >= lits.len() => {
                return Err(ReductionError::Assignment(format!(
                    "clause {} has no literal at position {w}",
                    c.clause + 1
                )))
            }
            Some(w) if !literal_true(lits[w], &a.values) => {
                return Err(ReductionError::Assignment(format!(
                    "witness {} of clause {} is false",
                    lits[w],
                    c.clause + 1
                )))
            }
            Some(w) => w,
            None => lits
                .iter()
                .position(|&l| literal_true(l, &a.values))
                .unwrap_or(0),
        };
        apply(&mut tau, &c.thetas[w]);
        for (j, port) in c.ports.iter().enumerate() {
            if j != w {
                apply(&mut tau, &port.path);
            }
        }
        for (j, &o) in c.occurrences.iter().enumerate() {
            let occ = &r.occurrences[o];
            apply(
                &mut tau,
                if j == w {
                    &occ.x_port.path
                } else {
                    &occ.y_port.path
                },
            );
        }
    }
    Ok(tau)
}

/// Read the assignment encoded by `tau`, or `None` when some gadget does not
/// carry its intended cycles: each variable gadget exactly one of `Θ_T`,
/// `Θ_F`, each clause gadget a `Θ_i` whose literal is true, each W gadget
/// one of its two cycles, the x-side one for the witness.
pub fn solution_to_assignment(r: &ReductionOutput, tau: &Resolution) -> Option<Assignment> {
    if tau.len() != r.graph.a_star() {
        return None;
    }
    let mut values = Vec::with_capacity(r.variables.len());
    for v in &r.variables {
        let t = matches(tau, &v.theta_t);
        let f = matches(tau, &v.theta_f);
        match (t, f) {
            (true, false) => values.push(true),
            (false, true) => values.push(false),
            _ => return None,
        }
    }
    let mut witnesses = Vec::with_capacity(r.clauses.len());
    for c in &r.clauses {
        let lits = &r.instance.clauses[c.clause];
        let w = (0..lits.len()).find(|&i| matches(tau, &c.thetas[i]))?;
        if !literal_true(lits[w], &values) {
            return None;
        }
        for (j, &o) in c.occurrences.iter().enumerate() {
            let occ = &r.occurrences[o];
            let ok = matches(tau, &occ.x_cycle) || (j != w && matches(tau, &occ.y_cycle));
            if !ok {
                return None;
            }
        }
        witnesses.push(Some(w));
    }
    Some(Assignment { values, witnesses })
}

/// A JSON-friendly summary of a reduction.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionSummary {
    pub k: u32,
    pub shape: ReductionShape,
    pub variables: usize,
    pub tf_variables: usize,
    pub clauses: usize,
    pub two_clauses: usize,
    pub three_clauses: usize,
    pub occurrences: usize,
    pub nu: usize,
    pub vertices: usize,
    pub isolated: usize,
    pub a_star: usize,
    pub d_edges: usize,
    pub bound: HalfInt,
    pub m: usize,
    pub ell: usize,
    pub p: usize,
    pub flowers: usize,
    pub extensions: usize,
    pub registered_k_cycles: usize,
}

impl ReductionOutput {
    pub fn summary(&self) -> ReductionSummary {
        let s = &self.stats;
        ReductionSummary {
            k: self.k,
            shape: self.shape,
            variables: s.variables,
            tf_variables: s.tf_variables,
            clauses: s.clauses,
            two_clauses: s.two_clauses,
            three_clauses: s.three_clauses,
            occurrences: s.occurrences,
            nu: self.nu,
            vertices: self.graph.total_vertex_count(),
            isolated: self.graph.isolated_count(),
            a_star: self.graph.a_star(),
            d_edges: self.graph.d_edges().len(),
            bound: self.bound,
            m: self.m(),
            ell: self.ell,
            p: self.p,
            flowers: self.flowers.len(),
            extensions: self.extensions.len(),
            registered_k_cycles: self.registered_cycles().len(),
        }
    }
}

//! Exact σ_k disambiguation and double distance.
//!
//! `dd_k(S, D) = 2n* − ss_k` where `ss_k` is the best k-score over all
//! resolutions of `ABG(S, Ď)`. Two engines compute `ss_k`: exhaustive
//! enumeration of resolutions and a branch-and-bound maximum-weight
//! independent set over short candidate components.

mod mis;
mod naive;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::abg::{build_abg, score, AbgError, AmbiguousBreakpointGraph, Resolution};
use crate::bp_graph::{distance, BpError, SigmaIndex};
use crate::genome::{
    classify_pair, double, enumerate_resolved_doublings, singularize, Genome, GenomeError,
    PairClass, Side,
};
use crate::half::HalfInt;

pub use mis::ss_mis;
pub use naive::{ss_naive, NAIVE_MAX_SQUARES};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("genomes do not form a [1·2]-cognate pair with the singular genome first")]
    NotCognate,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Abg(#[from] AbgError),
    #[error(transparent)]
    Genome(#[from] GenomeError),
    #[error(transparent)]
    Sigma(#[from] BpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Naive,
    Mis,
    Greedy2,
    Oracle,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Naive => "naive",
            Engine::Mis => "mis",
            Engine::Greedy2 => "greedy2",
            Engine::Oracle => "oracle",
        })
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Engine::Naive),
            "mis" => Ok(Engine::Mis),
            "greedy2" => Ok(Engine::Greedy2),
            "oracle" => Ok(Engine::Oracle),
            other => Err(format!("unknown engine `{other}`")),
        }
    }
}

/// Search limits. Exhaustive enumeration refuses work above `max_nodes`;
/// branch and bound stops there and reports a non-optimal result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
    pub threads: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 1 << 26,
            max_time: None,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub nodes: u64,
    pub candidates: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// `ss_k`.
    pub score: HalfInt,
    /// `dd_k = 2n* − ss_k`.
    pub dd: HalfInt,
    pub tau: Resolution,
    pub optimal: bool,
    pub engine: Engine,
    pub stats: Stats,
}

impl SolveResult {
    pub(crate) fn new(
        abg: &AmbiguousBreakpointGraph,
        score: HalfInt,
        tau: Resolution,
        optimal: bool,
        engine: Engine,
        stats: Stats,
    ) -> Self {
        SolveResult {
            score,
            dd: HalfInt::from_int(abg.n_star_doubled() as i64) - score,
            tau,
            optimal,
            engine,
            stats,
        }
    }
}

fn check_cognate(s: &Genome, d: &Genome) -> Result<(), SolveError> {
    match classify_pair(s, d) {
        PairClass::OneTwoCognate {
            singular: Side::First,
        } if !d.has_copy_indices() => Ok(()),
        _ => Err(SolveError::NotCognate),
    }
}

/// Per square, the matching that shares more edges with `Ď` (solid on ties).
fn greedy_resolution(abg: &AmbiguousBreakpointGraph) -> Resolution {
    let shared = |sq: &crate::abg::Square, bit: bool| {
        sq.matching(bit)
            .iter()
            .filter(|&&(a, b)| abg.d_partner(a) == Some(b))
            .count()
    };
    Resolution(
        abg.squares()
            .iter()
            .map(|sq| shared(sq, true) > shared(sq, false))
            .collect(),
    )
}

/// `dd_k(S, D)` with `Ď = singularize(D)`, computed by the chosen engine.
pub fn dd(
    s: &Genome,
    d: &Genome,
    k: SigmaIndex,
    engine: Engine,
    budget: &Budget,
) -> Result<SolveResult, SolveError> {
    check_cognate(s, d)?;
    let k = k.validate()?;
    let d_check = singularize(d)?;
    let abg = build_abg(s, &d_check)?;
    match engine {
        Engine::Naive => ss_naive(&abg, k, budget),
        Engine::Mis => match k {
            SigmaIndex::Finite(k) => ss_mis(&abg, k, budget),
            SigmaIndex::Infinity => Err(SolveError::Unsupported(
                "the mis engine needs a finite k".into(),
            )),
        },
        Engine::Greedy2 => {
            if k != SigmaIndex::Finite(2) {
                return Err(SolveError::Unsupported(
                    "greedy2 only computes k = 2".into(),
                ));
            }
            let start = std::time::Instant::now();
            let tau = greedy_resolution(&abg);
            let value = score(&abg, &tau, k)?;
            let stats = Stats {
                nodes: 1,
                candidates: 0,
                elapsed: start.elapsed(),
            };
            Ok(SolveResult::new(
                &abg,
                value,
                tau,
                true,
                Engine::Greedy2,
                stats,
            ))
        }
        Engine::Oracle => {
            let start = std::time::Instant::now();
            let (_, pattern, count) = oracle_search(s, &d_check, k)?;
            let tau = Resolution::from_pattern(pattern, abg.a_star());
            let value = score(&abg, &tau, k)?;
            let stats = Stats {
                nodes: count,
                candidates: 0,
                elapsed: start.elapsed(),
            };
            Ok(SolveResult::new(
                &abg,
                value,
                tau,
                true,
                Engine::Oracle,
                stats,
            ))
        }
    }
}

/// Minimum of `d_k(B, Ď)` over every `B` in `S^a_b(2S)`, with the choice
/// pattern of the first minimizer and the number of genomes compared.
fn oracle_search(
    s: &Genome,
    d_check: &Genome,
    k: SigmaIndex,
) -> Result<(HalfInt, u64, u64), SolveError> {
    let all = enumerate_resolved_doublings(s)?;
    let mut best: Option<(HalfInt, u64)> = None;
    for (pattern, b) in all.iter().enumerate() {
        let value = distance(b, d_check, k)?;
        if best.is_none_or(|(v, _)| value < v) {
            best = Some((value, pattern as u64));
        }
    }
    let (value, pattern) = best.expect("at least one resolved doubling");
    Ok((value, pattern, all.len() as u64))
}

/// `dd_k` straight from its definition, with breakpoint graphs of indexed
/// genome pairs and no ambiguous graph involved.
pub fn dd_definition_oracle(s: &Genome, d: &Genome, k: SigmaIndex) -> Result<HalfInt, SolveError> {
    check_cognate(s, d)?;
    let d_check = singularize(d)?;
    Ok(oracle_search(s, &d_check, k.validate()?)?.0)
}

fn multiset_intersection<T: Ord + Copy>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// `dd_2 = 2n* − |A(2S) ∩ A(D)| − |T(2S) ∩ T(D)| / 2`.
pub fn dd_greedy_2(s: &Genome, d: &Genome) -> Result<HalfInt, SolveError> {
    check_cognate(s, d)?;
    let doubled = double(s)?;
    let shared_adj = multiset_intersection(&doubled.adjacencies, &d.adjacencies());
    let shared_tel = multiset_intersection(&doubled.telomeres, &d.telomeres());
    Ok(HalfInt::from_int(2 * s.gene_count() as i64)
        - HalfInt::from_int(shared_adj as i64)
        - HalfInt::from_halves(shared_tel as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::{parse_genome, random_cognate_pair};

    fn g(text: &str) -> Genome {
        parse_genome(text).unwrap()
    }

    const KS: [SigmaIndex; 5] = [
        SigmaIndex::Finite(2),
        SigmaIndex::Finite(4),
        SigmaIndex::Finite(6),
        SigmaIndex::Finite(8),
        SigmaIndex::Infinity,
    ];

    #[test]
    fn perfect_doubling_has_distance_zero() {
        let (s, d) = (g("(1 2)"), g("(1 2)(1 2)"));
        for k in KS {
            assert_eq!(
                dd(&s, &d, k, Engine::Naive, &Budget::default()).unwrap().dd,
                HalfInt::ZERO
            );
            assert_eq!(dd_definition_oracle(&s, &d, k).unwrap(), HalfInt::ZERO);
        }
        assert_eq!(dd_greedy_2(&s, &d).unwrap(), HalfInt::ZERO);
        assert_eq!(
            dd_definition_oracle(&g("(1)"), &g("(1)(1)"), SigmaIndex::Infinity).unwrap(),
            HalfInt::ZERO
        );
    }

    #[test]
    fn small_pair_values() {
        // A(2S) = 2x{1h2t, 2h3t}, A(D) = {1h2t, 2h3h, 3t1t, 3t2t}: one shared
        // adjacency; T(2S) = 2x{1t, 3h}, T(D) = {1t, 1h, 3h, 2h}: two shared
        let (s, d) = (g("[1 2 3]"), g("[1 2 -3 1][-3 2]"));
        assert_eq!(dd_greedy_2(&s, &d).unwrap(), HalfInt::from_int(4));
        let r = dd(
            &s,
            &d,
            SigmaIndex::Finite(2),
            Engine::Naive,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(
            (r.score, r.dd),
            (HalfInt::from_int(2), HalfInt::from_int(4))
        );
        let r8 = dd(
            &s,
            &d,
            SigmaIndex::Finite(8),
            Engine::Naive,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(r8.score, HalfInt::from_int(3));
        assert_eq!(r8.dd, HalfInt::from_int(3));
        assert_eq!(r8.stats.nodes, 4);
        for engine in [Engine::Mis, Engine::Oracle] {
            assert_eq!(
                dd(&s, &d, SigmaIndex::Finite(8), engine, &Budget::default())
                    .unwrap()
                    .dd,
                r8.dd
            );
        }
        assert_eq!(
            dd(
                &s,
                &d,
                SigmaIndex::Finite(2),
                Engine::Greedy2,
                &Budget::default()
            )
            .unwrap()
            .dd,
            HalfInt::from_int(4)
        );
    }

    #[test]
    fn errors() {
        let b = Budget::default();
        assert_eq!(
            dd(
                &g("[1 2]"),
                &g("[1 2]"),
                SigmaIndex::Finite(2),
                Engine::Naive,
                &b
            ),
            Err(SolveError::NotCognate)
        );
        assert!(matches!(
            dd(
                &g("[1 2]"),
                &g("[1 2][1 2]"),
                SigmaIndex::Finite(4),
                Engine::Greedy2,
                &b
            ),
            Err(SolveError::Unsupported(_))
        ));
        assert!(matches!(
            dd(
                &g("[1 2]"),
                &g("[1 2][1 2]"),
                SigmaIndex::Infinity,
                Engine::Mis,
                &b
            ),
            Err(SolveError::Unsupported(_))
        ));
        assert!(matches!(
            dd(
                &g("[1 2]"),
                &g("[1 2][1 2]"),
                SigmaIndex::Finite(5),
                Engine::Naive,
                &b
            ),
            Err(SolveError::Sigma(_))
        ));
    }

    #[test]
    fn engines_agree_with_oracle() {
        let budget = Budget::default();
        for seed in 0..40u64 {
            let n = 1 + (seed % 5) as usize;
            let (s, d) = random_cognate_pair(n, true, (seed % 4) as usize, seed).unwrap();
            let mut prev: Option<HalfInt> = None;
            for k in KS {
                let oracle = dd_definition_oracle(&s, &d, k).unwrap();
                let naive = dd(&s, &d, k, Engine::Naive, &budget).unwrap();
                assert_eq!(naive.dd, oracle, "seed {seed} k {k}");
                assert_eq!(
                    score(
                        &build_abg(&s, &singularize(&d).unwrap()).unwrap(),
                        &naive.tau,
                        k
                    )
                    .unwrap(),
                    naive.score
                );
                let via_oracle = dd(&s, &d, k, Engine::Oracle, &budget).unwrap();
                assert_eq!(via_oracle.dd, oracle);
                if let SigmaIndex::Finite(_) = k {
                    let mis = dd(&s, &d, k, Engine::Mis, &budget).unwrap();
                    assert!(mis.optimal);
                    assert_eq!(mis.dd, oracle, "seed {seed} k {k}");
                }
                if let Some(p) = prev {
                    assert!(oracle <= p);
                }
                prev = Some(oracle);
                assert!(oracle >= HalfInt::ZERO && oracle <= HalfInt::from_int(2 * n as i64));
            }
            assert_eq!(
                dd_greedy_2(&s, &d).unwrap(),
                dd_definition_oracle(&s, &d, SigmaIndex::Finite(2)).unwrap()
            );
        }
    }

    #[test]
    fn scrambling_bounds_distance() {
        for seed in 0..10 {
            let (s, d) = random_cognate_pair(3, true, 2, seed).unwrap();
            let r = dd(
                &s,
                &d,
                SigmaIndex::Infinity,
                Engine::Naive,
                &Budget::default(),
            )
            .unwrap();
            assert!(r.dd <= HalfInt::from_int(2));
            let (s, d) = random_cognate_pair(4, true, 3, 5).unwrap();
            let r = dd(
                &s,
                &d,
                SigmaIndex::Infinity,
                Engine::Naive,
                &Budget::default(),
            )
            .unwrap();
            assert!(r.dd <= HalfInt::from_int(3));
        }
    }
}

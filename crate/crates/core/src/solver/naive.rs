use std::time::Instant;

use super::{Budget, Engine, SolveError, SolveResult, Stats};
use crate::abg::{AmbiguousBreakpointGraph, Resolution, Scorer};
use crate::bp_graph::SigmaIndex;
use crate::half::HalfInt;

/// Largest square count the exhaustive engine accepts.
pub const NAIVE_MAX_SQUARES: usize = 25;

/// Best (halves, pattern) over `range`, preferring the lowest pattern on ties.
fn scan(
    abg: &AmbiguousBreakpointGraph,
    k: SigmaIndex,
    range: std::ops::Range<u64>,
    deadline: Option<Instant>,
) -> Option<(i64, u64)> {
    let mut scorer = Scorer::new(abg, k);
    let mut best: Option<(i64, u64)> = None;
    for pattern in range {
        if pattern % 4096 == 0 && deadline.is_some_and(|d| Instant::now() > d) {
            return None;
        }
        let h = scorer.halves(pattern);
        if best.is_none_or(|(b, _)| h > b) {
            best = Some((h, pattern));
        }
    }
    best
}

/// Exact `ss_k` by scoring all `2^a*` resolutions. Ties go to the smallest
/// bit pattern (bit `i` is square `i`), also when split across threads.
pub fn ss_naive(
    abg: &AmbiguousBreakpointGraph,
    k: SigmaIndex,
    budget: &Budget,
) -> Result<SolveResult, SolveError> {
    let k = k.validate()?;
    let start = Instant::now();
    let a = abg.a_star();
    if a > NAIVE_MAX_SQUARES || (1u64 << a) > budget.max_nodes {
        return Err(SolveError::BudgetExceeded(format!(
            "2^{a} resolutions exceed the exhaustive search budget"
        )));
    }
    let total = 1u64 << a;
    let deadline = budget.max_time.map(|t| start + t);
    let threads = budget.threads.clamp(1, 64) as u64;
    let best = if threads == 1 || total < 1 << 12 {
        scan(abg, k, 0..total, deadline)
    } else {
        let chunk = total.div_ceil(threads);
        let results: Vec<Option<(i64, u64)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let lo = (t * chunk).min(total);
                    let hi = ((t + 1) * chunk).min(total);
                    scope.spawn(move || scan(abg, k, lo..hi, deadline))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        });
        // chunks are never empty here, so a missing result means a timeout
        results
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .and_then(|r| r.into_iter().min_by_key(|&(h, p)| (-h, p)))
    };
    let (halves, pattern) = best.ok_or_else(|| {
        SolveError::BudgetExceeded("time limit reached during exhaustive search".into())
    })?;
    let stats = Stats {
        nodes: total,
        candidates: 0,
        elapsed: start.elapsed(),
    };
    Ok(SolveResult::new(
        abg,
        HalfInt::from_halves(halves),
        Resolution::from_pattern(pattern, a),
        true,
        Engine::Naive,
        stats,
    ))
}

//! Exact minimum feedback arc set solver.
//!
//! Subset dynamic program over vertex sets: `dp[S]` is the minimum backward
//! arc count of any ordering of `S`, taking the minimum over the vertex
//! placed last. Intended for desk-scale instances and for solving kernels,
//! not as a production solver.

use crate::tournament::{ArcError, OrderedTournament, Tournament};
use thiserror::Error;

/// Default vertex limit for the subset DP (2^n table entries).
pub const DEFAULT_EXACT_LIMIT: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("instance has {n} vertices, exact solver limit is {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Result of an exact solve.
#[derive(Clone, Debug)]
pub struct ExactResult {
    pub fas_size: usize,
    /// An ordering achieving `fas_size` backward arcs.
    pub optimal_ordering: Vec<usize>,
    /// The backward arcs of `optimal_ordering`, sorted by
    /// (head position, tail position); reversing them acyclifies the input.
    pub minimal_fas: Vec<(usize, usize)>,
}

/// Minimum feedback arc set via subset DP, using the default size limit.
pub fn fas_exact(t: &Tournament) -> Result<ExactResult, ExactError> {
    fas_exact_with_limit(t, DEFAULT_EXACT_LIMIT)
}

pub fn fas_exact_with_limit(t: &Tournament, limit: usize) -> Result<ExactResult, ExactError> {
    let n = t.n();
    if n > limit || n >= usize::BITS as usize - 1 {
        return Err(ExactError::TooLarge { n, limit });
    }
    if n == 0 {
        return Ok(ExactResult { fas_size: 0, optimal_ordering: vec![], minimal_fas: vec![] });
    }

    // Out-neighbor masks over the first n bits.
    let masks: Vec<u64> = (0..n)
        .map(|v| {
            let mut m = 0u64;
            for w in t.out_neighbors(v) {
                m |= 1 << w;
            }
            m
        })
        .collect();

    let full: usize = (1 << n) - 1;
    let mut dp = vec![u32::MAX; full + 1];
    dp[0] = 0;
    for set in 1..=full {
        let mut best = u32::MAX;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = set & !(1 << v);
            // v placed last: its out-arcs into the rest become backward.
            let cost = dp[without] + (masks[v] & without as u64).count_ones();
            if cost < best {
                best = cost;
            }
        }
        dp[set] = best;
    }

    // Reconstruct back to front; ties broken by the lowest vertex index
    // placed last.
    let mut ordering = vec![0usize; n];
    let mut set = full;
    for slot in (0..n).rev() {
        let mut chosen = usize::MAX;
        let mut chosen_cost = u32::MAX;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = set & !(1 << v);
            let cost = dp[without] + (masks[v] & without as u64).count_ones();
            if cost == dp[set] && v < chosen {
                chosen = v;
                chosen_cost = cost;
            }
        }
        debug_assert_eq!(chosen_cost, dp[set]);
        ordering[slot] = chosen;
        set &= !(1 << chosen);
    }

    let ot = OrderedTournament::new(t.clone(), ordering.clone()).expect("valid ordering");
    let minimal_fas = ot.backward_arcs();
    debug_assert_eq!(minimal_fas.len(), dp[full] as usize);
    Ok(ExactResult { fas_size: dp[full] as usize, optimal_ordering: ordering, minimal_fas })
}

/// True iff reversing the given arcs (all present in `t`) yields an acyclic
/// tournament. Duplicate arcs are treated as a set.
pub fn verify_reversal_acyclic(t: &Tournament, arcs: &[(usize, usize)]) -> Result<bool, ArcError> {
    let mut seen = std::collections::HashSet::new();
    let mut work = t.clone();
    for &(u, v) in arcs {
        if !t.has_arc(u, v) {
            return Err(ArcError::Missing(u, v));
        }
        if seen.insert((u, v)) {
            work.reverse_arc(u, v).expect("validated against original");
        }
    }
    Ok(work.is_acyclic())
}

/// Decision wrapper: `fas(t) <= k`.
pub fn fas_at_most(t: &Tournament, k: usize) -> Result<bool, ExactError> {
    Ok(fas_exact(t)?.fas_size <= k)
}

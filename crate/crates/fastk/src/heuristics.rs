//! Heuristic orderings producing small feedback arc sets.
//!
//! The kernelization driver only needs *some* ordering with few backward
//! arcs. Three routes are provided: a plain in-degree sort, a randomized
//! pivot partition (recursively split the vertices into in-neighbors and
//! out-neighbors of a random pivot) with restarts and single-vertex local
//! search, and the exact solver for instances small enough to afford it.

use crate::exact::{fas_exact_with_limit, ExactError, DEFAULT_EXACT_LIMIT};
use crate::tournament::{OrderedTournament, Tournament};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tag identifying how an ordering was produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderingMethod {
    Indegree,
    Kwiksort { seed: u64 },
    ExactOracle,
}

/// An ordering together with its backward arc count.
#[derive(Clone, Debug)]
pub struct HeuristicOrdering {
    pub ordering: Vec<usize>,
    pub backward_count: usize,
    pub method: OrderingMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeuristicKind {
    Indegree,
    Kwiksort,
    Exact,
}

/// Configuration for [`best_feedback_ordering`].
#[derive(Clone, Debug)]
pub struct HeuristicConfig {
    pub kind: HeuristicKind,
    /// Number of pivot-partition restarts; per-run seeds are derived from
    /// `seed` by counter.
    pub restarts: u32,
    pub seed: u64,
    /// Vertex limit when `kind` is `Exact`.
    pub exact_limit: usize,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            kind: HeuristicKind::Kwiksort,
            restarts: 32,
            seed: 0,
            exact_limit: DEFAULT_EXACT_LIMIT,
        }
    }
}

fn count_backward(t: &Tournament, ordering: &[usize]) -> usize {
    let n = ordering.len();
    let mut count = 0;
    for j in 0..n {
        for i in j + 1..n {
            if t.has_arc(ordering[i], ordering[j]) {
                count += 1;
            }
        }
    }
    count
}

/// Vertices sorted by ascending in-degree, ties by index.
pub fn order_by_indegree(t: &Tournament) -> HeuristicOrdering {
    let mut ordering: Vec<usize> = (0..t.n()).collect();
    ordering.sort_by_key(|&v| (t.in_degree(v), v));
    let backward_count = count_backward(t, &ordering);
    HeuristicOrdering { ordering, backward_count, method: OrderingMethod::Indegree }
}

/// Randomized pivot partition, deterministic for a given seed.
pub fn kwiksort(t: &Tournament, seed: u64) -> HeuristicOrdering {
    fn rec(t: &Tournament, vertices: Vec<usize>, rng: &mut ChaCha8Rng, out: &mut Vec<usize>) {
        match vertices.len() {
            0 => {}
            1 => out.push(vertices[0]),
            len => {
                let pivot = vertices[rng.random_range(0..len)];
                let mut before = Vec::new();
                let mut after = Vec::new();
                for v in vertices {
                    if v == pivot {
                        continue;
                    }
                    if t.has_arc(v, pivot) {
                        before.push(v);
                    } else {
                        after.push(v);
                    }
                }
                rec(t, before, rng, out);
                out.push(pivot);
                rec(t, after, rng, out);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ordering = Vec::with_capacity(t.n());
    rec(t, (0..t.n()).collect(), &mut rng, &mut ordering);
    let backward_count = count_backward(t, &ordering);
    HeuristicOrdering { ordering, backward_count, method: OrderingMethod::Kwiksort { seed } }
}

/// Repeatedly relocates single vertices to the position minimizing the
/// backward arc count until no move improves. The result is optimal with
/// respect to single-vertex moves and never worse than the input.
pub fn local_search_improve(ho: &HeuristicOrdering, t: &Tournament) -> HeuristicOrdering {
    let n = ho.ordering.len();
    let mut ordering = ho.ordering.clone();
    let mut backward_count = ho.backward_count;
    if n < 2 {
        return ho.clone();
    }

    loop {
        let mut improved = false;
        for idx in 0..n {
            let v = ordering[idx];
            // Cumulative cost delta of moving v right past each position,
            // then left past each position; keep the best strict improvement.
            let mut best_delta: i64 = 0;
            let mut best_target = idx;
            let mut delta: i64 = 0;
            for j in idx + 1..n {
                delta += if t.has_arc(v, ordering[j]) { 1 } else { -1 };
                if delta < best_delta {
                    best_delta = delta;
                    best_target = j;
                }
            }
            delta = 0;
            for j in (0..idx).rev() {
                delta += if t.has_arc(ordering[j], v) { 1 } else { -1 };
                if delta < best_delta || (delta == best_delta && best_delta < 0 && j < best_target) {
                    best_delta = delta;
                    best_target = j;
                }
            }
            if best_delta < 0 {
                ordering.remove(idx);
                ordering.insert(best_target, v);
                backward_count = (backward_count as i64 + best_delta) as usize;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    debug_assert_eq!(backward_count, count_backward(t, &ordering));
    HeuristicOrdering { ordering, backward_count, method: ho.method.clone() }
}

/// Computes an ordering according to the configuration. Pivot-partition runs
/// are merged by minimum backward count, ties going to the earliest seed, and
/// the winner is polished by local search.
pub fn best_feedback_ordering(t: &Tournament, cfg: &HeuristicConfig) -> Result<HeuristicOrdering, ExactError> {
    match cfg.kind {
        HeuristicKind::Indegree => Ok(order_by_indegree(t)),
        HeuristicKind::Exact => {
            let res = fas_exact_with_limit(t, cfg.exact_limit)?;
            Ok(HeuristicOrdering {
                backward_count: res.fas_size,
                ordering: res.optimal_ordering,
                method: OrderingMethod::ExactOracle,
            })
        }
        HeuristicKind::Kwiksort => {
            let mut best: Option<HeuristicOrdering> = None;
            for run in 0..cfg.restarts.max(1) {
                let run_seed = cfg.seed.wrapping_add(run as u64);
                let candidate = kwiksort(t, run_seed);
                if best.as_ref().is_none_or(|b| candidate.backward_count < b.backward_count) {
                    best = Some(candidate);
                }
            }
            let best = best.expect("at least one run");
            Ok(local_search_improve(&best, t))
        }
    }
}

/// Induced ordered tournament for a heuristic result.
pub fn into_ordered(t: &Tournament, ho: &HeuristicOrdering) -> OrderedTournament {
    OrderedTournament::new(t.clone(), ho.ordering.clone()).expect("heuristic orderings are permutations")
}

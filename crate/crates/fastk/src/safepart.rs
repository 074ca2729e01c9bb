//! Safe interval partitions and the reduction that exploits them.
//!
//! An interval partition of an ordered tournament is *safe* when the
//! backward arcs running between different intervals can be certified using
//! only between-interval arcs. Reversing all those arcs is then an exact
//! reduction: the optimum drops by exactly their total weight, so the
//! parameter can be decreased by the same amount.
//!
//! The search follows the recursive argument behind the guarantee: while
//! some interval is dense (violates the density bound), contract the
//! smallest one and recurse with a reduced budget; once nothing is dense the
//! all-singletons partition works and the whole instance can be certified
//! directly. Certificates and arcs are lifted back through the contractions.
//!
//! The guarantee has a genuine degenerate regime: contraction can swallow
//! every unit of backward weight (for instance when the only backward arcs
//! join adjacent positions), leaving a partition with nothing between the
//! intervals. That outcome is reported as [`SafePartitionError::Degenerate`]
//! so drivers can fall back to other rules instead of looping.

use crate::certify::{
    certify_rec, lift_certificates, validate_family_for, BackwardWeightedTournament,
    CertificateFamily, OmegaCertificate,
};
use crate::tournament::{IntervalPartition, Tournament, VertexId};
use thiserror::Error;

/// A safe partition: the between-interval backward arcs and a certificate
/// family for them that only uses between-interval arcs.
#[derive(Clone, Debug)]
pub struct SafePartition {
    pub partition: IntervalPartition,
    /// Backward arcs with endpoints in different intervals, as
    /// `(tail label, head label)` pairs.
    pub between_backward: Vec<(VertexId, VertexId)>,
    pub family: CertificateFamily,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SafePartitionError {
    #[error("need at least 2p+1 = {needed} vertices, have {n}")]
    TooFewVertices { n: usize, needed: usize },
    #[error("total backward weight {weight} exceeds the budget p = {budget}")]
    WeightExceedsBudget { weight: u64, budget: u64 },
    #[error("instance has no backward arc")]
    NoBackwardArc,
    #[error("every backward arc was swallowed by dense-interval contraction")]
    Degenerate,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Rule3Error {
    #[error("partition does not match the instance size")]
    SizeMismatch,
    #[error("arc {0} -> {1} is not a between-interval backward arc of the ordering")]
    NotBetweenBackward(VertexId, VertexId),
    #[error("certificate family does not validate against the ordering")]
    InvalidFamily,
}

struct SearchResult {
    cuts: Vec<usize>,
    between: Vec<(VertexId, VertexId)>,
    certificates: Vec<OmegaCertificate>,
}

/// Finds a safe partition with at least one between-interval backward arc.
///
/// Preconditions: the ordering has at least `2p + 1` vertices, total backward
/// weight at most `p`, and at least one backward arc.
pub fn find_safe_partition(
    tw: &BackwardWeightedTournament,
    p: u64,
) -> Result<SafePartition, SafePartitionError> {
    let n = tw.n();
    let needed = (2 * p + 1) as usize;
    if n < needed {
        return Err(SafePartitionError::TooFewVertices { n, needed });
    }
    let weight = tw.total_weight();
    if weight > p {
        return Err(SafePartitionError::WeightExceedsBudget { weight, budget: p });
    }
    if weight == 0 {
        return Err(SafePartitionError::NoBackwardArc);
    }

    let result = search(tw, 2 * p);
    if result.between.is_empty() {
        return Err(SafePartitionError::Degenerate);
    }
    let partition = IntervalPartition::new(n, result.cuts).expect("cuts are valid by construction");
    Ok(SafePartition {
        partition,
        between_backward: result.between,
        family: CertificateFamily { certificates: result.certificates },
    })
}

fn search(tw: &BackwardWeightedTournament, doubled_budget: u64) -> SearchResult {
    match tw.first_dense_interval() {
        None => {
            // Everything satisfies the density bound: singleton intervals,
            // every backward arc runs between intervals, and the whole
            // instance is certifiable.
            let between = tw
                .backward_arcs()
                .iter()
                .map(|&(tail, head, _)| (tw.label_at(tail), tw.label_at(head)))
                .collect();
            SearchResult {
                cuts: (1..tw.n()).collect(),
                between,
                certificates: certify_rec(tw),
            }
        }
        Some((interval, weight)) => {
            // A dense interval carries weight at least |I| / 2, so the
            // doubled budget never underflows.
            debug_assert!(2 * weight >= interval.len() as u64);
            debug_assert!(doubled_budget >= interval.len() as u64);
            let child = tw.contract_interval(interval.clone());
            let sub = search(&child, doubled_budget - interval.len() as u64);

            let (s, len) = (interval.start, interval.len());
            let cuts = sub
                .cuts
                .into_iter()
                .map(|c| if c <= s { c } else { c + len - 1 })
                .collect();

            let c_label = child.label_at(s);
            let mut between = Vec::new();
            for (tail, head) in sub.between {
                if tail == c_label {
                    // merged arc out of the contracted vertex: expand to the
                    // original arcs from interval vertices to the head
                    let head_pos = tw.position_of_label(head).expect("head survives contraction");
                    for z in interval.clone() {
                        if tw.weight_between(head_pos, z) > 0 {
                            between.push((tw.label_at(z), head));
                        }
                    }
                } else if head == c_label {
                    let tail_pos = tw.position_of_label(tail).expect("tail survives contraction");
                    for z in interval.clone() {
                        if tw.weight_between(z, tail_pos) > 0 {
                            between.push((tail, tw.label_at(z)));
                        }
                    }
                } else {
                    between.push((tail, head));
                }
            }

            let certificates = lift_certificates(tw, interval, &child, sub.certificates);
            SearchResult { cuts, between, certificates }
        }
    }
}

/// Total weight in `tw` of the partition's between-interval backward arcs.
pub fn between_weight(tw: &BackwardWeightedTournament, sp: &SafePartition) -> u64 {
    sp.between_backward
        .iter()
        .map(|&(tail, head)| {
            let tp = tw.position_of_label(tail).expect("arc tail in instance");
            let hp = tw.position_of_label(head).expect("arc head in instance");
            tw.weight_between(hp, tp) as u64
        })
        .sum()
}

/// Every certificate path must stay on arcs whose endpoints lie in different
/// intervals of the partition.
pub fn family_uses_only_between_arcs(
    tw: &BackwardWeightedTournament,
    sp: &SafePartition,
) -> bool {
    sp.family.certificates.iter().all(|cert| {
        cert.paths.iter().all(|path| {
            path.windows(2).all(|pair| {
                match (tw.position_of_label(pair[0]), tw.position_of_label(pair[1])) {
                    (Some(a), Some(b)) => sp.partition.interval_of(a) != sp.partition.interval_of(b),
                    _ => false,
                }
            })
        })
    })
}

#[derive(Clone, Debug)]
pub struct Rule3Outcome {
    pub tournament: Tournament,
    /// Negative when the reversals exhausted the parameter (no-instance).
    pub k_remaining: i64,
    /// Arcs reversed, as labels with pre-reversal orientation.
    pub reversed: Vec<(VertexId, VertexId)>,
}

/// Reverses every between-interval backward arc of a safe partition and
/// charges the parameter by their total weight. The partition is
/// re-validated against the instance before anything is touched.
pub fn apply_rule3(
    t: &Tournament,
    ordering: &[usize],
    sp: &SafePartition,
    k: u64,
) -> Result<Rule3Outcome, Rule3Error> {
    if sp.partition.n() != t.n() || ordering.len() != t.n() {
        return Err(Rule3Error::SizeMismatch);
    }
    let tw = BackwardWeightedTournament::from_ordering(t, ordering);
    for &(tail, head) in &sp.between_backward {
        let (Some(tp), Some(hp)) = (tw.position_of_label(tail), tw.position_of_label(head)) else {
            return Err(Rule3Error::NotBetweenBackward(tail, head));
        };
        let backward = hp < tp && tw.weight_between(hp, tp) > 0;
        let crosses = sp.partition.interval_of(hp) != sp.partition.interval_of(tp);
        if !backward || !crosses {
            return Err(Rule3Error::NotBetweenBackward(tail, head));
        }
    }
    if !family_uses_only_between_arcs(&tw, sp)
        || !validate_family_for(&tw, &sp.family, &sp.between_backward)
    {
        return Err(Rule3Error::InvalidFamily);
    }

    let weight = between_weight(&tw, sp);
    let mut out = t.clone();
    let mut reversed = Vec::with_capacity(sp.between_backward.len());
    for &(tail, head) in &sp.between_backward {
        let u = out.index_of_label(tail).expect("validated above");
        let v = out.index_of_label(head).expect("validated above");
        out.reverse_arc(u, v).expect("validated backward arc");
        reversed.push((tail, head));
    }
    Ok(Rule3Outcome { tournament: out, k_remaining: k as i64 - weight as i64, reversed })
}

//! Backward-weighted orderings and arc-disjoint certificate families.
//!
//! A backward-weighted tournament is an ordered tournament whose backward
//! arcs carry positive integer weights. A certificate for a backward arc
//! `f = v -> u` of weight `w` is a set of `w` arc-disjoint directed paths
//! from `u` to `v` using only forward arcs inside the span of `f`; a family
//! certifies a set of arcs when all paths across all certificates are
//! pairwise arc-disjoint.
//!
//! Certification succeeds whenever every interval `I` of the ordering
//! satisfies the density bound `2 * w(I) <= |I| - 1`, where `w(I)` is the
//! total weight of backward arcs with both endpoints inside `I`. The
//! construction is recursive:
//!
//! * with no critical interval (one meeting the bound with equality), some
//!   vertex touches no backward arc and can simply be dropped;
//! * when the whole ordering is the only critical interval, the free vertex
//!   routes a two-arc path for a longest backward arc above it, whose weight
//!   is then decremented;
//! * a proper critical interval is contracted to a single vertex, the two
//!   sides are certified independently, and the contracted paths are lifted
//!   back by substituting concrete interval vertices.

use crate::tournament::{OrderedTournament, Tournament, VertexId};
use std::collections::{HashMap, HashSet};
use std::ops::Range;
use thiserror::Error;

/// Ordered tournament with positive weights on its backward arcs.
///
/// Stored position-first: cell `(i, j)` with `i < j` holds `0` when the arc
/// between positions `i` and `j` points forward (`i -> j`) and the backward
/// weight otherwise. Vertices keep stable labels so that contraction and
/// slicing can be undone when certificates are mapped back.
#[derive(Clone, PartialEq, Eq)]
pub struct BackwardWeightedTournament {
    n: usize,
    labels: Vec<VertexId>,
    weights: Vec<u32>,
}

impl std::fmt::Debug for BackwardWeightedTournament {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BackwardWeightedTournament(n={}, labels={:?})", self.n, self.labels)?;
        for (tail, head, w) in self.backward_arcs() {
            writeln!(f, "  pos {tail} -> pos {head} (weight {w})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntervalError {
    #[error("interval [{0}, {1}) is out of range or empty (n = {2})")]
    OutOfRange(usize, usize, usize),
}

/// How an interval relates to the density bound `2w(I) <= |I| - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalClass {
    /// Strictly below the bound, or a singleton.
    Satisfying,
    /// `|I| >= 2` and the bound holds with equality.
    Critical,
    /// The bound fails.
    Dense,
}

/// Certificate for one backward arc: `weight` arc-disjoint forward paths
/// from the arc's head to its tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaCertificate {
    pub tail: VertexId,
    pub head: VertexId,
    /// Each path lists vertex labels from head to tail inclusive.
    pub paths: Vec<Vec<VertexId>>,
}

/// Certificates for every backward arc, arc-disjoint across the family.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertificateFamily {
    pub certificates: Vec<OmegaCertificate>,
}

impl CertificateFamily {
    /// One line per path: `tail head : v_0 v_1 ... v_m`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for cert in &self.certificates {
            for path in &cert.paths {
                out.push_str(&format!("{} {} :", cert.tail, cert.head));
                for v in path {
                    out.push_str(&format!(" {v}"));
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn path_count(&self) -> usize {
        self.certificates.iter().map(|c| c.paths.len()).sum()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("interval [{start}, {end}) carries backward weight {weight}, violating 2*w(I) <= |I| - 1")]
pub struct DensityViolation {
    pub start: usize,
    pub end: usize,
    pub weight: u64,
}

impl BackwardWeightedTournament {
    /// Unit weights on the backward arcs of an ordered tournament.
    pub fn from_ordered(ot: &OrderedTournament) -> Self {
        Self::from_ordering(ot.tournament(), ot.sigma())
    }

    pub fn from_ordering(t: &Tournament, ordering: &[usize]) -> Self {
        let n = t.n();
        assert_eq!(ordering.len(), n, "ordering must cover every vertex");
        let mut weights = vec![0u32; n * n];
        for i in 0..n {
            for j in i + 1..n {
                if t.has_arc(ordering[j], ordering[i]) {
                    weights[i * n + j] = 1;
                }
            }
        }
        let labels = ordering.iter().map(|&v| t.label(v)).collect();
        BackwardWeightedTournament { n, labels, weights }
    }

    /// Builds directly from per-pair backward weights (keyed by position
    /// pairs `i < j`); labels are `0..n-1`.
    pub fn from_backward_weights(n: usize, backward: &[(usize, usize, u32)]) -> Self {
        let mut tw = BackwardWeightedTournament {
            n,
            labels: (0..n as VertexId).collect(),
            weights: vec![0; n * n],
        };
        for &(i, j, w) in backward {
            assert!(i < j && j < n && w > 0, "backward arcs need i < j < n and positive weight");
            tw.weights[i * n + j] = w;
        }
        tw
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn label_at(&self, position: usize) -> VertexId {
        self.labels[position]
    }

    pub fn position_of_label(&self, label: VertexId) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Weight of the backward arc between positions `i < j`, `0` if the arc
    /// points forward.
    #[inline]
    pub fn weight_between(&self, i: usize, j: usize) -> u32 {
        debug_assert!(i < j && j < self.n);
        self.weights[i * self.n + j]
    }

    pub(crate) fn decrement(&mut self, i: usize, j: usize) {
        debug_assert!(self.weights[i * self.n + j] > 0);
        self.weights[i * self.n + j] -= 1;
    }

    /// Backward arcs as `(tail position, head position, weight)`, sorted by
    /// (head position, tail position).
    pub fn backward_arcs(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let w = self.weights[i * self.n + j];
                if w > 0 {
                    out.push((j, i, w));
                }
            }
        }
        out
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().map(|&w| w as u64).sum()
    }

    /// Total weight of backward arcs with both endpoints inside the interval.
    pub fn interval_weight(&self, interval: Range<usize>) -> Result<u64, IntervalError> {
        if interval.start >= interval.end || interval.end > self.n {
            return Err(IntervalError::OutOfRange(interval.start, interval.end, self.n));
        }
        let mut sum = 0u64;
        for i in interval.clone() {
            for j in i + 1..interval.end {
                sum += self.weights[i * self.n + j] as u64;
            }
        }
        Ok(sum)
    }

    pub fn classify_interval(&self, interval: Range<usize>) -> Result<IntervalClass, IntervalError> {
        let len = interval.len() as u64;
        let w = self.interval_weight(interval)?;
        Ok(if len >= 2 && 2 * w == len - 1 {
            IntervalClass::Critical
        } else if 2 * w > len.saturating_sub(1) {
            IntervalClass::Dense
        } else {
            IntervalClass::Satisfying
        })
    }

    /// Replaces the interval by a single fresh vertex at its position. Arcs
    /// into (out of) the interval merge, summing backward weights; forward
    /// arcs that would form two-cycles with surviving backward arcs vanish.
    pub fn contract_interval(&self, interval: Range<usize>) -> BackwardWeightedTournament {
        let (s, e) = (interval.start, interval.end);
        assert!(s < e && e <= self.n, "invalid interval");
        let len = e - s;
        let n2 = self.n - len + 1;
        let fresh = self.labels.iter().copied().max().unwrap_or(0) + 1;
        let parent_pos = |q: usize| if q < s { q } else { q + len - 1 };
        let mut labels = Vec::with_capacity(n2);
        for q in 0..n2 {
            labels.push(if q == s { fresh } else { self.labels[parent_pos(q)] });
        }
        let mut weights = vec![0u32; n2 * n2];
        for a in 0..n2 {
            for b in a + 1..n2 {
                let w = if b == s {
                    interval.clone().map(|z| self.weights[parent_pos(a) * self.n + z] as u64).sum::<u64>()
                } else if a == s {
                    interval.clone().map(|z| self.weights[z * self.n + parent_pos(b)] as u64).sum::<u64>()
                } else {
                    self.weights[parent_pos(a) * self.n + parent_pos(b)] as u64
                };
                weights[a * n2 + b] = u32::try_from(w).expect("merged weight fits u32");
            }
        }
        BackwardWeightedTournament { n: n2, labels, weights }
    }

    /// Induced instance on an interval of positions.
    pub fn slice(&self, interval: Range<usize>) -> BackwardWeightedTournament {
        let m = interval.len();
        let labels = interval.clone().map(|p| self.labels[p]).collect();
        let mut weights = vec![0u32; m * m];
        for (a, i) in interval.clone().enumerate() {
            for (b, j) in interval.clone().enumerate() {
                if a < b {
                    weights[a * m + b] = self.weights[i * self.n + j];
                }
            }
        }
        BackwardWeightedTournament { n: m, labels, weights }
    }

    pub(crate) fn delete_position(&self, pos: usize) -> BackwardWeightedTournament {
        let n2 = self.n - 1;
        let map = |q: usize| if q < pos { q } else { q + 1 };
        let labels = (0..n2).map(|q| self.labels[map(q)]).collect();
        let mut weights = vec![0u32; n2 * n2];
        for a in 0..n2 {
            for b in a + 1..n2 {
                weights[a * n2 + b] = self.weights[map(a) * self.n + map(b)];
            }
        }
        BackwardWeightedTournament { n: n2, labels, weights }
    }

    /// The underlying unweighted tournament, indexed by position.
    pub fn underlying_tournament(&self) -> Tournament {
        let mut arcs = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.weights[i * self.n + j] > 0 {
                    arcs.push((j, i));
                } else {
                    arcs.push((i, j));
                }
            }
        }
        Tournament::from_arcs(self.n, arcs).expect("complete by construction")
    }

    /// Prefix table of interval weights: entry `(i, j)` is the weight of the
    /// interval spanning positions `i..=j`.
    fn interval_table(&self) -> Vec<u64> {
        let n = self.n;
        let mut w = vec![0u64; n * n];
        for len in 2..=n {
            for i in 0..=n - len {
                let j = i + len - 1;
                w[i * n + j] = w[(i + 1) * n + j] + w[i * n + j - 1]
                    - if len > 2 { w[(i + 1) * n + j - 1] } else { 0 }
                    + self.weights[i * n + j] as u64;
            }
        }
        w
    }

    /// First interval violating the density bound, scanning short intervals
    /// first.
    pub(crate) fn first_dense_interval(&self) -> Option<(Range<usize>, u64)> {
        let n = self.n;
        let table = self.interval_table();
        for len in 2..=n {
            for i in 0..=n - len {
                let j = i + len - 1;
                let w = table[i * n + j];
                if 2 * w > (len - 1) as u64 {
                    return Some((i..j + 1, w));
                }
            }
        }
        None
    }

    fn smallest_proper_critical(&self) -> Option<Range<usize>> {
        let n = self.n;
        let table = self.interval_table();
        for len in 2..n {
            for i in 0..=n - len {
                let j = i + len - 1;
                if 2 * table[i * n + j] == (len - 1) as u64 {
                    return Some(i..j + 1);
                }
            }
        }
        None
    }

    fn incident_to_backward(&self, pos: usize) -> bool {
        (0..pos).any(|i| self.weights[i * self.n + pos] > 0)
            || (pos + 1..self.n).any(|j| self.weights[pos * self.n + j] > 0)
    }
}

/// Certifies every backward arc, provided every interval satisfies the
/// density bound; the violating interval is reported otherwise.
pub fn certify_all(tw: &BackwardWeightedTournament) -> Result<CertificateFamily, DensityViolation> {
    if let Some((range, weight)) = tw.first_dense_interval() {
        return Err(DensityViolation { start: range.start, end: range.end, weight });
    }
    Ok(CertificateFamily { certificates: certify_rec(tw) })
}

pub(crate) fn certify_rec(tw: &BackwardWeightedTournament) -> Vec<OmegaCertificate> {
    if tw.total_weight() == 0 {
        return Vec::new();
    }
    debug_assert!(tw.first_dense_interval().is_none(), "density bound lost: {tw:?}");

    if let Some(interval) = tw.smallest_proper_critical() {
        let child = tw.contract_interval(interval.clone());
        assert!(
            child.first_dense_interval().is_none(),
            "contracting a critical interval must preserve the density bound: {tw:?}"
        );
        let outer = certify_rec(&child);
        let inner = certify_rec(&tw.slice(interval.clone()));
        let mut lifted = lift_certificates(tw, interval, &child, outer);
        lifted.extend(inner);
        return lifted;
    }

    let free = (0..tw.n())
        .find(|&p| !tw.incident_to_backward(p))
        .expect("density bound on the full interval leaves a backward-free vertex");

    let n = tw.n();
    let whole_critical = n >= 2 && 2 * tw.total_weight() == (n - 1) as u64;
    if whole_critical {
        // Longest backward arc above the free vertex; ties broken by leftmost
        // head, then leftmost tail.
        let mut best: Option<(usize, usize)> = None;
        for i in 0..free {
            for j in free + 1..n {
                if tw.weight_between(i, j) > 0 {
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => {
                            let (len, blen) = (j - i, bj - bi);
                            len > blen || (len == blen && (i < bi || (i == bi && j < bj)))
                        }
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
        }
        let (head_pos, tail_pos) = best.unwrap_or_else(|| {
            panic!("free vertex at position {free} lies outside every backward span: {tw:?}")
        });
        let path = vec![tw.label_at(head_pos), tw.label_at(free), tw.label_at(tail_pos)];
        let (tail, head) = (tw.label_at(tail_pos), tw.label_at(head_pos));

        let mut reduced = tw.clone();
        reduced.decrement(head_pos, tail_pos);
        let reduced = reduced.delete_position(free);
        let mut certs = certify_rec(&reduced);
        match certs.iter_mut().find(|c| c.tail == tail && c.head == head) {
            Some(cert) => cert.paths.insert(0, path),
            None => certs.push(OmegaCertificate { tail, head, paths: vec![path] }),
        }
        return certs;
    }

    certify_rec(&tw.delete_position(free))
}

/// Maps certificates of a contracted instance back onto the parent.
///
/// A path visiting the contracted vertex in its interior is rewired through
/// the leftmost interval vertex: the incident forward arcs survived the
/// two-cycle cleanup, so the whole interval is forward from the predecessor
/// and forward to the successor. A certificate whose own arc ends at the
/// contracted vertex splits into one certificate per merged original arc,
/// substituting that arc's concrete endpoint.
pub(crate) fn lift_certificates(
    parent: &BackwardWeightedTournament,
    interval: Range<usize>,
    child: &BackwardWeightedTournament,
    certs: Vec<OmegaCertificate>,
) -> Vec<OmegaCertificate> {
    let c_label = child.label_at(interval.start);
    let left_label = parent.label_at(interval.start);
    let mut out = Vec::new();
    for cert in certs {
        if cert.tail == c_label {
            let head_pos = parent.position_of_label(cert.head).expect("head survives contraction");
            debug_assert!(head_pos < interval.start);
            let mut paths = cert.paths.into_iter();
            for z in interval.clone() {
                let w = parent.weight_between(head_pos, z);
                if w > 0 {
                    let z_label = parent.label_at(z);
                    let assigned: Vec<Vec<VertexId>> = (0..w)
                        .map(|_| {
                            let mut p = paths.next().expect("merged weight matches path count");
                            *p.last_mut().expect("paths are nonempty") = z_label;
                            p
                        })
                        .collect();
                    out.push(OmegaCertificate { tail: z_label, head: cert.head, paths: assigned });
                }
            }
            debug_assert!(paths.next().is_none());
        } else if cert.head == c_label {
            let tail_pos = parent.position_of_label(cert.tail).expect("tail survives contraction");
            debug_assert!(tail_pos >= interval.end);
            let mut paths = cert.paths.into_iter();
            for z in interval.clone() {
                let w = parent.weight_between(z, tail_pos);
                if w > 0 {
                    let z_label = parent.label_at(z);
                    let assigned: Vec<Vec<VertexId>> = (0..w)
                        .map(|_| {
                            let mut p = paths.next().expect("merged weight matches path count");
                            p[0] = z_label;
                            p
                        })
                        .collect();
                    out.push(OmegaCertificate { tail: cert.tail, head: z_label, paths: assigned });
                }
            }
            debug_assert!(paths.next().is_none());
        } else {
            let paths = cert
                .paths
                .into_iter()
                .map(|p| p.into_iter().map(|l| if l == c_label { left_label } else { l }).collect())
                .collect();
            out.push(OmegaCertificate { tail: cert.tail, head: cert.head, paths });
        }
    }
    out
}

/// Independent validity check: every backward arc carries exactly its weight
/// in paths, each path runs head to tail through forward arcs inside the
/// span, and no forward arc is used twice anywhere in the family.
pub fn validate_family(tw: &BackwardWeightedTournament, family: &CertificateFamily) -> bool {
    let arcs: Vec<(VertexId, VertexId)> = tw
        .backward_arcs()
        .iter()
        .map(|&(tail, head, _)| (tw.label_at(tail), tw.label_at(head)))
        .collect();
    validate_family_for(tw, family, &arcs)
}

/// Like [`validate_family`] but only for the given backward arcs; used when
/// a family intentionally covers a subset, such as the between-interval arcs
/// of a safe partition.
pub fn validate_family_for(
    tw: &BackwardWeightedTournament,
    family: &CertificateFamily,
    arcs: &[(VertexId, VertexId)],
) -> bool {
    let mut wanted: HashMap<(VertexId, VertexId), u32> = HashMap::new();
    for &(tail, head) in arcs {
        let (Some(tp), Some(hp)) = (tw.position_of_label(tail), tw.position_of_label(head)) else {
            return false;
        };
        if hp >= tp {
            return false;
        }
        let w = tw.weight_between(hp, tp);
        if w == 0 {
            return false;
        }
        wanted.insert((tail, head), w);
    }
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    for cert in &family.certificates {
        let Some(weight) = wanted.remove(&(cert.tail, cert.head)) else {
            return false;
        };
        if cert.paths.len() != weight as usize {
            return false;
        }
        let (Some(tail_pos), Some(head_pos)) =
            (tw.position_of_label(cert.tail), tw.position_of_label(cert.head))
        else {
            return false;
        };
        for path in &cert.paths {
            if path.len() < 2 || path[0] != cert.head || *path.last().unwrap() != cert.tail {
                return false;
            }
            let mut positions = Vec::with_capacity(path.len());
            for label in path {
                match tw.position_of_label(*label) {
                    Some(p) if p >= head_pos && p <= tail_pos => positions.push(p),
                    _ => return false,
                }
            }
            for pair in positions.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                if a >= b || tw.weight_between(a, b) != 0 || !used.insert((a, b)) {
                    return false;
                }
            }
        }
    }
    wanted.is_empty()
}

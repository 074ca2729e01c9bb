//! Tournament and ordered-tournament representations.
//!
//! Adjacency is stored as a packed bit matrix: bit `j` of row `i` is set iff
//! the arc `i -> j` is present. Triangle queries reduce to row intersections
//! and popcounts. Vertices carry stable labels that survive deletions, so a
//! reduced instance can always be mapped back onto the one it came from.

use thiserror::Error;

/// Stable vertex label. Freshly built tournaments are labelled `0..n-1`;
/// deletions compact indices but keep labels.
pub type VertexId = u32;

const WORD_BITS: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArcError {
    #[error("arc {0} -> {1} is not present")]
    Missing(usize, usize),
    #[error("vertex index {0} out of range (n = {1})")]
    OutOfRange(usize, usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex index {0} out of range (n = {1})")]
    OutOfRange(usize, usize),
    #[error("both directions given for pair {{{0}, {1}}}")]
    BothDirections(usize, usize),
    #[error("no direction given for pair {{{0}, {1}}}")]
    MissingPair(usize, usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("tournament is not acyclic")]
pub struct NotAcyclic;

/// A tournament on `n` vertices: exactly one directed arc per vertex pair.
#[derive(Clone, PartialEq, Eq)]
pub struct Tournament {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    labels: Vec<VertexId>,
}

impl std::fmt::Debug for Tournament {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Tournament(n={})", self.n)?;
        for u in 0..self.n {
            let row: String = (0..self.n)
                .map(|v| if self.has_arc(u, v) { '1' } else { '0' })
                .collect();
            writeln!(f, "  [{}] {}", self.labels[u], row)?;
        }
        Ok(())
    }
}

impl Tournament {
    /// The transitive tournament with arcs `i -> j` for all `i < j`.
    pub fn new_transitive(n: usize) -> Self {
        let words = n.div_ceil(WORD_BITS).max(1);
        let mut t = Tournament {
            n,
            words,
            rows: vec![0; n * words],
            labels: (0..n as VertexId).collect(),
        };
        for i in 0..n {
            for j in i + 1..n {
                t.set_bit(i, j);
            }
        }
        t
    }

    /// Builds a tournament from an explicit arc list; every unordered pair
    /// must appear exactly once.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, BuildError> {
        let words = n.div_ceil(WORD_BITS).max(1);
        let mut t = Tournament {
            n,
            words,
            rows: vec![0; n * words],
            labels: (0..n as VertexId).collect(),
        };
        for (u, v) in arcs {
            if u >= n || v >= n {
                return Err(BuildError::OutOfRange(u.max(v), n));
            }
            if u == v {
                return Err(BuildError::SelfLoop(u));
            }
            if t.has_arc(u, v) || t.has_arc(v, u) {
                return Err(BuildError::BothDirections(u, v));
            }
            t.set_bit(u, v);
        }
        for u in 0..n {
            for v in u + 1..n {
                if !t.has_arc(u, v) && !t.has_arc(v, u) {
                    return Err(BuildError::MissingPair(u, v));
                }
            }
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn label(&self, v: usize) -> VertexId {
        self.labels[v]
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn index_of_label(&self, label: VertexId) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    #[inline]
    fn set_bit(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / WORD_BITS] |= 1 << (v % WORD_BITS);
    }

    #[inline]
    fn clear_bit(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / WORD_BITS] &= !(1 << (v % WORD_BITS));
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.rows[u * self.words + v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    #[inline]
    fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    /// Mask of the vertices with an arc into `u`. In a tournament this is the
    /// complement of `u`'s out-row minus `u` itself.
    fn in_mask(&self, u: usize) -> Vec<u64> {
        let mut mask: Vec<u64> = self.row(u).iter().map(|w| !w).collect();
        mask[u / WORD_BITS] &= !(1 << (u % WORD_BITS));
        let tail = self.n % WORD_BITS;
        if tail != 0 {
            let last = mask.len() - 1;
            mask[last] &= (1u64 << tail) - 1;
        }
        mask
    }

    /// Reverses the arc `u -> v` in place.
    pub fn reverse_arc(&mut self, u: usize, v: usize) -> Result<(), ArcError> {
        if u >= self.n || v >= self.n {
            return Err(ArcError::OutOfRange(u.max(v), self.n));
        }
        if !self.has_arc(u, v) {
            return Err(ArcError::Missing(u, v));
        }
        self.clear_bit(u, v);
        self.set_bit(v, u);
        Ok(())
    }

    /// Returns a copy with the given vertex indices removed; positions are
    /// compacted, labels are preserved.
    pub fn delete_vertices(&self, removed: &[usize]) -> Tournament {
        let mut keep = vec![true; self.n];
        for &v in removed {
            keep[v] = false;
        }
        let kept: Vec<usize> = (0..self.n).filter(|&v| keep[v]).collect();
        let n = kept.len();
        let words = n.div_ceil(WORD_BITS).max(1);
        let mut t = Tournament {
            n,
            words,
            rows: vec![0; n * words],
            labels: kept.iter().map(|&v| self.labels[v]).collect(),
        };
        for (i, &u) in kept.iter().enumerate() {
            for (j, &v) in kept.iter().enumerate() {
                if i != j && self.has_arc(u, v) {
                    t.set_bit(i, j);
                }
            }
        }
        t
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.n - 1 - self.out_degree(u)
    }

    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_arc(u, v))
    }

    /// All arcs, as `(tail, head)` index pairs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (0..self.n).filter_map(move |v| if self.has_arc(u, v) { Some((u, v)) } else { None })
        })
    }

    /// A tournament is acyclic iff its out-degree sequence is a permutation
    /// of `0..n-1` (equivalently, it is transitive).
    pub fn is_acyclic(&self) -> bool {
        let mut seen = vec![false; self.n];
        for v in 0..self.n {
            let d = self.out_degree(v);
            if seen[d] {
                return false;
            }
            seen[d] = true;
        }
        true
    }

    /// Ordering of an acyclic tournament with zero backward arcs: vertices by
    /// descending out-degree.
    pub fn transitive_ordering(&self) -> Result<Vec<usize>, NotAcyclic> {
        if !self.is_acyclic() {
            return Err(NotAcyclic);
        }
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| self.n - 1 - self.out_degree(v));
        Ok(order)
    }

    /// Number of triangles containing the arc `u -> v`, i.e. vertices `w`
    /// with `v -> w` and `w -> u`.
    pub fn triangles_through_arc(&self, u: usize, v: usize) -> Result<usize, ArcError> {
        if u >= self.n || v >= self.n {
            return Err(ArcError::OutOfRange(u.max(v), self.n));
        }
        if !self.has_arc(u, v) {
            return Err(ArcError::Missing(u, v));
        }
        let in_u = self.in_mask(u);
        let count = self
            .row(v)
            .iter()
            .zip(in_u.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum();
        Ok(count)
    }

    /// True iff some triangle contains `v`. In a tournament this is
    /// equivalent to `v` lying on a directed cycle.
    pub fn vertex_in_triangle(&self, v: usize) -> bool {
        let in_v = self.in_mask(v);
        for x in self.out_neighbors(v) {
            let hit = self
                .row(x)
                .iter()
                .zip(in_v.iter())
                .any(|(a, b)| a & b != 0);
            if hit {
                return true;
            }
        }
        false
    }
}

/// A tournament together with a linear ordering of its vertices.
#[derive(Clone, Debug)]
pub struct OrderedTournament {
    tournament: Tournament,
    sigma: Vec<usize>,
    pos: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("ordering is not a permutation of the vertex indices")]
pub struct BadOrdering;

impl OrderedTournament {
    pub fn new(tournament: Tournament, sigma: Vec<usize>) -> Result<Self, BadOrdering> {
        let n = tournament.n();
        if sigma.len() != n {
            return Err(BadOrdering);
        }
        let mut pos = vec![usize::MAX; n];
        for (p, &v) in sigma.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(BadOrdering);
            }
            pos[v] = p;
        }
        Ok(OrderedTournament { tournament, sigma, pos })
    }

    pub fn tournament(&self) -> &Tournament {
        &self.tournament
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// Vertex at the given position.
    pub fn vertex_at(&self, position: usize) -> usize {
        self.sigma[position]
    }

    /// Position of the given vertex.
    pub fn position_of(&self, vertex: usize) -> usize {
        self.pos[vertex]
    }

    /// Arcs whose tail sits at a later position than their head, as
    /// `(tail, head)` index pairs sorted by (head position, tail position).
    pub fn backward_arcs(&self) -> Vec<(usize, usize)> {
        let n = self.tournament.n();
        let mut out = Vec::new();
        for j in 0..n {
            for i in j + 1..n {
                let head = self.sigma[j];
                let tail = self.sigma[i];
                if self.tournament.has_arc(tail, head) {
                    out.push((tail, head));
                }
            }
        }
        out
    }

    pub fn backward_arc_count(&self) -> usize {
        let n = self.tournament.n();
        let mut count = 0;
        for j in 0..n {
            for i in j + 1..n {
                if self.tournament.has_arc(self.sigma[i], self.sigma[j]) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Number of vertices spanned by the arc, endpoints inclusive.
    pub fn span_length(&self, tail: usize, head: usize) -> Result<usize, ArcError> {
        if tail >= self.tournament.n() || head >= self.tournament.n() {
            return Err(ArcError::OutOfRange(tail.max(head), self.tournament.n()));
        }
        if !self.tournament.has_arc(tail, head) {
            return Err(ArcError::Missing(tail, head));
        }
        let i = self.pos[tail];
        let j = self.pos[head];
        Ok(i.abs_diff(j) + 1)
    }
}

/// A partition of ordering positions `0..n` into consecutive nonempty
/// intervals, stored as the strictly increasing interior cut positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalPartition {
    n: usize,
    cuts: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cut positions must be strictly increasing and inside (0, n)")]
pub struct BadPartition;

impl IntervalPartition {
    pub fn new(n: usize, cuts: Vec<usize>) -> Result<Self, BadPartition> {
        let mut prev = 0;
        for &c in &cuts {
            if c <= prev || c >= n {
                return Err(BadPartition);
            }
            prev = c;
        }
        Ok(IntervalPartition { n, cuts })
    }

    /// The all-singletons partition.
    pub fn singletons(n: usize) -> Self {
        IntervalPartition { n, cuts: (1..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    pub fn interval_count(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            self.cuts.len() + 1
        }
    }

    /// The intervals as half-open position ranges.
    pub fn intervals(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::with_capacity(self.interval_count());
        let mut start = 0;
        for &c in &self.cuts {
            out.push(start..c);
            start = c;
        }
        if self.n > 0 {
            out.push(start..self.n);
        }
        out
    }

    /// Index of the interval containing the given position.
    pub fn interval_of(&self, position: usize) -> usize {
        debug_assert!(position < self.n);
        self.cuts.partition_point(|&c| c <= position)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_tournament(n: usize, seed: u64) -> Tournament {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.5) {
                    arcs.push((i, j));
                } else {
                    arcs.push((j, i));
                }
            }
        }
        Tournament::from_arcs(n, arcs).unwrap()
    }

    fn three_cycle() -> Tournament {
        Tournament::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    /// Repeated-source-removal acyclicity oracle.
    fn peel_acyclic(t: &Tournament) -> bool {
        let mut alive: Vec<usize> = (0..t.n()).collect();
        while !alive.is_empty() {
            let source = alive
                .iter()
                .copied()
                .find(|&v| alive.iter().all(|&u| u == v || t.has_arc(v, u)));
            match source {
                Some(v) => alive.retain(|&u| u != v),
                None => return false,
            }
        }
        true
    }

    #[test]
    fn acyclic_transitive_and_cycle() {
        assert!(Tournament::new_transitive(4).is_acyclic());
        assert!(!three_cycle().is_acyclic());
    }

    #[test]
    fn acyclic_matches_peel_oracle() {
        for seed in 0..40 {
            let t = random_tournament(8, seed);
            assert_eq!(t.is_acyclic(), peel_acyclic(&t), "seed {seed}");
        }
    }

    #[test]
    fn transitive_ordering_has_no_backward_arcs() {
        let t = Tournament::from_arcs(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(t.transitive_ordering().unwrap(), vec![0, 1, 2]);

        let single = Tournament::new_transitive(1);
        assert_eq!(single.transitive_ordering().unwrap(), vec![0]);

        // Acyclic instance built by reversing nothing in a shuffled-label
        // transitive tournament.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut perm: Vec<usize> = (0..10).collect();
        for i in (1..10).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        let arcs: Vec<(usize, usize)> = (0..10)
            .flat_map(|i| (i + 1..10).map(move |j| (i, j)))
            .map(|(i, j)| (perm[i], perm[j]))
            .collect();
        let t = Tournament::from_arcs(10, arcs).unwrap();
        let order = t.transitive_ordering().unwrap();
        let ot = OrderedTournament::new(t, order).unwrap();
        assert!(ot.backward_arcs().is_empty());

        assert_eq!(three_cycle().transitive_ordering(), Err(NotAcyclic));
    }

    #[test]
    fn backward_arcs_examples() {
        let ot = OrderedTournament::new(three_cycle(), vec![0, 1, 2]).unwrap();
        assert_eq!(ot.backward_arcs(), vec![(2, 0)]);

        let t = Tournament::new_transitive(5);
        let ot = OrderedTournament::new(t, (0..5).collect()).unwrap();
        assert!(ot.backward_arcs().is_empty());
    }

    #[test]
    fn backward_arcs_match_pairwise_scan() {
        let t = random_tournament(7, 11);
        let sigma = vec![3, 0, 6, 2, 5, 1, 4];
        let ot = OrderedTournament::new(t.clone(), sigma.clone()).unwrap();
        let mut expected = Vec::new();
        for j in 0..7 {
            for i in j + 1..7 {
                if t.has_arc(sigma[i], sigma[j]) {
                    expected.push((sigma[i], sigma[j]));
                }
            }
        }
        assert_eq!(ot.backward_arcs(), expected);
        assert_eq!(ot.backward_arc_count(), expected.len());
    }

    #[test]
    fn span_length_examples() {
        let ot = OrderedTournament::new(three_cycle(), vec![0, 1, 2]).unwrap();
        assert_eq!(ot.span_length(0, 1).unwrap(), 2);
        assert_eq!(ot.span_length(2, 0).unwrap(), 3);
        assert_eq!(ot.span_length(0, 2), Err(ArcError::Missing(0, 2)));

        let t = Tournament::from_arcs(5, [(4, 0), (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
            .unwrap();
        let ot = OrderedTournament::new(t, vec![0, 1, 2, 3, 4]).unwrap();
        assert_eq!(ot.span_length(4, 0).unwrap(), 5);

        let t7 = random_tournament(7, 3);
        let ot = OrderedTournament::new(t7.clone(), vec![6, 2, 0, 1, 3, 4, 5]).unwrap();
        let (tail, head) = if t7.has_arc(2, 6) { (2, 6) } else { (6, 2) };
        // positions 6 -> 0 or 1 -> 0: |i - j| + 1
        let i = ot.position_of(tail);
        let j = ot.position_of(head);
        assert_eq!(ot.span_length(tail, head).unwrap(), i.abs_diff(j) + 1);
    }

    #[test]
    fn triangles_through_arc_examples() {
        let t = three_cycle();
        assert_eq!(t.triangles_through_arc(0, 1).unwrap(), 1);
        assert_eq!(t.triangles_through_arc(1, 2).unwrap(), 1);

        let tt = Tournament::new_transitive(5);
        assert_eq!(tt.triangles_through_arc(0, 4).unwrap(), 0);
        assert_eq!(tt.triangles_through_arc(4, 0), Err(ArcError::Missing(4, 0)));
    }

    #[test]
    fn triangle_count_matches_enumeration() {
        let t = random_tournament(9, 21);
        for u in 0..9 {
            for v in 0..9 {
                if u == v || !t.has_arc(u, v) {
                    continue;
                }
                let brute = (0..9)
                    .filter(|&w| w != u && w != v && t.has_arc(v, w) && t.has_arc(w, u))
                    .count();
                assert_eq!(t.triangles_through_arc(u, v).unwrap(), brute);
            }
        }
    }

    #[test]
    fn vertex_in_triangle_examples() {
        let t = three_cycle();
        for v in 0..3 {
            assert!(t.vertex_in_triangle(v));
        }
        // The source of an acyclic tournament is in no triangle.
        let tt = Tournament::new_transitive(6);
        assert!(!tt.vertex_in_triangle(0));

        let t = random_tournament(10, 33);
        for v in 0..10 {
            let brute = (0..10).any(|x| {
                (0..10).any(|y| {
                    x != v && y != v && x != y && t.has_arc(v, x) && t.has_arc(x, y) && t.has_arc(y, v)
                })
            });
            assert_eq!(t.vertex_in_triangle(v), brute, "vertex {v}");
        }
    }

    #[test]
    fn acyclic_iff_no_triangles() {
        for seed in 100..140 {
            let t = random_tournament(9, seed);
            let triangle_sum: usize = t
                .arcs()
                .map(|(u, v)| t.triangles_through_arc(u, v).unwrap())
                .sum();
            assert_eq!(t.is_acyclic(), triangle_sum == 0);
        }
    }

    #[test]
    fn deletion_preserves_labels() {
        let t = random_tournament(6, 7);
        let t2 = t.delete_vertices(&[1, 4]);
        assert_eq!(t2.n(), 4);
        assert_eq!(t2.labels(), &[0, 2, 3, 5]);
        // arcs between survivors are untouched
        assert_eq!(t2.has_arc(0, 1), t.has_arc(0, 2));
        assert_eq!(t2.has_arc(2, 3), t.has_arc(3, 5));
    }

    #[test]
    fn partition_basics() {
        let p = IntervalPartition::new(5, vec![2, 3]).unwrap();
        assert_eq!(p.intervals(), vec![0..2, 2..3, 3..5]);
        assert_eq!(p.interval_of(0), 0);
        assert_eq!(p.interval_of(2), 1);
        assert_eq!(p.interval_of(4), 2);
        assert!(IntervalPartition::new(5, vec![3, 2]).is_err());
        assert!(IntervalPartition::new(5, vec![0]).is_err());
        assert!(IntervalPartition::new(5, vec![5]).is_err());
        assert_eq!(IntervalPartition::singletons(4).interval_count(), 4);
    }

    proptest! {
        #[test]
        fn completeness(n in 1usize..16, seed in 0u64..500) {
            let t = random_tournament(n, seed);
            for u in 0..n {
                prop_assert!(!t.has_arc(u, u));
                for v in 0..n {
                    if u != v {
                        prop_assert!(t.has_arc(u, v) ^ t.has_arc(v, u));
                    }
                }
            }
        }

        #[test]
        fn reversal_is_involution(n in 2usize..12, seed in 0u64..500) {
            let t = random_tournament(n, seed);
            let mut u = 0;
            let mut v = 1;
            if !t.has_arc(u, v) {
                std::mem::swap(&mut u, &mut v);
            }
            let mut t2 = t.clone();
            t2.reverse_arc(u, v).unwrap();
            t2.reverse_arc(v, u).unwrap();
            prop_assert!(t2 == t);
        }
    }
}

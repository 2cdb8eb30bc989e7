//! Acyclic digraphs over the fixed vertex set `V = {1, ..., N}`.
//!
//! A [`Dag`] stores its arc set as a dense adjacency bitmatrix (one row of
//! `u64` words per vertex, for both successors and predecessors), which gives
//! O(1) membership tests and word-parallel traversals. The vertex set is fixed
//! at construction; all public interfaces use 1-based vertex labels.

use thiserror::Error;

/// Errors from constructing or querying a [`Dag`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DagError {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: u32, n: u32 },
    #[error("vertex count must be at least 2, got {0}")]
    TooFewVertices(u32),
    #[error("({0}, {0}) is a self-loop")]
    SelfLoop(u32),
    #[error("arc ({0}, {1}) already present")]
    DuplicateArc(u32, u32),
    #[error("arc ({0}, {1}) not present")]
    MissingArc(u32, u32),
    #[error("arcs ({0}, {1}) and ({1}, {0}) are both present")]
    AntiparallelPair(u32, u32),
    #[error("arc set contains a directed circuit")]
    Cyclic,
}

/// An acyclic directed graph over vertices `1..=n`.
///
/// Equality, hashing and cloning treat the value as the pair
/// `(n, arc set)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dag {
    n: u32,
    words: usize,
    /// Successor rows: bit `j` of row `i` set iff arc `(i+1, j+1)` present.
    out: Vec<u64>,
    /// Predecessor rows: transpose of `out`, kept for undirected traversal.
    inc: Vec<u64>,
    arc_count: usize,
}

impl std::fmt::Debug for Dag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Dag(n={}, arcs={:?})", self.n, self.arcs().collect::<Vec<_>>())
    }
}

impl Dag {
    /// The graph with no arcs on `n >= 2` vertices.
    pub fn empty(n: u32) -> Result<Self, DagError> {
        if n < 2 {
            return Err(DagError::TooFewVertices(n));
        }
        let words = (n as usize).div_ceil(64);
        Ok(Dag {
            n,
            words,
            out: vec![0; n as usize * words],
            inc: vec![0; n as usize * words],
            arc_count: 0,
        })
    }

    /// Builds a DAG from an explicit arc list, validating ranges, duplicates
    /// and acyclicity. Arcs are 1-based `(i, j)` pairs.
    pub fn from_arcs<I>(n: u32, arcs: I) -> Result<Self, DagError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut g = Dag::empty(n)?;
        for (i, j) in arcs {
            g.check_vertex(i)?;
            g.check_vertex(j)?;
            if i == j {
                return Err(DagError::SelfLoop(i));
            }
            if g.has_arc(i, j) {
                return Err(DagError::DuplicateArc(i, j));
            }
            if g.has_arc(j, i) {
                return Err(DagError::AntiparallelPair(j, i));
            }
            g.insert_arc(i, j);
        }
        if !g.is_acyclic() {
            return Err(DagError::Cyclic);
        }
        Ok(g)
    }

    /// Vertex count `N`.
    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of arcs.
    #[inline]
    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Largest possible arc count, `N(N-1)/2` (a tournament).
    #[inline]
    pub fn max_arc_count(&self) -> usize {
        let n = self.n as usize;
        n * (n - 1) / 2
    }

    fn check_vertex(&self, v: u32) -> Result<(), DagError> {
        if v == 0 || v > self.n {
            Err(DagError::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    fn row(&self, v: u32) -> usize {
        (v as usize - 1) * self.words
    }

    /// Membership test for arc `(i, j)`. Panics on out-of-range vertices.
    #[inline]
    pub fn has_arc(&self, i: u32, j: u32) -> bool {
        assert!(i >= 1 && i <= self.n && j >= 1 && j <= self.n, "vertex out of range");
        let r = self.row(i);
        let b = j as usize - 1;
        self.out[r + b / 64] >> (b % 64) & 1 == 1
    }

    /// Out-degree of `i`.
    #[inline]
    pub fn out_degree(&self, i: u32) -> usize {
        let r = self.row(i);
        self.out[r..r + self.words].iter().map(|w| w.count_ones() as usize).sum()
    }

    /// In-degree of `j`.
    #[inline]
    pub fn in_degree(&self, j: u32) -> usize {
        let r = self.row(j);
        self.inc[r..r + self.words].iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Arcs in ascending lexicographic order of 1-based `(i, j)`.
    pub fn arcs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (1..=self.n).flat_map(move |i| self.successors(i).map(move |j| (i, j)))
    }

    /// Successors of `i`, ascending.
    pub fn successors(&self, i: u32) -> BitIter<'_> {
        let r = self.row(i);
        BitIter::new(&self.out[r..r + self.words])
    }

    /// Predecessors of `j`, ascending.
    pub fn predecessors(&self, j: u32) -> BitIter<'_> {
        let r = self.row(j);
        BitIter::new(&self.inc[r..r + self.words])
    }

    /// View of this graph with arc orientations ignored.
    pub fn undirected(&self) -> UndirectedView<'_> {
        UndirectedView { dag: self }
    }

    // -------- mutation (crate-internal; callers maintain the invariants) ----

    pub(crate) fn insert_arc(&mut self, i: u32, j: u32) {
        debug_assert!(i != j && !self.has_arc(i, j));
        let (ri, rj) = (self.row(i), self.row(j));
        let (bi, bj) = (i as usize - 1, j as usize - 1);
        self.out[ri + bj / 64] |= 1 << (bj % 64);
        self.inc[rj + bi / 64] |= 1 << (bi % 64);
        self.arc_count += 1;
    }

    pub(crate) fn delete_arc(&mut self, i: u32, j: u32) {
        debug_assert!(self.has_arc(i, j));
        let (ri, rj) = (self.row(i), self.row(j));
        let (bi, bj) = (i as usize - 1, j as usize - 1);
        self.out[ri + bj / 64] &= !(1 << (bj % 64));
        self.inc[rj + bi / 64] &= !(1 << (bi % 64));
        self.arc_count -= 1;
    }

    pub(crate) fn reverse_arc(&mut self, i: u32, j: u32) {
        self.delete_arc(i, j);
        self.insert_arc(j, i);
    }

    // -------- predicates ----------------------------------------------------

    /// Would adding arc `(i, j)` create a directed circuit?
    ///
    /// True iff `i == j` (a self-loop is a circuit) or `j` already reaches `i`
    /// by a directed path. The graph is not modified. Requires `(i, j)` to not
    /// be an arc.
    pub fn would_create_circuit(&self, i: u32, j: u32) -> Result<bool, DagError> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i != j && self.has_arc(i, j) {
            return Err(DagError::DuplicateArc(i, j));
        }
        Ok(self.creates_circuit(i, j))
    }

    #[inline]
    pub(crate) fn creates_circuit(&self, i: u32, j: u32) -> bool {
        i == j || self.reaches(j, i)
    }

    /// Is the existing arc `(i, j)` disconnecting, i.e. is the undirected edge
    /// `{i, j}` a bridge? Single traversal from `i` avoiding the edge itself,
    /// so the cost is proportional to the number of arcs.
    pub fn is_disconnecting(&self, i: u32, j: u32) -> Result<bool, DagError> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if !self.has_arc(i, j) {
            return Err(DagError::MissingArc(i, j));
        }
        Ok(self.is_bridge(i, j))
    }

    pub(crate) fn is_bridge(&self, i: u32, j: u32) -> bool {
        // Does j stay reachable from i once the edge {i, j} is ignored?
        let n = self.n as usize;
        let mut seen = vec![false; n];
        let mut stack = vec![i];
        seen[i as usize - 1] = true;
        while let Some(v) = stack.pop() {
            for u in self.undirected_neighbors(v) {
                if (v == i && u == j) || (v == j && u == i) {
                    continue;
                }
                if u == j {
                    return false;
                }
                if !std::mem::replace(&mut seen[u as usize - 1], true) {
                    stack.push(u);
                }
            }
        }
        true
    }

    /// Is the underlying undirected graph connected? With `N >= 2`, a graph
    /// with no arcs is disconnected.
    pub fn is_connected(&self) -> bool {
        let n = self.n as usize;
        let mut seen = vec![false; n];
        let mut stack = vec![1u32];
        seen[0] = true;
        let mut visited = 1;
        while let Some(v) = stack.pop() {
            for u in self.undirected_neighbors(v) {
                if !std::mem::replace(&mut seen[u as usize - 1], true) {
                    visited += 1;
                    stack.push(u);
                }
            }
        }
        visited == n
    }

    fn undirected_neighbors(&self, v: u32) -> BitPairIter<'_> {
        let r = self.row(v);
        BitPairIter {
            a: &self.out[r..r + self.words],
            b: &self.inc[r..r + self.words],
            word: 0,
            bits: 0,
            base: 0,
            started: false,
        }
    }

    /// Kahn's algorithm; used for validation, not by the hot path.
    fn is_acyclic(&self) -> bool {
        let n = self.n as usize;
        let mut indeg: Vec<usize> = (1..=self.n).map(|v| self.in_degree(v)).collect();
        let mut queue: Vec<u32> = (1..=self.n).filter(|&v| indeg[v as usize - 1] == 0).collect();
        let mut removed = 0;
        while let Some(v) = queue.pop() {
            removed += 1;
            for u in self.successors(v) {
                indeg[u as usize - 1] -= 1;
                if indeg[u as usize - 1] == 0 {
                    queue.push(u);
                }
            }
        }
        removed == n
    }

    fn reaches(&self, from: u32, to: u32) -> bool {
        if from == to {
            return true;
        }
        let n = self.n as usize;
        let mut seen = vec![false; n];
        let mut stack = vec![from];
        seen[from as usize - 1] = true;
        while let Some(v) = stack.pop() {
            for u in self.successors(v) {
                if u == to {
                    return true;
                }
                if !std::mem::replace(&mut seen[u as usize - 1], true) {
                    stack.push(u);
                }
            }
        }
        false
    }

    /// Re-derives every structural invariant from the raw bit rows: arc count,
    /// transpose consistency, no self-loops, no antiparallel pair (checked
    /// independently even though acyclicity implies it), and acyclicity.
    pub fn check_invariants(&self) -> Result<(), DagError> {
        let mut count = 0;
        for i in 1..=self.n {
            for j in self.successors(i) {
                count += 1;
                if i == j {
                    return Err(DagError::SelfLoop(i));
                }
                if !self.predecessors(j).any(|p| p == i) {
                    return Err(DagError::MissingArc(i, j));
                }
                if self.has_arc(j, i) {
                    return Err(DagError::AntiparallelPair(i, j));
                }
            }
        }
        if count != self.arc_count || count > self.max_arc_count() {
            return Err(DagError::Cyclic);
        }
        for j in 1..=self.n {
            for i in self.predecessors(j) {
                if !self.has_arc(i, j) {
                    return Err(DagError::MissingArc(i, j));
                }
            }
        }
        if !self.is_acyclic() {
            return Err(DagError::Cyclic);
        }
        Ok(())
    }
}

/// The undirected graph obtained from a [`Dag`] by ignoring arc orientations.
#[derive(Clone, Copy)]
pub struct UndirectedView<'a> {
    dag: &'a Dag,
}

impl<'a> UndirectedView<'a> {
    /// Edge `{i, j}` is present iff `(i, j)` or `(j, i)` is an arc.
    pub fn has_edge(&self, i: u32, j: u32) -> bool {
        self.dag.has_arc(i, j) || self.dag.has_arc(j, i)
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + 'a {
        self.dag.undirected_neighbors(v)
    }

    pub fn degree(&self, v: u32) -> usize {
        self.dag.out_degree(v) + self.dag.in_degree(v)
    }

    /// Same as the arc count: acyclicity forbids antiparallel pairs, so arcs
    /// and undirected edges are in bijection.
    pub fn edge_count(&self) -> usize {
        self.dag.arc_count()
    }

    pub fn is_connected(&self) -> bool {
        self.dag.is_connected()
    }
}

/// Iterator over set bit positions of a row, yielding 1-based labels.
pub struct BitIter<'a> {
    words: &'a [u64],
    word: usize,
    bits: u64,
}

impl<'a> BitIter<'a> {
    fn new(words: &'a [u64]) -> Self {
        BitIter { words, word: 0, bits: words.first().copied().unwrap_or(0) }
    }
}

impl Iterator for BitIter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        while self.bits == 0 {
            self.word += 1;
            if self.word >= self.words.len() {
                return None;
            }
            self.bits = self.words[self.word];
        }
        let t = self.bits.trailing_zeros();
        self.bits &= self.bits - 1;
        Some((self.word * 64) as u32 + t + 1)
    }
}

/// Like [`BitIter`] but over the union of two rows.
struct BitPairIter<'a> {
    a: &'a [u64],
    b: &'a [u64],
    word: usize,
    bits: u64,
    base: u32,
    started: bool,
}

impl Iterator for BitPairIter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if !self.started {
            self.started = true;
            self.bits = self.a[0] | self.b[0];
        }
        while self.bits == 0 {
            self.word += 1;
            if self.word >= self.a.len() {
                return None;
            }
            self.bits = self.a[self.word] | self.b[self.word];
            self.base = (self.word * 64) as u32;
        }
        let t = self.bits.trailing_zeros();
        self.bits &= self.bits - 1;
        Some(self.base + t + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(n: u32, arcs: &[(u32, u32)]) -> Dag {
        Dag::from_arcs(n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn empty_requires_two_vertices() {
        assert_eq!(Dag::empty(1).unwrap_err(), DagError::TooFewVertices(1));
        assert!(Dag::empty(2).is_ok());
    }

    #[test]
    fn from_arcs_rejects_bad_input() {
        assert_eq!(
            Dag::from_arcs(3, [(1, 4)]).unwrap_err(),
            DagError::VertexOutOfRange { vertex: 4, n: 3 }
        );
        assert_eq!(Dag::from_arcs(3, [(2, 2)]).unwrap_err(), DagError::SelfLoop(2));
        assert_eq!(
            Dag::from_arcs(3, [(1, 2), (1, 2)]).unwrap_err(),
            DagError::DuplicateArc(1, 2)
        );
        assert_eq!(
            Dag::from_arcs(3, [(1, 2), (2, 1)]).unwrap_err(),
            DagError::AntiparallelPair(1, 2)
        );
        assert_eq!(
            Dag::from_arcs(3, [(1, 2), (2, 3), (3, 1)]).unwrap_err(),
            DagError::Cyclic
        );
    }

    #[test]
    fn circuit_predicate_examples() {
        let g = dag(3, &[(1, 2), (2, 3)]);
        assert!(g.would_create_circuit(3, 1).unwrap()); // closes 1->2->3
        assert!(!g.would_create_circuit(1, 3).unwrap()); // transitive arc
        let e = Dag::empty(4).unwrap();
        for v in 1..=4 {
            assert!(e.would_create_circuit(v, v).unwrap()); // self-loop
        }
        assert_eq!(
            g.would_create_circuit(0, 1).unwrap_err(),
            DagError::VertexOutOfRange { vertex: 0, n: 3 }
        );
        assert_eq!(g.would_create_circuit(1, 2).unwrap_err(), DagError::DuplicateArc(1, 2));
    }

    #[test]
    fn disconnecting_predicate_examples() {
        let g = dag(3, &[(1, 2), (2, 3)]);
        assert!(g.is_disconnecting(1, 2).unwrap()); // tree edge
        let g = dag(3, &[(1, 2), (2, 3), (1, 3)]);
        assert!(!g.is_disconnecting(1, 2).unwrap()); // on an undirected cycle
        let g = dag(4, &[(1, 2), (2, 3), (1, 3), (3, 4)]);
        assert!(g.is_disconnecting(3, 4).unwrap());
        assert_eq!(g.is_disconnecting(4, 3).unwrap_err(), DagError::MissingArc(4, 3));
    }

    #[test]
    fn connectivity_examples() {
        assert!(!Dag::empty(2).unwrap().is_connected());
        assert!(dag(3, &[(1, 2), (3, 2)]).is_connected()); // orientations ignored
        assert!(!dag(4, &[(1, 2), (3, 4)]).is_connected());
    }

    #[test]
    fn undirected_view_matches_arcs() {
        let g = dag(4, &[(1, 2), (3, 2), (3, 4)]);
        let u = g.undirected();
        assert!(u.has_edge(2, 1) && u.has_edge(2, 3) && u.has_edge(4, 3));
        assert!(!u.has_edge(1, 3));
        assert_eq!(u.degree(2), 2);
        assert_eq!(u.edge_count(), 3);
        assert_eq!(u.neighbors(2).collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn arcs_are_lexicographic() {
        let g = dag(3, &[(2, 3), (1, 3), (1, 2)]);
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn degrees() {
        let g = dag(4, &[(1, 2), (1, 3), (4, 1)]);
        assert_eq!(g.out_degree(1), 2);
        assert_eq!(g.in_degree(1), 1);
        assert_eq!(g.in_degree(2), 1);
        assert_eq!(g.out_degree(2), 0);
    }

    /// Brute-force reference: enumerate all simple directed paths from `a`
    /// looking for `b`.
    fn reaches_by_path_enumeration(g: &Dag, a: u32, b: u32) -> bool {
        fn dfs(g: &Dag, cur: u32, b: u32, on_path: &mut Vec<u32>) -> bool {
            if cur == b {
                return true;
            }
            for nxt in g.successors(cur) {
                if !on_path.contains(&nxt) {
                    on_path.push(nxt);
                    if dfs(g, nxt, b, on_path) {
                        return true;
                    }
                    on_path.pop();
                }
            }
            false
        }
        dfs(g, a, b, &mut vec![a])
    }

    /// Brute-force reference: count undirected components after removing one arc.
    fn components_after_removal(g: &Dag, i: u32, j: u32) -> usize {
        let arcs: Vec<_> = g.arcs().filter(|&a| a != (i, j)).collect();
        let h = Dag::from_arcs(g.n(), arcs).unwrap();
        let n = h.n() as usize;
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for s in 1..=h.n() {
            if comp[s as usize - 1] != usize::MAX {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            comp[s as usize - 1] = count;
            while let Some(v) = stack.pop() {
                for u in h.undirected().neighbors(v) {
                    if comp[u as usize - 1] == usize::MAX {
                        comp[u as usize - 1] = count;
                        stack.push(u);
                    }
                }
            }
        }
        count
    }

    /// Exhaustive oracle equivalence over every DAG with up to 5 vertices:
    /// the circuit predicate against path enumeration, and the bridge
    /// predicate against component counting after removal.
    #[test]
    fn predicates_match_brute_force_exhaustively() {
        for n in 2..=5u32 {
            let pairs: Vec<(u32, u32)> = (1..=n)
                .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
                .collect();
            for mask in 0u32..1 << pairs.len() {
                let arcs: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect();
                let Ok(g) = Dag::from_arcs(n, arcs) else { continue };
                g.check_invariants().unwrap();
                for i in 1..=n {
                    for j in 1..=n {
                        if i != j && g.has_arc(i, j) {
                            let slow = components_after_removal(&g, i, j) > 1;
                            assert_eq!(g.is_disconnecting(i, j).unwrap(), slow);
                        } else {
                            let slow = i == j || reaches_by_path_enumeration(&g, j, i);
                            assert_eq!(g.would_create_circuit(i, j).unwrap(), slow);
                        }
                    }
                }
            }
        }
    }

    /// Reversing a disconnecting arc never creates a circuit.
    #[test]
    fn reversing_a_bridge_preserves_acyclicity() {
        for n in 2..=5u32 {
            let pairs: Vec<(u32, u32)> = (1..=n)
                .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
                .collect();
            for mask in 0u32..1 << pairs.len() {
                let arcs: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect();
                let Ok(g) = Dag::from_arcs(n, arcs) else { continue };
                if !g.is_connected() {
                    continue;
                }
                for (i, j) in g.arcs().collect::<Vec<_>>() {
                    if g.is_disconnecting(i, j).unwrap() {
                        let mut rev = g.clone();
                        rev.reverse_arc(i, j);
                        rev.check_invariants().unwrap();
                    }
                }
            }
        }
    }
}

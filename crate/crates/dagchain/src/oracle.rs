//! Exhaustive ground truth for small vertex counts: enumerate the full state
//! space, build the exact transition matrix, and machine-check symmetry,
//! irreducibility, aperiodicity, the diameter bound and convergence to the
//! uniform distribution.
//!
//! All matrix entries are exact integer counts over the common denominator
//! `N^2`; floating point appears only in the convergence power iteration.

use crate::chain::{self, ChainConfig, Variant};
use crate::dag::Dag;
use rayon::prelude::*;
use std::collections::HashMap;
use thiserror::Error;

/// Largest `n` the enumerator accepts. At `n = 5` the unrestricted space has
/// 29,281 states; beyond that full matrix construction stops being a
/// seconds-scale operation.
pub const ENUMERATION_CAP: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("n = {n} exceeds the enumeration cap {cap}; exhaustive verification is only feasible for small n")]
    AboveCap { n: u32, cap: u32 },
    #[error("invalid chain configuration")]
    BadConfig,
}

/// Every member of a chain's state space, in canonical order (ascending
/// arc-set bitmask over the lexicographic ordered-pair list).
#[derive(Debug, Clone)]
pub struct StateSpace {
    config: ChainConfig,
    states: Vec<Dag>,
    index: HashMap<Dag, usize>,
}

impl StateSpace {
    /// Enumerates all states satisfying the configured membership predicate
    /// by sweeping every subset of the `n(n-1)` ordered pairs.
    pub fn enumerate(config: &ChainConfig) -> Result<StateSpace, OracleError> {
        if config.n > ENUMERATION_CAP {
            return Err(OracleError::AboveCap { n: config.n, cap: ENUMERATION_CAP });
        }
        config.validate().map_err(|_| OracleError::BadConfig)?;
        let n = config.n;
        let pairs: Vec<(u32, u32)> = (1..=n)
            .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let mut states = Vec::new();
        for mask in 0u64..1 << pairs.len() {
            let arcs = pairs
                .iter()
                .enumerate()
                .filter(|&(b, _)| mask >> b & 1 == 1)
                .map(|(_, &p)| p);
            let Ok(g) = Dag::from_arcs(n, arcs) else { continue };
            if config.is_member(&g) {
                states.push(g);
            }
        }
        let index = states.iter().cloned().zip(0..).collect();
        Ok(StateSpace { config: config.clone(), states, index })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Dag] {
        &self.states
    }

    pub fn state(&self, ordinal: usize) -> &Dag {
        &self.states[ordinal]
    }

    /// Canonical ordinal of a state, or `None` if it is not a member.
    pub fn index_of(&self, g: &Dag) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    /// The uniform distribution over this space.
    pub fn uniform(&self) -> Vec<f64> {
        vec![1.0 / self.len() as f64; self.len()]
    }

    /// A point mass on the given ordinal.
    pub fn point_mass(&self, ordinal: usize) -> Vec<f64> {
        let mut d = vec![0.0; self.len()];
        d[ordinal] = 1.0;
        d
    }
}

/// Exact single-step transition matrix: entry `(x, y)` holds the number of
/// the `N^2` draws that move state `x` to state `y`; the diagonal holds the
/// draws that leave `x` unchanged.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    denom: u32,
    rows: Vec<MatrixRow>,
}

#[derive(Debug, Clone, Default)]
struct MatrixRow {
    diag: u32,
    /// Off-diagonal counts, ascending by target ordinal.
    off: Vec<(usize, u32)>,
}

impl TransitionMatrix {
    /// Applies every possible draw to every state through the chain's own
    /// step function and tallies where the draws land.
    pub fn build(space: &StateSpace, config: &ChainConfig) -> TransitionMatrix {
        assert_eq!(space.config().n, config.n, "space and config disagree on n");
        let n = config.n;
        let denom = n * n;
        let rows: Vec<MatrixRow> = space
            .states()
            .par_iter()
            .enumerate()
            .map(|(x, state)| {
                let mut row = MatrixRow::default();
                let mut acc: HashMap<usize, u32> = HashMap::new();
                for i in 1..=n {
                    for j in 1..=n {
                        let mut next = state.clone();
                        chain::step(&mut next, (i, j), config);
                        let y = space
                            .index_of(&next)
                            .expect("transition left the enumerated state space");
                        if y == x {
                            row.diag += 1;
                        } else {
                            *acc.entry(y).or_insert(0) += 1;
                        }
                    }
                }
                row.off = acc.into_iter().collect();
                row.off.sort_unstable();
                let total: u32 = row.diag + row.off.iter().map(|&(_, c)| c).sum::<u32>();
                assert_eq!(total, denom, "row must account for every draw");
                row
            })
            .collect();
        TransitionMatrix { denom, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Common denominator `N^2`.
    pub fn denom(&self) -> u32 {
        self.denom
    }

    /// Numerator of entry `(x, y)` over [`denom`](Self::denom).
    pub fn numerator(&self, x: usize, y: usize) -> u32 {
        if x == y {
            return self.rows[x].diag;
        }
        match self.rows[x].off.binary_search_by_key(&y, |&(t, _)| t) {
            Ok(pos) => self.rows[x].off[pos].1,
            Err(_) => 0,
        }
    }

    /// Exact symmetry check. Returns the lexicographically first offending
    /// ordered pair if the matrix is not symmetric.
    pub fn check_symmetric(&self) -> Result<(), (usize, usize)> {
        for (x, row) in self.rows.iter().enumerate() {
            for &(y, c) in &row.off {
                if self.numerator(y, x) != c {
                    let (a, b) = if x < y { (x, y) } else { (y, x) };
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }

    /// Exact column sums (numerators). Symmetric stochastic matrices are
    /// doubly stochastic; this recomputes the fact independently.
    pub fn column_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.dim()];
        for (x, row) in self.rows.iter().enumerate() {
            sums[x] += row.diag as u64;
            for &(y, c) in &row.off {
                sums[y] += c as u64;
            }
        }
        sums
    }

    /// Smallest diagonal numerator across all states. The `n` diagonal draws
    /// are always no-ops, so this is at least `n`; a positive value certifies
    /// aperiodicity once the chain is irreducible.
    pub fn min_self_loop(&self) -> u32 {
        self.rows.iter().map(|r| r.diag).min().unwrap_or(0)
    }

    /// Is every state reachable from every other along positive-probability
    /// transitions? Checked as strong connectivity of the transition digraph.
    pub fn is_irreducible(&self) -> bool {
        let dim = self.dim();
        if dim == 0 {
            return false;
        }
        let forward = self.reachable_from(0, false);
        let backward = self.reachable_from(0, true);
        forward.iter().all(|&v| v) && backward.iter().all(|&v| v)
    }

    fn reachable_from(&self, start: usize, transpose: bool) -> Vec<bool> {
        let mut seen = vec![false; self.dim()];
        seen[start] = true;
        let mut stack = vec![start];
        // The reverse adjacency is only materialized when asked for.
        let rev: Option<Vec<Vec<usize>>> = transpose.then(|| {
            let mut rev = vec![Vec::new(); self.dim()];
            for (x, row) in self.rows.iter().enumerate() {
                for &(y, _) in &row.off {
                    rev[y].push(x);
                }
            }
            rev
        });
        while let Some(v) = stack.pop() {
            let mut visit = |u: usize| {
                if !std::mem::replace(&mut seen[u], true) {
                    stack.push(u);
                }
            };
            match &rev {
                Some(rev) => rev[v].iter().for_each(|&u| visit(u)),
                None => self.rows[v].off.iter().for_each(|&(u, _)| visit(u)),
            }
        }
        seen
    }

    /// Longest shortest transition path over all ordered state pairs, or
    /// `None` when some pair is unreachable. One BFS per source state.
    pub fn diameter(&self) -> Option<u64> {
        let dim = self.dim();
        (0..dim)
            .into_par_iter()
            .map(|src| {
                let mut dist = vec![u64::MAX; dim];
                dist[src] = 0;
                let mut queue = std::collections::VecDeque::from([src]);
                let mut reached = 1;
                let mut far = 0;
                while let Some(v) = queue.pop_front() {
                    for &(u, _) in &self.rows[v].off {
                        if dist[u] == u64::MAX {
                            dist[u] = dist[v] + 1;
                            far = far.max(dist[u]);
                            reached += 1;
                            queue.push_back(u);
                        }
                    }
                }
                (reached == dim).then_some(far)
            })
            .try_reduce(|| 0, |a, b| Some(a.max(b)))
    }

    /// Applies `t` matrix powers to the distribution `d` (floating point) and
    /// returns the total-variation distance from the uniform distribution.
    pub fn check_convergence(&self, d: &[f64], t: u64) -> f64 {
        assert_eq!(d.len(), self.dim(), "distribution length must match the space");
        let denom = self.denom as f64;
        let mut cur = d.to_vec();
        let mut next = vec![0.0; self.dim()];
        for _ in 0..t {
            next.iter_mut().for_each(|v| *v = 0.0);
            for (x, row) in self.rows.iter().enumerate() {
                let p = cur[x];
                if p == 0.0 {
                    continue;
                }
                next[x] += p * (row.diag as f64 / denom);
                for &(y, c) in &row.off {
                    next[y] += p * (c as f64 / denom);
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        let uniform = 1.0 / self.dim() as f64;
        0.5 * cur.iter().map(|&p| (p - uniform).abs()).sum::<f64>()
    }

    #[cfg(test)]
    fn from_counts(denom: u32, dense: &[&[u32]]) -> TransitionMatrix {
        let rows = dense
            .iter()
            .enumerate()
            .map(|(x, row)| MatrixRow {
                diag: row[x],
                off: row
                    .iter()
                    .enumerate()
                    .filter(|&(y, &c)| y != x && c > 0)
                    .map(|(y, &c)| (y, c))
                    .collect(),
            })
            .collect();
        TransitionMatrix { denom, rows }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::default_start;

    fn cfg(n: u32, variant: Variant) -> ChainConfig {
        ChainConfig::new(n, variant)
    }

    fn dag(n: u32, arcs: &[(u32, u32)]) -> Dag {
        Dag::from_arcs(n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn enumeration_counts_match_known_values() {
        let space = StateSpace::enumerate(&cfg(2, Variant::Unrestricted)).unwrap();
        assert_eq!(space.len(), 3);
        assert_eq!(space.states()[0], Dag::empty(2).unwrap());

        assert_eq!(StateSpace::enumerate(&cfg(2, Variant::Connected)).unwrap().len(), 2);
        assert_eq!(StateSpace::enumerate(&cfg(3, Variant::Unrestricted)).unwrap().len(), 25);
        assert_eq!(StateSpace::enumerate(&cfg(3, Variant::Connected)).unwrap().len(), 18);
        assert_eq!(StateSpace::enumerate(&cfg(4, Variant::Unrestricted)).unwrap().len(), 543);
    }

    #[test]
    fn enumeration_refuses_large_n() {
        assert_eq!(
            StateSpace::enumerate(&cfg(6, Variant::Unrestricted)).unwrap_err(),
            OracleError::AboveCap { n: 6, cap: ENUMERATION_CAP }
        );
    }

    /// Connected plus disconnected partitions the unrestricted space; the
    /// disconnected side is counted by an independent filter.
    #[test]
    fn connected_and_disconnected_partition_the_space() {
        for n in 2..=4u32 {
            let all = StateSpace::enumerate(&cfg(n, Variant::Unrestricted)).unwrap();
            let connected = StateSpace::enumerate(&cfg(n, Variant::Connected)).unwrap();
            let disconnected = all.states().iter().filter(|g| !g.is_connected()).count();
            assert_eq!(connected.len() + disconnected, all.len());
        }
    }

    #[test]
    fn constraint_filters_apply() {
        let mut config = cfg(3, Variant::Unrestricted);
        config.max_arcs = Some(1);
        let space = StateSpace::enumerate(&config).unwrap();
        assert_eq!(space.len(), 7); // empty graph plus 6 single arcs

        let mut config = cfg(3, Variant::Connected);
        config.max_out_degree = Some(1);
        let space = StateSpace::enumerate(&config).unwrap();
        assert!(space.states().iter().all(|g| (1..=3).all(|v| g.out_degree(v) <= 1)));
    }

    #[test]
    fn canonical_order_is_stable() {
        let space = StateSpace::enumerate(&cfg(3, Variant::Connected)).unwrap();
        for (i, s) in space.states().iter().enumerate() {
            assert_eq!(space.index_of(s), Some(i));
        }
        // First connected state in mask order: pairs (1,2),(1,3) are bits 0,1.
        assert_eq!(space.states()[0], dag(3, &[(1, 2), (1, 3)]));
    }

    #[test]
    fn n2_connected_matrix_entries() {
        let config = cfg(2, Variant::Connected);
        let space = StateSpace::enumerate(&config).unwrap();
        let m = TransitionMatrix::build(&space, &config);
        let a = space.index_of(&dag(2, &[(1, 2)])).unwrap();
        let b = space.index_of(&dag(2, &[(2, 1)])).unwrap();
        assert_eq!(m.denom(), 4);
        assert_eq!(m.numerator(a, b), 1); // only the draw (1,2) reverses
        assert_eq!(m.numerator(a, a), 3);
        assert_eq!(m.numerator(b, a), 1);
        assert_eq!(m.numerator(b, b), 3);
    }

    #[test]
    fn n2_unrestricted_matrix_entries() {
        let config = cfg(2, Variant::Unrestricted);
        let space = StateSpace::enumerate(&config).unwrap();
        let m = TransitionMatrix::build(&space, &config);
        let empty = space.index_of(&Dag::empty(2).unwrap()).unwrap();
        let fwd = space.index_of(&dag(2, &[(1, 2)])).unwrap();
        assert_eq!(m.numerator(empty, fwd), 1); // only the draw (1,2) adds
        assert_eq!(m.numerator(empty, empty), 2);
    }

    #[test]
    fn rows_and_columns_sum_to_denominator() {
        for variant in [Variant::Unrestricted, Variant::Connected] {
            for n in 2..=4u32 {
                let config = cfg(n, variant);
                let space = StateSpace::enumerate(&config).unwrap();
                let m = TransitionMatrix::build(&space, &config);
                // Row sums hold by construction (asserted in build); re-check
                // the columns, which certifies double stochasticity.
                for s in m.column_sums() {
                    assert_eq!(s, m.denom() as u64);
                }
                assert!(m.min_self_loop() >= n);
            }
        }
    }

    #[test]
    fn off_diagonal_entries_stay_small() {
        for variant in [Variant::Unrestricted, Variant::Connected] {
            let config = cfg(4, variant);
            let space = StateSpace::enumerate(&config).unwrap();
            let m = TransitionMatrix::build(&space, &config);
            for x in 0..m.dim() {
                for &(_, c) in &m.rows[x].off {
                    assert!(c <= 2, "off-diagonal multiplicity above 2/N^2");
                }
            }
        }
    }

    #[test]
    fn symmetry_holds_for_both_variants() {
        for variant in [Variant::Unrestricted, Variant::Connected] {
            for n in 2..=4u32 {
                let config = cfg(n, variant);
                let space = StateSpace::enumerate(&config).unwrap();
                let m = TransitionMatrix::build(&space, &config);
                assert_eq!(m.check_symmetric(), Ok(()));
            }
        }
    }

    /// Negative control: a hand-built matrix with one lopsided entry must be
    /// rejected with the offending pair.
    #[test]
    fn asymmetry_is_detected() {
        let m = TransitionMatrix::from_counts(4, &[&[3, 1, 0], &[0, 4, 0], &[1, 0, 3]]);
        assert_eq!(m.check_symmetric(), Err((0, 1)));
    }

    #[test]
    fn n2_reversal_rule_decides_irreducibility() {
        let mut config = cfg(2, Variant::Connected);
        let space = StateSpace::enumerate(&config).unwrap();
        let m = TransitionMatrix::build(&space, &config);
        assert!(m.is_irreducible());
        assert_eq!(m.diameter(), Some(1));

        config.reversal_rule_enabled = false;
        let m = TransitionMatrix::build(&space, &config);
        assert!(!m.is_irreducible());
        assert_eq!(m.diameter(), None);
    }

    #[test]
    fn n3_connected_diameter_within_bound() {
        let config = cfg(3, Variant::Connected);
        let space = StateSpace::enumerate(&config).unwrap();
        let m = TransitionMatrix::build(&space, &config);
        assert!(m.is_irreducible());
        let d = m.diameter().unwrap();
        assert!(d <= 15, "diameter {d} exceeds 15");
    }

    #[test]
    fn uniform_start_stays_uniform() {
        let config = cfg(3, Variant::Connected);
        let space = StateSpace::enumerate(&config).unwrap();
        let m = TransitionMatrix::build(&space, &config);
        assert_eq!(m.check_convergence(&space.uniform(), 0), 0.0);
        assert!(m.check_convergence(&space.uniform(), 25) < 1e-12);
    }

    /// Two-state chain with flip probability 1/4: one step from a point mass
    /// lands at (3/4, 1/4), total variation 1/4 exactly.
    #[test]
    fn n2_single_step_distance() {
        let config = cfg(2, Variant::Connected);
        let space = StateSpace::enumerate(&config).unwrap();
        let m = TransitionMatrix::build(&space, &config);
        let tv = m.check_convergence(&space.point_mass(0), 1);
        assert!((tv - 0.25).abs() < 1e-15);
    }

    #[test]
    fn point_mass_converges_to_uniform() {
        let config = cfg(3, Variant::Connected);
        let space = StateSpace::enumerate(&config).unwrap();
        let m = TransitionMatrix::build(&space, &config);
        let start = space.index_of(&default_start(&config).unwrap()).unwrap();
        let tv = m.check_convergence(&space.point_mass(start), 10_000);
        assert!(tv < 1e-6, "tv = {tv}");
    }

    /// Row x of the matrix must equal an independent tally that classifies
    /// each draw with the bare graph predicates instead of the step function.
    #[test]
    fn matrix_agrees_with_predicate_level_tally() {
        for variant in [Variant::Unrestricted, Variant::Connected] {
            let config = cfg(3, variant);
            let space = StateSpace::enumerate(&config).unwrap();
            let m = TransitionMatrix::build(&space, &config);
            for (x, g) in space.states().iter().enumerate() {
                let mut expect: HashMap<usize, u32> = HashMap::new();
                for i in 1..=3u32 {
                    for j in 1..=3u32 {
                        let target = if i != j && g.has_arc(i, j) {
                            let bridge = g.is_disconnecting(i, j).unwrap();
                            let arcs: Vec<(u32, u32)> = if variant == Variant::Unrestricted
                                || !bridge
                            {
                                g.arcs().filter(|&a| a != (i, j)).collect()
                            } else {
                                g.arcs().map(|a| if a == (i, j) { (j, i) } else { a }).collect()
                            };
                            let h = Dag::from_arcs(3, arcs).unwrap();
                            if variant == Variant::Connected && !h.is_connected() {
                                x
                            } else {
                                space.index_of(&h).unwrap()
                            }
                        } else if i != j && !g.would_create_circuit(i, j).unwrap() {
                            let arcs = g.arcs().chain([(i, j)]);
                            space.index_of(&Dag::from_arcs(3, arcs).unwrap()).unwrap()
                        } else {
                            x
                        };
                        *expect.entry(target).or_insert(0) += 1;
                    }
                }
                for (y, c) in expect {
                    assert_eq!(m.numerator(x, y), c, "state {x} -> {y}");
                }
            }
        }
    }
}

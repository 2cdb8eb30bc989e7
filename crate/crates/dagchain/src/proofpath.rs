//! Constructive reachability witnesses for the connected chain: given two
//! connected DAGs on the same vertex set, emit an explicit legal transition
//! sequence from one to the other, never longer than `(N+7)(N-3/2)`.
//!
//! A certificate is built by routing both endpoints to the canonical
//! Hamiltonian dichain `{(i, i+1)}` and splicing the second route in reverse
//! (every transition of the connected chain is invertible by another
//! transition). One route runs in three phases:
//!
//! 1. delete every arc outside a BFS spanning tree of the undirected view;
//! 2. shrink the tree to a dichain by repeatedly turning a leaf into a
//!    degree-2 vertex (one addition plus one deletion per eliminated leaf);
//! 3. rebuild the dichain's vertex order into `1, 2, ..., N` (an endpoint
//!    rotation, then one four-move splice per misplaced vertex), and finally
//!    reverse each arc that points against the target orientation.
//!
//! Every move is executed through [`chain::step_connected`] as it is planned,
//! so intermediate states are connected DAGs by construction; [`replay`]
//! re-verifies this when validating untrusted certificates.

use crate::chain::{self, Action, ChainConfig, Variant};
use crate::dag::Dag;
use std::collections::HashSet;
use std::collections::VecDeque;
use std::fmt;
use thiserror::Error;

/// One planned transition of the connected chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub kind: MoveKind,
    /// The drawn pair `(i, j)`, 1-based.
    pub pair: (u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    /// Arc `(i, j)` is added (rule for missing pairs).
    Add,
    /// Arc `(i, j)` is deleted (must not be disconnecting).
    Del,
    /// Arc `(i, j)` is disconnecting and becomes `(j, i)`.
    Rev,
}

impl Move {
    pub fn add(i: u32, j: u32) -> Move {
        Move { kind: MoveKind::Add, pair: (i, j) }
    }

    pub fn del(i: u32, j: u32) -> Move {
        Move { kind: MoveKind::Del, pair: (i, j) }
    }

    pub fn rev(i: u32, j: u32) -> Move {
        Move { kind: MoveKind::Rev, pair: (i, j) }
    }

    /// The transition undoing this one. Additions and deletions invert each
    /// other on the same pair; a reversal is undone by reversing the swapped
    /// pair.
    pub fn inverse(self) -> Move {
        let (i, j) = self.pair;
        match self.kind {
            MoveKind::Add => Move::del(i, j),
            MoveKind::Del => Move::add(i, j),
            MoveKind::Rev => Move::rev(j, i),
        }
    }

    fn expected_action(self) -> Action {
        match self.kind {
            MoveKind::Add => Action::Added,
            MoveKind::Del => Action::Deleted,
            MoveKind::Rev => Action::Reversed,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            MoveKind::Add => "ADD",
            MoveKind::Del => "DEL",
            MoveKind::Rev => "REV",
        };
        write!(f, "{tag} {} {}", self.pair.0, self.pair.1)
    }
}

/// The reversed-and-inverted move list: a valid certificate from `end` back
/// to `start`.
pub fn invert_moves(moves: &[Move]) -> Vec<Move> {
    moves.iter().rev().map(|m| m.inverse()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("vertex counts differ: {0} vs {1}")]
    VertexCountMismatch(u32, u32),
    #[error("input graph is not connected")]
    NotConnected,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("move {index} ({mv}) is not a legal transition here")]
    IllegalMove { index: usize, mv: Move },
    #[error("state after move {index} violates membership")]
    BrokenInvariant { index: usize },
    #[error("replay ends at a different graph than the certificate claims")]
    WrongEndpoint,
    #[error("start graph is not a connected DAG")]
    BadStart,
    #[error("certificate text: {0}")]
    Parse(String),
}

/// Explicit transition sequence between two connected DAGs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCertificate {
    n: u32,
    start: Dag,
    end: Dag,
    moves: Vec<Move>,
}

/// Moves spent in each construction phase of one route, for inspection.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseCounts {
    pub tree_deletions: usize,
    pub leaf_eliminations: usize,
    pub placement_moves: usize,
    pub orientation_reversals: usize,
}

impl PhaseCounts {
    pub fn total(&self) -> usize {
        self.tree_deletions
            + self.leaf_eliminations
            + self.placement_moves
            + self.orientation_reversals
    }
}

/// Phase accounting for both routes of a certificate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PathBreakdown {
    pub forward: PhaseCounts,
    pub backward: PhaseCounts,
}

impl PathCertificate {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn start(&self) -> &Dag {
        &self.start
    }

    pub fn end(&self) -> &Dag {
        &self.end
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// The certificate from `end` to `start` obtained by inverting every move.
    pub fn reversed(&self) -> PathCertificate {
        PathCertificate {
            n: self.n,
            start: self.end.clone(),
            end: self.start.clone(),
            moves: invert_moves(&self.moves),
        }
    }

    /// Replays the moves from `start` and confirms they are all legal, keep
    /// every intermediate state a connected DAG, and finish exactly at `end`.
    pub fn validate(&self) -> Result<(), CertificateError> {
        let last = replay(&self.start, &self.moves)?;
        if last != self.end {
            return Err(CertificateError::WrongEndpoint);
        }
        Ok(())
    }

    /// Line format: a header `N start-arcs end-arcs` (arc lists as
    /// comma-separated `i>j`, `-` when empty), then one move per line.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} {}\n",
            self.n,
            format_arcs(&self.start),
            format_arcs(&self.end)
        );
        for mv in &self.moves {
            s.push_str(&format!("{mv}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<PathCertificate, CertificateError> {
        let bad = |msg: &str| CertificateError::Parse(msg.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let mut parts = header.split_whitespace();
        let n: u32 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("header must start with the vertex count"))?;
        let start = parse_arcs(n, parts.next().ok_or_else(|| bad("missing start arcs"))?)?;
        let end = parse_arcs(n, parts.next().ok_or_else(|| bad("missing end arcs"))?)?;
        if parts.next().is_some() {
            return Err(bad("trailing fields in header"));
        }
        let mut moves = Vec::new();
        for line in lines {
            let mut f = line.split_whitespace();
            let kind = match f.next() {
                Some("ADD") => MoveKind::Add,
                Some("DEL") => MoveKind::Del,
                Some("REV") => MoveKind::Rev,
                other => return Err(bad(&format!("unknown move tag {other:?}"))),
            };
            let i: u32 = f
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("move line needs two vertex labels"))?;
            let j: u32 = f
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("move line needs two vertex labels"))?;
            if f.next().is_some() {
                return Err(bad("trailing fields in move line"));
            }
            moves.push(Move { kind, pair: (i, j) });
        }
        Ok(PathCertificate { n, start, end, moves })
    }
}

fn format_arcs(g: &Dag) -> String {
    let parts: Vec<String> = g.arcs().map(|(i, j)| format!("{i}>{j}")).collect();
    if parts.is_empty() {
        "-".to_string()
    } else {
        parts.join(",")
    }
}

fn parse_arcs(n: u32, text: &str) -> Result<Dag, CertificateError> {
    let mut arcs = Vec::new();
    if text != "-" {
        for part in text.split(',') {
            let (i, j) = part
                .split_once('>')
                .ok_or_else(|| CertificateError::Parse(format!("bad arc `{part}`")))?;
            let i = i.parse().map_err(|_| CertificateError::Parse(format!("bad arc `{part}`")))?;
            let j = j.parse().map_err(|_| CertificateError::Parse(format!("bad arc `{part}`")))?;
            arcs.push((i, j));
        }
    }
    Dag::from_arcs(n, arcs).map_err(|e| CertificateError::Parse(e.to_string()))
}

/// Replays `moves` from `start` through the connected chain's step function,
/// checking structural invariants and connectivity after every transition.
pub fn replay(start: &Dag, moves: &[Move]) -> Result<Dag, CertificateError> {
    if !start.is_connected() || start.check_invariants().is_err() {
        return Err(CertificateError::BadStart);
    }
    let config = replay_config(start.n());
    let mut state = start.clone();
    for (index, &mv) in moves.iter().enumerate() {
        let (i, j) = mv.pair;
        if i == 0 || i > state.n() || j == 0 || j > state.n() {
            return Err(CertificateError::IllegalMove { index, mv });
        }
        let outcome = chain::step_connected(&mut state, mv.pair, &config);
        if outcome.action != mv.expected_action() {
            return Err(CertificateError::IllegalMove { index, mv });
        }
        if state.check_invariants().is_err() || !state.is_connected() {
            return Err(CertificateError::BrokenInvariant { index });
        }
    }
    Ok(state)
}

fn replay_config(n: u32) -> ChainConfig {
    ChainConfig::new(n, Variant::Connected)
}

/// Upper bound `(N+7)(N-3/2)` on emitted certificate lengths, rounded down
/// to the integer a length can actually attain.
pub fn certificate_length_bound(n: u32) -> u64 {
    let n = n as u64;
    (n + 7) * (2 * n - 3) / 2
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

/// Executes planned moves against a working state, recording them. Every
/// application goes through the chain's own step function and asserts the
/// intended outcome, so a planning bug cannot silently emit an illegal
/// certificate.
struct Builder {
    state: Dag,
    config: ChainConfig,
    log: Vec<Move>,
}

impl Builder {
    fn new(start: Dag) -> Builder {
        let config = replay_config(start.n());
        Builder { state: start, config, log: Vec::new() }
    }

    fn apply(&mut self, mv: Move) {
        let outcome = chain::step_connected(&mut self.state, mv.pair, &self.config);
        assert_eq!(
            outcome.action,
            mv.expected_action(),
            "planned move {mv} is not legal here"
        );
        self.log.push(mv);
    }

    /// Adds the undirected edge `{a, b}` in whichever direction keeps the
    /// graph acyclic, trying `(a, b)` first. At least one direction always
    /// works when `{a, b}` closes exactly one undirected cycle.
    fn add_edge_acyclic(&mut self, a: u32, b: u32) {
        if !self.state.creates_circuit(a, b) {
            self.apply(Move::add(a, b));
        } else {
            self.apply(Move::add(b, a));
        }
    }

    /// Deletes whichever orientation of `{a, b}` is present.
    fn delete_edge(&mut self, a: u32, b: u32) {
        if self.state.has_arc(a, b) {
            self.apply(Move::del(a, b));
        } else {
            self.apply(Move::del(b, a));
        }
    }

    fn degree(&self, v: u32) -> usize {
        self.state.undirected().degree(v)
    }
}

fn is_directed_tree(g: &Dag) -> bool {
    g.arc_count() == g.n() as usize - 1 && g.is_connected()
}

fn is_dichain(g: &Dag) -> bool {
    is_directed_tree(g) && (1..=g.n()).all(|v| g.undirected().degree(v) <= 2)
}

/// Edges of the BFS spanning tree rooted at vertex 1, neighbors explored in
/// ascending order; edges normalized to `(min, max)`.
fn bfs_tree_edges(g: &Dag) -> HashSet<(u32, u32)> {
    let mut seen = vec![false; g.n() as usize];
    seen[0] = true;
    let mut queue = VecDeque::from([1u32]);
    let mut edges = HashSet::new();
    while let Some(v) = queue.pop_front() {
        for u in g.undirected().neighbors(v) {
            if !std::mem::replace(&mut seen[u as usize - 1], true) {
                edges.insert((v.min(u), v.max(u)));
                queue.push_back(u);
            }
        }
    }
    edges
}

fn spanning_tree_phase(b: &mut Builder) -> usize {
    let tree = bfs_tree_edges(&b.state);
    let extra: Vec<(u32, u32)> = b
        .state
        .arcs()
        .filter(|&(i, j)| !tree.contains(&(i.min(j), i.max(j))))
        .collect();
    // Ascending lexicographic order; the spanning tree survives throughout,
    // so none of these deletions can be disconnecting (the step function
    // still re-checks each one).
    for (i, j) in extra {
        b.apply(Move::del(i, j));
    }
    debug_assert!(is_directed_tree(&b.state));
    b.log.len()
}

fn leaf_elimination_phase(b: &mut Builder) -> usize {
    let n = b.state.n();
    let before = b.log.len();
    loop {
        let leaves: Vec<u32> = (1..=n).filter(|&v| b.degree(v) == 1).collect();
        if leaves.len() <= 2 {
            break;
        }
        // Walk from the smallest leaf through degree-2 vertices to the first
        // branch vertex w, then hook the leaf to another neighbor of w.
        let u = leaves[0];
        let mut prev = u;
        let mut cur = b.state.undirected().neighbors(u).next().expect("leaf has a neighbor");
        while b.degree(cur) == 2 {
            let next = b
                .state
                .undirected()
                .neighbors(cur)
                .find(|&x| x != prev)
                .expect("degree-2 vertex has a second neighbor");
            prev = cur;
            cur = next;
        }
        let w = cur;
        debug_assert!(b.degree(w) >= 3);
        let v = b
            .state
            .undirected()
            .neighbors(w)
            .find(|&x| x != prev)
            .expect("branch vertex has another neighbor");
        let leaves_before = leaves.len();
        b.add_edge_acyclic(v, u);
        b.delete_edge(w, v);
        debug_assert!(is_directed_tree(&b.state));
        debug_assert_eq!(
            (1..=n).filter(|&x| b.degree(x) == 1).count(),
            leaves_before - 1,
            "each elimination removes exactly one leaf"
        );
    }
    debug_assert!(is_dichain(&b.state));
    b.log.len() - before
}

/// Vertex sequence of a dichain's underlying path, read from its
/// smaller-labelled endpoint.
fn path_order(g: &Dag) -> Vec<u32> {
    let n = g.n();
    let mut endpoints = (1..=n).filter(|&v| g.undirected().degree(v) == 1);
    let first = endpoints.next().expect("dichain has endpoints");
    let mut order = Vec::with_capacity(n as usize);
    let mut prev = 0;
    let mut cur = first;
    while order.len() < n as usize {
        order.push(cur);
        match g.undirected().neighbors(cur).find(|&x| x != prev) {
            Some(next) => {
                prev = cur;
                cur = next;
            }
            None => break,
        }
    }
    assert_eq!(order.len(), n as usize, "underlying graph is not a path");
    order
}

/// Reorders the underlying path of a dichain to the target vertex sequence.
/// First rotates the target's head vertex to an endpoint (one addition plus
/// one deletion), then splices each misplaced vertex into place (at most two
/// additions and two deletions each).
fn place_order_phase(b: &mut Builder, sigma: &[u32]) -> usize {
    let before = b.log.len();
    let n = sigma.len();
    let mut p = path_order(&b.state);
    if p[0] != sigma[0] && p[n - 1] == sigma[0] {
        p.reverse();
    }
    if p[0] != sigma[0] {
        // Close the path into a ring at its endpoints, then cut just before
        // the head vertex.
        let at = p.iter().position(|&v| v == sigma[0]).expect("head vertex on path");
        b.add_edge_acyclic(p[n - 1], p[0]);
        b.delete_edge(p[at - 1], p[at]);
        p.rotate_left(at);
    }
    debug_assert_eq!(p[0], sigma[0]);
    for t in 1..n - 1 {
        if p[t] == sigma[t] {
            continue;
        }
        let pos = p.iter().position(|&v| v == sigma[t]).expect("vertex on path");
        debug_assert!(pos > t);
        // Hook sigma[t] to the settled prefix, preferring the orientation the
        // final dichain wants, and cut its old left edge.
        if !b.state.creates_circuit(sigma[t - 1], sigma[t]) {
            b.apply(Move::add(sigma[t - 1], sigma[t]));
        } else {
            b.apply(Move::add(sigma[t], sigma[t - 1]));
        }
        b.delete_edge(p[t - 1], p[t]);
        if pos == n - 1 {
            // The displaced segment reattaches by itself: new path is the
            // prefix plus the old suffix reversed.
            let mut q = p[..t].to_vec();
            q.extend(p[t..].iter().rev().copied());
            p = q;
        } else {
            // Join the dangling segment end to the tail end, then cut the
            // segment off sigma[t].
            if !b.state.creates_circuit(p[n - 1], p[t]) {
                b.apply(Move::add(p[n - 1], p[t]));
            } else {
                b.apply(Move::add(p[t], p[n - 1]));
            }
            b.delete_edge(sigma[t], p[pos - 1]);
            let mut q = p[..t].to_vec();
            q.push(sigma[t]);
            q.extend_from_slice(&p[pos + 1..]);
            q.extend_from_slice(&p[t..pos]);
            p = q;
        }
        debug_assert!(is_dichain(&b.state));
        debug_assert_eq!(p, path_order_from(&b.state, p[0]));
        debug_assert_eq!(p[t], sigma[t]);
    }
    debug_assert_eq!(p, sigma);
    b.log.len() - before
}

/// Path order read from a chosen endpoint (debug cross-check).
fn path_order_from(g: &Dag, head: u32) -> Vec<u32> {
    let mut p = path_order(g);
    if p[0] != head {
        p.reverse();
    }
    p
}

/// Reverses every arc that points against `sigma[t] -> sigma[t+1]`. Every
/// arc of a dichain is disconnecting, so each reversal is legal.
fn orient_phase(b: &mut Builder, sigma: &[u32]) -> usize {
    let before = b.log.len();
    for t in 0..sigma.len() - 1 {
        if b.state.has_arc(sigma[t + 1], sigma[t]) {
            b.apply(Move::rev(sigma[t + 1], sigma[t]));
        }
    }
    b.log.len() - before
}

/// Step 1: deletes non-tree arcs until only a BFS spanning tree of the
/// undirected view remains. Exactly `arc_count - (N-1)` deletions.
pub fn to_spanning_tree(g: &Dag) -> (Dag, Vec<Move>) {
    assert!(g.is_connected(), "input must be connected");
    let mut b = Builder::new(g.clone());
    spanning_tree_phase(&mut b);
    (b.state, b.log)
}

/// Step 2: eliminates leaves until the tree's underlying graph is a path.
/// Two moves per eliminated leaf, at most `2(N-3)` in total (a star).
pub fn tree_to_dichain(t: &Dag) -> (Dag, Vec<Move>) {
    assert!(is_directed_tree(t), "input must be a directed tree");
    let mut b = Builder::new(t.clone());
    leaf_elimination_phase(&mut b);
    (b.state, b.log)
}

/// Step 3: turns any dichain into the ascending Hamiltonian dichain
/// `{(i, i+1)}`: vertex order first, arc orientations last.
pub fn dichain_to_hamiltonian(c: &Dag) -> (Dag, Vec<Move>) {
    assert!(is_dichain(c), "input must be a dichain");
    let sigma: Vec<u32> = (1..=c.n()).collect();
    let mut b = Builder::new(c.clone());
    place_order_phase(&mut b, &sigma);
    orient_phase(&mut b, &sigma);
    debug_assert_eq!(b.state, canonical_dichain(c.n()));
    (b.state, b.log)
}

fn canonical_dichain(n: u32) -> Dag {
    Dag::from_arcs(n, (1..n).map(|i| (i, i + 1))).expect("n >= 2")
}

fn route_to_canonical(g: &Dag) -> (Vec<Move>, PhaseCounts) {
    let sigma: Vec<u32> = (1..=g.n()).collect();
    let mut b = Builder::new(g.clone());
    let mut phases = PhaseCounts::default();
    phases.tree_deletions = spanning_tree_phase(&mut b);
    phases.leaf_eliminations = leaf_elimination_phase(&mut b);
    phases.placement_moves = place_order_phase(&mut b, &sigma);
    phases.orientation_reversals = orient_phase(&mut b, &sigma);
    debug_assert_eq!(b.state, canonical_dichain(g.n()));
    (b.log, phases)
}

/// Builds a replayable transition sequence from `g` to `h`.
pub fn build_path(g: &Dag, h: &Dag) -> Result<PathCertificate, PathError> {
    build_path_with_breakdown(g, h).map(|(cert, _)| cert)
}

/// As [`build_path`], also reporting the per-phase move counts of the two
/// routes (forward from `g`, inverted from `h`).
pub fn build_path_with_breakdown(
    g: &Dag,
    h: &Dag,
) -> Result<(PathCertificate, PathBreakdown), PathError> {
    if g.n() != h.n() {
        return Err(PathError::VertexCountMismatch(g.n(), h.n()));
    }
    if !g.is_connected() || !h.is_connected() {
        return Err(PathError::NotConnected);
    }
    if g == h {
        let cert = PathCertificate { n: g.n(), start: g.clone(), end: h.clone(), moves: vec![] };
        return Ok((cert, PathBreakdown::default()));
    }
    let (forward, forward_phases) = route_to_canonical(g);
    let (backward, backward_phases) = route_to_canonical(h);
    let mut moves = forward;
    moves.extend(invert_moves(&backward));
    let cert = PathCertificate { n: g.n(), start: g.clone(), end: h.clone(), moves };
    debug_assert!(cert.validate().is_ok());
    Ok((cert, PathBreakdown { forward: forward_phases, backward: backward_phases }))
}

/// Reachability in the unrestricted chain is immediate: delete every arc of
/// `g`, then add the arcs of `h` (any insertion order of a DAG's arc set
/// keeps every prefix acyclic).
pub fn unrestricted_path(g: &Dag, h: &Dag) -> Result<Vec<Move>, PathError> {
    if g.n() != h.n() {
        return Err(PathError::VertexCountMismatch(g.n(), h.n()));
    }
    let dels = g.arcs().map(|(i, j)| Move::del(i, j));
    let adds = h.arcs().map(|(i, j)| Move::add(i, j));
    Ok(dels.chain(adds).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(n: u32, arcs: &[(u32, u32)]) -> Dag {
        Dag::from_arcs(n, arcs.iter().copied()).unwrap()
    }

    fn transitive_tournament(n: u32) -> Dag {
        let arcs = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)));
        Dag::from_arcs(n, arcs).unwrap()
    }

    #[test]
    fn spanning_tree_of_a_tree_is_free() {
        let g = dag(4, &[(1, 2), (2, 3), (2, 4)]);
        let (t, moves) = to_spanning_tree(&g);
        assert!(moves.is_empty());
        assert_eq!(t, g);
    }

    #[test]
    fn tournament_needs_exactly_the_excess_deletions() {
        let g = transitive_tournament(3);
        let (t, moves) = to_spanning_tree(&g);
        assert_eq!(moves.len(), 1);
        assert!(is_directed_tree(&t));
        for n in [4, 6, 9] {
            let g = transitive_tournament(n);
            let (t, moves) = to_spanning_tree(&g);
            let expect = (n as usize) * (n as usize - 1) / 2 - (n as usize - 1);
            assert_eq!(moves.len(), expect);
            assert!(is_directed_tree(&t));
            assert!(replay(&g, &moves).unwrap() == t);
        }
    }

    #[test]
    fn dichain_passes_through_untouched() {
        let t = dag(3, &[(2, 1), (2, 3)]);
        let (c, moves) = tree_to_dichain(&t);
        assert!(moves.is_empty());
        assert_eq!(c, t);
    }

    #[test]
    fn star_elimination_costs_two_moves_per_leaf() {
        let t = dag(4, &[(1, 2), (1, 3), (1, 4)]);
        let (c, moves) = tree_to_dichain(&t);
        assert_eq!(moves.len(), 2); // leaf count 3 -> 2
        assert!(is_dichain(&c));
        assert_eq!(replay(&t, &moves).unwrap(), c);

        for n in [5u32, 7, 9] {
            let t = Dag::from_arcs(n, (2..=n).map(|v| (1, v))).unwrap();
            let (c, moves) = tree_to_dichain(&t);
            assert_eq!(moves.len(), 2 * (n as usize - 3));
            assert!(is_dichain(&c));
        }
    }

    #[test]
    fn canonical_dichain_needs_no_moves() {
        let c = canonical_dichain(5);
        let (k, moves) = dichain_to_hamiltonian(&c);
        assert!(moves.is_empty());
        assert_eq!(k, c);
    }

    #[test]
    fn n2_wrong_orientation_is_one_reversal() {
        let c = dag(2, &[(2, 1)]);
        let (k, moves) = dichain_to_hamiltonian(&c);
        assert_eq!(moves, vec![Move::rev(2, 1)]);
        assert_eq!(k, canonical_dichain(2));
    }

    #[test]
    fn misordered_dichain_is_rebuilt_and_replayable() {
        // Underlying path 2 - 1 - 3 - 4.
        let c = dag(4, &[(1, 2), (1, 3), (3, 4)]);
        let (k, moves) = dichain_to_hamiltonian(&c);
        assert_eq!(k, canonical_dichain(4));
        assert_eq!(replay(&c, &moves).unwrap(), k);
        assert!(moves.len() as u64 <= certificate_length_bound(4));
    }

    #[test]
    fn identical_endpoints_give_empty_certificate() {
        let g = dag(3, &[(1, 2), (2, 3), (1, 3)]);
        let cert = build_path(&g, &g).unwrap();
        assert!(cert.is_empty());
        cert.validate().unwrap();
    }

    #[test]
    fn n2_flip_certificate_is_single_reversal() {
        let g = dag(2, &[(1, 2)]);
        let h = dag(2, &[(2, 1)]);
        let cert = build_path(&g, &h).unwrap();
        assert_eq!(cert.moves(), &[Move::rev(1, 2)]);
        cert.validate().unwrap();
    }

    #[test]
    fn input_checks() {
        let g = dag(3, &[(1, 2), (2, 3)]);
        let h = dag(4, &[(1, 2), (2, 3), (3, 4)]);
        assert_eq!(build_path(&g, &h).unwrap_err(), PathError::VertexCountMismatch(3, 4));
        let lonely = dag(3, &[(1, 2)]);
        assert_eq!(build_path(&g, &lonely).unwrap_err(), PathError::NotConnected);
    }

    #[test]
    fn certificates_replay_and_reverse() {
        let g = dag(4, &[(1, 2), (1, 3), (3, 4), (2, 4), (1, 4)]);
        let h = dag(4, &[(4, 3), (3, 2), (2, 1)]);
        let cert = build_path(&g, &h).unwrap();
        cert.validate().unwrap();
        assert_eq!(replay(&g, cert.moves()).unwrap(), h);
        let back = cert.reversed();
        back.validate().unwrap();
        assert_eq!(replay(&h, back.moves()).unwrap(), g);
    }

    #[test]
    fn breakdown_accounts_for_every_move() {
        let g = transitive_tournament(5);
        let h = dag(5, &[(5, 1), (1, 4), (4, 2), (2, 3)]);
        let (cert, breakdown) = build_path_with_breakdown(&g, &h).unwrap();
        assert_eq!(cert.len(), breakdown.forward.total() + breakdown.backward.total());
        assert_eq!(breakdown.forward.tree_deletions, 10 - 4);
    }

    #[test]
    fn text_round_trip() {
        let g = dag(3, &[(1, 2), (2, 3)]);
        let h = dag(3, &[(2, 1), (3, 1)]);
        let cert = build_path(&g, &h).unwrap();
        let text = cert.to_text();
        let parsed = PathCertificate::parse(&text).unwrap();
        assert_eq!(parsed, cert);
        parsed.validate().unwrap();
    }

    #[test]
    fn tampered_certificates_fail_validation() {
        let g = dag(3, &[(1, 2), (2, 3)]);
        let h = dag(3, &[(1, 2), (1, 3)]);
        let cert = build_path(&g, &h).unwrap();

        // Wrong claimed endpoint.
        let mut text = cert.to_text();
        text = text.replacen("1>2,1>3", "2>1,1>3", 1);
        let forged = PathCertificate::parse(&text).unwrap();
        assert!(matches!(
            forged.validate().unwrap_err(),
            CertificateError::WrongEndpoint | CertificateError::IllegalMove { .. }
        ));

        // A move that is not legal from the start state.
        let bogus = PathCertificate::parse("3 1>2,2>3 1>2,2>3\nDEL 1 2\n").unwrap();
        assert_eq!(
            bogus.validate().unwrap_err(),
            CertificateError::IllegalMove { index: 0, mv: Move::del(1, 2) }
        );
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(
            PathCertificate::parse("").unwrap_err(),
            CertificateError::Parse(_)
        ));
        assert!(matches!(
            PathCertificate::parse("3 1>2 -\nHOP 1 2\n").unwrap_err(),
            CertificateError::Parse(_)
        ));
        assert!(matches!(
            PathCertificate::parse("3 1<2 -\n").unwrap_err(),
            CertificateError::Parse(_)
        ));
    }

    #[test]
    fn unrestricted_route_is_delete_all_then_add_all() {
        let g = dag(3, &[(1, 2), (2, 3)]);
        let h = dag(3, &[(3, 1)]);
        let moves = unrestricted_path(&g, &h).unwrap();
        assert_eq!(
            moves,
            vec![Move::del(1, 2), Move::del(2, 3), Move::add(3, 1)]
        );
        // Replay through the unrestricted step rules.
        let config = ChainConfig::new(3, Variant::Unrestricted);
        let mut state = g.clone();
        for mv in &moves {
            let out = chain::step_unrestricted(&mut state, mv.pair, &config);
            assert_eq!(out.action, mv.expected_action());
            state.check_invariants().unwrap();
        }
        assert_eq!(state, h);
    }
}

//! Uniform random generation of acyclic digraphs over a fixed vertex set
//! `V = {1, ..., N}`, by simulating a symmetric Markov chain whose states are
//! the DAGs themselves — either all of them, or only the connected ones — and
//! whose moves are single arc additions, deletions and (for the connected
//! space) reversals of disconnecting arcs.
//!
//! Alongside the sampler this crate machine-checks the structural claims the
//! construction rests on, exhaustively for small `N`:
//!
//! * [`oracle`] enumerates state spaces, builds the exact rational transition
//!   matrix, and verifies symmetry, irreducibility, aperiodicity, diameter
//!   and convergence to uniform;
//! * [`proofpath`] emits explicit replayable transition sequences between any
//!   two connected DAGs, never longer than `(N+7)(N-3/2)`;
//! * [`stats`] compares long-run empirical frequencies against the exact
//!   uniform distribution.
//!
//! See `ChainConfig` for the knobs (variant, arc/degree caps, reversal rule,
//! seed) and the `chain` module docs for the exact RNG stream contract.

pub mod chain;
pub mod dag;
pub mod oracle;
pub mod proofpath;
pub mod report;
pub mod stats;

pub use chain::{ChainConfig, ChainRunner, TransitionOutcome, Variant};
pub use dag::{Dag, DagError, UndirectedView};
pub use oracle::{StateSpace, TransitionMatrix};
pub use proofpath::{Move, PathCertificate};
pub use report::Report;
pub use stats::{SamplePlan, SampleSummary};

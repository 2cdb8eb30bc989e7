//! The Markov chains over DAG state spaces: one transition step, the run
//! loop, and the optional constraint customizations.
//!
//! Each step draws an ordered pair `(i, j)` uniformly from `V x V` (diagonal
//! included, so every state keeps a self-loop and the chain is aperiodic) and
//! applies the transition rules:
//!
//! * unrestricted chain: an existing arc is deleted; a missing pair is added
//!   when the result stays acyclic, otherwise nothing happens;
//! * connected chain: an existing non-disconnecting arc is deleted; a
//!   disconnecting arc is reversed (this may be toggled off); additions as
//!   above, but only when the result stays acyclic.
//!
//! Optional caps (total arcs, per-vertex out/in degree) restrict additions;
//! a reversal that would violate a configured degree cap becomes a no-op.
//!
//! # Reproducibility
//!
//! The generator is ChaCha8 keyed with [`SeedableRng::seed_from_u64`]. Every
//! step consumes exactly two index draws (`i`, then `j`); an index over
//! `1..=n` is produced from `next_u64` by rejection: values at or above
//! `2^64 - (2^64 mod n)` are discarded, the rest reduced modulo `n`. Derived
//! seeds for independent chains come from [`derive_seed`], a SplitMix64 mix
//! of `(seed, index)`. This exact stream is part of the output contract.

use crate::dag::Dag;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

/// Which state space and rule set the chain runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// All acyclic digraphs on `V`; deletion rule unconditional.
    #[default]
    Unrestricted,
    /// All connected acyclic digraphs; deletions guarded by the bridge test,
    /// bridges reversed instead (unless the reversal rule is disabled).
    Connected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("vertex count must be at least 2, got {0}")]
    TooFewVertices(u32),
    #[error("max_arcs {max_arcs} below the N-1 = {min} arcs a connected state needs")]
    MaxArcsBelowTree { max_arcs: usize, min: usize },
    #[error("configured caps admit no valid start state: {0}")]
    CapsForbidStart(&'static str),
    #[error("start state is not a member of the configured state space: {0}")]
    StartNotMember(&'static str),
}

/// Full description of a chain run: state space, constraints, length, seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainConfig {
    pub n: u32,
    pub variant: Variant,
    /// Rule reversing disconnecting arcs; meaningful for [`Variant::Connected`].
    pub reversal_rule_enabled: bool,
    pub max_arcs: Option<usize>,
    pub max_out_degree: Option<usize>,
    pub max_in_degree: Option<usize>,
    pub steps: u64,
    pub seed: u64,
}

impl ChainConfig {
    pub fn new(n: u32, variant: Variant) -> Self {
        ChainConfig {
            n,
            variant,
            reversal_rule_enabled: true,
            max_arcs: None,
            max_out_degree: None,
            max_in_degree: None,
            steps: 0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 2 {
            return Err(ConfigError::TooFewVertices(self.n));
        }
        if self.variant == Variant::Connected {
            if let Some(max_arcs) = self.max_arcs {
                let min = self.n as usize - 1;
                if max_arcs < min {
                    return Err(ConfigError::MaxArcsBelowTree { max_arcs, min });
                }
            }
        }
        Ok(())
    }

    /// Membership predicate of the configured state space. Acyclicity is a
    /// structural invariant of [`Dag`] and is not re-derived here.
    pub fn is_member(&self, g: &Dag) -> bool {
        g.n() == self.n && self.satisfies_caps(g)
            && (self.variant == Variant::Unrestricted || g.is_connected())
    }

    pub fn satisfies_caps(&self, g: &Dag) -> bool {
        if self.max_arcs.is_some_and(|cap| g.arc_count() > cap) {
            return false;
        }
        if let Some(cap) = self.max_out_degree {
            if (1..=self.n).any(|v| g.out_degree(v) > cap) {
                return false;
            }
        }
        if let Some(cap) = self.max_in_degree {
            if (1..=self.n).any(|v| g.in_degree(v) > cap) {
                return false;
            }
        }
        true
    }

    fn addition_allowed(&self, g: &Dag, i: u32, j: u32) -> bool {
        !self.max_arcs.is_some_and(|cap| g.arc_count() + 1 > cap)
            && !self.max_out_degree.is_some_and(|cap| g.out_degree(i) + 1 > cap)
            && !self.max_in_degree.is_some_and(|cap| g.in_degree(j) + 1 > cap)
    }

    fn reversal_allowed(&self, g: &Dag, i: u32, j: u32) -> bool {
        // Reversing (i, j) raises out(j) and in(i) by one; the arc count and
        // the other two degrees only drop.
        !self.max_out_degree.is_some_and(|cap| g.out_degree(j) + 1 > cap)
            && !self.max_in_degree.is_some_and(|cap| g.in_degree(i) + 1 > cap)
    }
}

/// What a single transition did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Added,
    Deleted,
    Reversed,
    Noop,
}

/// One transition: the drawn pair and the action it triggered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitionOutcome {
    pub pair: (u32, u32),
    pub action: Action,
}

/// One step of the unrestricted chain. Total: every draw yields an outcome.
pub fn step_unrestricted(state: &mut Dag, pair: (u32, u32), config: &ChainConfig) -> TransitionOutcome {
    let (i, j) = pair;
    let action = if i != j && state.has_arc(i, j) {
        state.delete_arc(i, j);
        Action::Deleted
    } else if !state.creates_circuit(i, j) && config.addition_allowed(state, i, j) {
        state.insert_arc(i, j);
        Action::Added
    } else {
        Action::Noop
    };
    TransitionOutcome { pair, action }
}

/// One step of the connected chain. Requires `state` connected.
pub fn step_connected(state: &mut Dag, pair: (u32, u32), config: &ChainConfig) -> TransitionOutcome {
    let (i, j) = pair;
    let action = if i != j && state.has_arc(i, j) {
        if !state.is_bridge(i, j) {
            state.delete_arc(i, j);
            Action::Deleted
        } else if config.reversal_rule_enabled && config.reversal_allowed(state, i, j) {
            state.reverse_arc(i, j);
            Action::Reversed
        } else {
            Action::Noop
        }
    } else if !state.creates_circuit(i, j) && config.addition_allowed(state, i, j) {
        state.insert_arc(i, j);
        Action::Added
    } else {
        Action::Noop
    };
    TransitionOutcome { pair, action }
}

/// Dispatches on the configured variant.
pub fn step(state: &mut Dag, pair: (u32, u32), config: &ChainConfig) -> TransitionOutcome {
    match config.variant {
        Variant::Unrestricted => step_unrestricted(state, pair, config),
        Variant::Connected => step_connected(state, pair, config),
    }
}

/// The variant's minimal start state: the empty graph, or for the connected
/// chain the ascending Hamiltonian dichain `{(i, i+1)}`.
pub fn default_start(config: &ChainConfig) -> Result<Dag, ConfigError> {
    config.validate()?;
    let start = match config.variant {
        Variant::Unrestricted => Dag::empty(config.n).expect("validated n"),
        Variant::Connected => {
            if config.max_out_degree == Some(0) || config.max_in_degree == Some(0) {
                return Err(ConfigError::CapsForbidStart(
                    "a connected state needs out- and in-degrees of at least 1",
                ));
            }
            Dag::from_arcs(config.n, (1..config.n).map(|i| (i, i + 1))).expect("validated n")
        }
    };
    debug_assert!(config.is_member(&start));
    Ok(start)
}

/// A chain in motion: owns its state and generator. Single-threaded; spawn
/// one runner per derived seed for parallel sampling.
#[derive(Debug, Clone)]
pub struct ChainRunner {
    config: ChainConfig,
    state: Dag,
    rng: ChaCha8Rng,
}

impl ChainRunner {
    /// Starts from [`default_start`].
    pub fn new(config: ChainConfig) -> Result<Self, ConfigError> {
        let start = default_start(&config)?;
        Self::with_start(config, start)
    }

    /// Starts from an explicit state, which must belong to the configured
    /// state space and satisfy all caps.
    pub fn with_start(config: ChainConfig, start: Dag) -> Result<Self, ConfigError> {
        config.validate()?;
        if start.n() != config.n {
            return Err(ConfigError::StartNotMember("vertex count differs"));
        }
        if config.variant == Variant::Connected && !start.is_connected() {
            return Err(ConfigError::StartNotMember("not connected"));
        }
        if !config.satisfies_caps(&start) {
            return Err(ConfigError::StartNotMember("violates a configured cap"));
        }
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        Ok(ChainRunner { config, state: start, rng })
    }

    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    pub fn state(&self) -> &Dag {
        &self.state
    }

    pub fn into_state(self) -> Dag {
        self.state
    }

    /// Draws one pair and applies one transition.
    pub fn step(&mut self) -> TransitionOutcome {
        let i = draw_index(&mut self.rng, self.config.n);
        let j = draw_index(&mut self.rng, self.config.n);
        step(&mut self.state, (i, j), &self.config)
    }

    /// Applies `steps` transitions and returns the final state.
    pub fn run(&mut self, steps: u64) -> &Dag {
        for _ in 0..steps {
            self.step();
        }
        &self.state
    }
}

/// Runs `config.steps` transitions from `start` with the seeded generator and
/// returns the final state. Deterministic in `(config, start)`.
pub fn run_chain(config: &ChainConfig, start: Dag) -> Result<Dag, ConfigError> {
    let mut runner = ChainRunner::with_start(config.clone(), start)?;
    runner.run(config.steps);
    Ok(runner.into_state())
}

/// Unbiased draw from `1..=n` by 64-bit rejection sampling.
fn draw_index(rng: &mut ChaCha8Rng, n: u32) -> u32 {
    let n = n as u64;
    let rem = ((u64::MAX % n) + 1) % n; // 2^64 mod n
    let threshold = 0u64.wrapping_sub(rem); // 2^64 - rem
    loop {
        let x = rng.next_u64();
        if rem == 0 || x < threshold {
            return (x % n) as u32 + 1;
        }
    }
}

/// Per-index seed for a family of independent chains: SplitMix64 applied to
/// the base seed offset by the index's SplitMix64 image.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(splitmix64(index)))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

//! Statistical checks that the running chain actually produces the uniform
//! distribution the exact matrix analysis promises: per-state frequency
//! tallies against the enumerated space for small `N`, arc-count histograms
//! for any `N`, chi-square goodness of fit and total-variation distance.
//!
//! Burn-in and sampling gap are caller-chosen. The defaults exposed here are
//! heuristics only; no mixing-time bound is claimed anywhere.

use crate::chain::{derive_seed, ChainConfig, ChainRunner, ConfigError};
use crate::oracle::{OracleError, StateSpace};
use crate::report::Report;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum StatsError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}; use the arc-count histogram mode for large n")]
    Oracle(#[from] OracleError),
    #[error("expected count per state is {expected:.2} < 5; draw at least {needed} samples")]
    ExpectedCountTooSmall { expected: f64, needed: u64 },
}

/// Sampling protocol: discard `burn_in` steps, then record a state after
/// every further `gap` steps, `count` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplePlan {
    pub burn_in: u64,
    pub gap: u64,
    pub count: u64,
}

impl SamplePlan {
    /// Heuristic defaults: burn-in `10 n^2 ln(3^(n(n-1)/2))` (the crude state
    /// count bound of three choices per vertex pair) and gap `n^2` (one
    /// expected draw per ordered pair).
    pub fn with_defaults(n: u32, count: u64) -> SamplePlan {
        SamplePlan { burn_in: default_burn_in(n), gap: (n as u64) * (n as u64), count }
    }
}

/// Heuristic burn-in; see [`SamplePlan::with_defaults`].
pub fn default_burn_in(n: u32) -> u64 {
    let n = n as f64;
    let ln_states_bound = (n * (n - 1.0) / 2.0) * 3f64.ln();
    (10.0 * n * n * ln_states_bound).ceil() as u64
}

/// Tally of a finished sampling run.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSummary {
    pub samples: u64,
    /// Per-state frequencies by canonical ordinal; `None` in histogram mode.
    pub state_freqs: Option<Vec<u64>>,
    pub space_size: Option<usize>,
    /// Goodness of fit against uniform; `None` when the expected count per
    /// state is below the classical validity floor of 5.
    pub chi_square: Option<f64>,
    pub dof: Option<usize>,
    pub tv_to_uniform: Option<f64>,
    /// `(arc count, frequency)` ascending; populated in both modes.
    pub arc_histogram: Vec<(usize, u64)>,
    pub mean_arcs: f64,
}

impl SampleSummary {
    fn from_tallies(state_freqs: Option<(Vec<u64>, usize)>, hist: Vec<u64>, samples: u64) -> Self {
        let arc_histogram: Vec<(usize, u64)> = hist
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(arcs, &c)| (arcs, c))
            .collect();
        let total_arcs: u64 = arc_histogram.iter().map(|&(a, c)| a as u64 * c).sum();
        let mean_arcs = total_arcs as f64 / samples as f64;
        let (state_freqs, space_size) = match state_freqs {
            Some((f, s)) => (Some(f), Some(s)),
            None => (None, None),
        };
        let chi = state_freqs
            .as_deref()
            .zip(space_size)
            .and_then(|(f, s)| chi_square_uniform(f, s).ok());
        SampleSummary {
            samples,
            tv_to_uniform: state_freqs.as_deref().map(tv_to_uniform),
            chi_square: chi.map(|(stat, _)| stat),
            dof: chi.map(|(_, dof)| dof),
            state_freqs,
            space_size,
            arc_histogram,
            mean_arcs,
        }
    }

    /// Renders the summary as a [`Report`] (without a verdict; thresholds are
    /// the caller's business).
    pub fn report(&self) -> Report {
        let mut r = Report::new("sample-summary");
        r.field("samples", self.samples);
        if let Some(s) = self.space_size {
            r.field("space_size", s);
        }
        if let Some(tv) = self.tv_to_uniform {
            r.field("tv_to_uniform", format!("{tv:.6}"));
        }
        if let (Some(chi), Some(dof)) = (self.chi_square, self.dof) {
            r.field("chi_square", format!("{chi:.4}"));
            r.field("dof", dof);
        }
        r.field("mean_arcs", format!("{:.4}", self.mean_arcs));
        r
    }

    /// Histogram rows as `arc_count,frequency` CSV lines.
    pub fn histogram_csv(&self) -> String {
        let mut s = String::from("arc_count,frequency\n");
        for &(arcs, c) in &self.arc_histogram {
            s.push_str(&format!("{arcs},{c}\n"));
        }
        s
    }
}

/// Runs the chain and tallies full states against the enumerated space.
/// Requires `n` within the enumeration cap; deterministic in the config.
pub fn sample_chain(config: &ChainConfig, plan: &SamplePlan) -> Result<SampleSummary, StatsError> {
    let space = StateSpace::enumerate(config)?;
    let (freqs, hist) = tally_one_chain(config.clone(), plan, Some(&space))?;
    Ok(SampleSummary::from_tallies(
        Some((freqs.expect("per-state tally"), space.len())),
        hist,
        plan.count,
    ))
}

/// As [`sample_chain`], but merges `chains` independent runners with derived
/// seeds `derive_seed(seed, 0..chains)`, splitting the sample count evenly
/// (earlier chains take the remainder). Tallies merge associatively, so the
/// result does not depend on scheduling.
pub fn sample_chain_multi(
    config: &ChainConfig,
    plan: &SamplePlan,
    chains: u64,
) -> Result<SampleSummary, StatsError> {
    assert!(chains > 0, "need at least one chain");
    let space = StateSpace::enumerate(config)?;
    let parts: Vec<(Option<Vec<u64>>, Vec<u64>)> = (0..chains)
        .into_par_iter()
        .map(|idx| {
            let mut sub = config.clone();
            sub.seed = derive_seed(config.seed, idx);
            let mut sub_plan = *plan;
            sub_plan.count = plan.count / chains + u64::from(idx < plan.count % chains);
            tally_one_chain(sub, &sub_plan, Some(&space))
        })
        .collect::<Result<_, _>>()?;
    let mut freqs = vec![0u64; space.len()];
    let mut hist = Vec::new();
    for (f, h) in parts {
        for (acc, v) in freqs.iter_mut().zip(f.expect("per-state tally")) {
            *acc += v;
        }
        merge_hist(&mut hist, &h);
    }
    Ok(SampleSummary::from_tallies(Some((freqs, space.len())), hist, plan.count))
}

/// Arc-count histogram of sampled states; works for any `n` since it never
/// enumerates the space.
pub fn arc_count_profile(
    config: &ChainConfig,
    plan: &SamplePlan,
) -> Result<SampleSummary, StatsError> {
    let (_, hist) = tally_one_chain(config.clone(), plan, None)?;
    Ok(SampleSummary::from_tallies(None, hist, plan.count))
}

fn merge_hist(acc: &mut Vec<u64>, other: &[u64]) {
    if acc.len() < other.len() {
        acc.resize(other.len(), 0);
    }
    for (a, &b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

fn tally_one_chain(
    config: ChainConfig,
    plan: &SamplePlan,
    space: Option<&StateSpace>,
) -> Result<(Option<Vec<u64>>, Vec<u64>), StatsError> {
    let mut runner = ChainRunner::new(config)?;
    let mut freqs = space.map(|s| vec![0u64; s.len()]);
    let mut hist = vec![0u64; runner.state().max_arc_count() + 1];
    runner.run(plan.burn_in);
    for _ in 0..plan.count {
        runner.run(plan.gap);
        let state = runner.state();
        if let (Some(freqs), Some(space)) = (&mut freqs, space) {
            let ordinal = space.index_of(state).expect("chain left its state space");
            freqs[ordinal] += 1;
        }
        hist[state.arc_count()] += 1;
    }
    Ok((freqs, hist))
}

/// Pearson statistic against the uniform distribution over `space_size`
/// cells, with `space_size - 1` degrees of freedom. Every expected count
/// must reach the classical floor of 5.
pub fn chi_square_uniform(freqs: &[u64], space_size: usize) -> Result<(f64, usize), StatsError> {
    assert_eq!(freqs.len(), space_size, "one frequency cell per state");
    let total: u64 = freqs.iter().sum();
    let expected = total as f64 / space_size as f64;
    if expected < 5.0 {
        return Err(StatsError::ExpectedCountTooSmall {
            expected,
            needed: 5 * space_size as u64,
        });
    }
    let stat = freqs
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    Ok((stat, space_size - 1))
}

/// Half the L1 distance between the empirical distribution and uniform.
pub fn tv_to_uniform(freqs: &[u64]) -> f64 {
    let total: u64 = freqs.iter().sum();
    let uniform = 1.0 / freqs.len() as f64;
    0.5 * freqs
        .iter()
        .map(|&o| (o as f64 / total as f64 - uniform).abs())
        .sum::<f64>()
}

/// Chi-square quantile for the two-sided acceptance bands.
pub fn chi_square_quantile(dof: usize, p: f64) -> f64 {
    ChiSquared::new(dof as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(p)
}

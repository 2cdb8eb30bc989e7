//! `dagchain gen`: emit random DAGs.
//!
//! Two sampling protocols:
//! * default: `--count` independent chains, each seeded `derive_seed(seed,
//!   index)` and run for `--steps` transitions from the variant's start
//!   state;
//! * with `--burn-in`/`--gap`: one chain; discard the burn-in, then emit a
//!   state every `gap` steps.

use crate::formats::{self, OutputFormat};
use crate::{ChainFlags, Outcome, UsageError};
use clap::Args;
use dagchain::chain::{derive_seed, ChainRunner};
use dagchain::stats::default_burn_in;

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    chain: ChainFlags,
    /// Transitions per generated graph (default 20*N*N).
    #[arg(long)]
    steps: Option<u64>,
    /// Number of graphs to emit.
    #[arg(long)]
    count: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Single-chain mode: steps to discard before the first sample.
    #[arg(long)]
    burn_in: Option<u64>,
    /// Single-chain mode: steps between consecutive samples.
    #[arg(long)]
    gap: Option<u64>,
}

pub fn run(args: GenArgs) -> Result<Outcome, UsageError> {
    let file = args.chain.config_file()?;
    let base = args.chain.resolve()?;
    let n = base.n;
    let steps = args.steps.or(file.steps).unwrap_or(20 * n as u64 * n as u64);
    let count = args.count.or(file.count).unwrap_or(1);
    let format = args.format.unwrap_or_default();
    let burn_in = args.burn_in.or(file.burn_in);
    let gap = args.gap.or(file.gap);

    let mut out = String::new();
    if burn_in.is_some() || gap.is_some() {
        // Single long chain.
        let mut runner = ChainRunner::new(base.clone())?;
        runner.run(burn_in.unwrap_or_else(|| default_burn_in(n)));
        let gap = gap.unwrap_or(n as u64 * n as u64);
        for index in 0..count {
            runner.run(gap);
            if index > 0 {
                out.push_str(formats::separator(format));
            }
            out.push_str(&formats::emit(runner.state(), format));
        }
    } else {
        for index in 0..count {
            let mut config = base.clone();
            config.seed = derive_seed(base.seed, index);
            config.steps = steps;
            let mut runner = ChainRunner::new(config)?;
            runner.run(steps);
            if index > 0 {
                out.push_str(formats::separator(format));
            }
            out.push_str(&formats::emit(runner.state(), format));
        }
    }
    print!("{out}");
    Ok(Outcome::Success)
}

//! `dagchain` command line: sample random DAGs, run the verification checks,
//! and build or replay transition-path certificates.
//!
//! Exit codes: 0 success / check passed, 1 check failed, 2 usage or input
//! error.

mod configfile;
mod formats;
mod gen;
mod pathcmd;
mod verify;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "dagchain", version, about = "Uniform random DAG sampler and verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate random DAGs on standard output.
    Gen(gen::GenArgs),
    /// Run a verification check; exits 0 on pass, 1 on fail.
    Verify {
        #[command(subcommand)]
        check: verify::VerifyCmd,
    },
    /// Build a transition certificate between two graphs, or replay one.
    Path(pathcmd::PathArgs),
}

/// Chain-shape flags shared by `gen` and the `verify` subcommands. Any value
/// may also come from a `key=value` config file; explicit flags win.
#[derive(Debug, Clone, Default, Args)]
pub struct ChainFlags {
    /// Vertex count N (at least 2).
    #[arg(long)]
    n: Option<u32>,
    /// Sample connected DAGs only.
    #[arg(long)]
    connected: bool,
    /// Disable the rule that reverses disconnecting arcs.
    #[arg(long)]
    no_reversal: bool,
    /// Cap on the total number of arcs.
    #[arg(long)]
    max_arcs: Option<usize>,
    /// Cap on each vertex's out-degree.
    #[arg(long)]
    max_out_degree: Option<usize>,
    /// Cap on each vertex's in-degree.
    #[arg(long)]
    max_in_degree: Option<usize>,
    /// RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Load defaults from a key=value file (explicit flags override).
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

/// A failure that should terminate with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::error::Error> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// What a command run amounts to: a verdict or a usage problem.
pub enum Outcome {
    Success,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => gen::run(args),
        Command::Verify { check } => verify::run(check),
        Command::Path(args) => pathcmd::run(args),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

impl ChainFlags {
    /// Resolves flags against the optional config file into a chain config.
    /// `steps` stays 0; commands fill in their own run lengths.
    pub fn resolve(&self) -> Result<dagchain::ChainConfig, UsageError> {
        let file = match &self.config {
            Some(path) => configfile::load(path)?,
            None => configfile::ConfigFile::default(),
        };
        let n = self
            .n
            .or(file.n)
            .ok_or_else(|| UsageError("--n is required (or `n=` in the config file)".into()))?;
        let connected = self.connected || file.connected.unwrap_or(false);
        let variant = if connected {
            dagchain::Variant::Connected
        } else {
            dagchain::Variant::Unrestricted
        };
        let mut config = dagchain::ChainConfig::new(n, variant);
        config.reversal_rule_enabled = !(self.no_reversal || file.no_reversal.unwrap_or(false));
        config.max_arcs = self.max_arcs.or(file.max_arcs);
        config.max_out_degree = self.max_out_degree.or(file.max_out_degree);
        config.max_in_degree = self.max_in_degree.or(file.max_in_degree);
        config.seed = self.seed.or(file.seed).unwrap_or(0);
        config.validate()?;
        Ok(config)
    }

    pub fn config_file(&self) -> Result<configfile::ConfigFile, UsageError> {
        match &self.config {
            Some(path) => configfile::load(path),
            None => Ok(configfile::ConfigFile::default()),
        }
    }
}

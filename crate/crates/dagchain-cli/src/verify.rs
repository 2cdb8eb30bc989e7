//! `dagchain verify`: machine-check chain properties on enumerated state
//! spaces (small N) or against sampled frequencies.

use crate::{ChainFlags, Outcome, UsageError};
use clap::{Args, Subcommand};
use dagchain::chain::default_start;
use dagchain::oracle::{OracleError, StateSpace, TransitionMatrix};
use dagchain::proofpath::certificate_length_bound;
use dagchain::stats::{self, SamplePlan};
use dagchain::{ChainConfig, Report, Variant};

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Exact symmetry of the transition matrix.
    Symmetry(SpaceArgs),
    /// Strong connectivity of the positive-transition digraph.
    Irreducibility(SpaceArgs),
    /// Transition-graph diameter, compared to the (N+7)(N-3/2) bound for the
    /// connected chain.
    Diameter(SpaceArgs),
    /// Total-variation distance to uniform after t matrix powers.
    Convergence(ConvergenceArgs),
    /// Chi-square and TV test of sampled state frequencies against uniform.
    Uniformity(UniformityArgs),
    /// Reversal-rule study: irreducibility and convergence with the rule on
    /// and off.
    Remark(RemarkArgs),
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    #[command(flatten)]
    chain: ChainFlags,
    /// Emit the report as machine-readable key=value lines.
    #[arg(long)]
    kv: bool,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    chain: ChainFlags,
    /// Matrix powers to apply to the start distribution.
    #[arg(long, default_value_t = 10_000)]
    t: u64,
    /// Pass threshold on the final total-variation distance.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    kv: bool,
}

#[derive(Debug, Args)]
pub struct UniformityArgs {
    #[command(flatten)]
    chain: ChainFlags,
    #[arg(long)]
    burn_in: Option<u64>,
    #[arg(long)]
    gap: Option<u64>,
    /// Recorded samples.
    #[arg(long)]
    samples: Option<u64>,
    /// Independent chains to merge (single chain by default).
    #[arg(long, default_value_t = 1)]
    chains: u64,
    /// Two-sided chi-square band: quantiles [q, 1-q].
    #[arg(long, default_value_t = 0.001)]
    band: f64,
    /// Pass threshold on total-variation distance to uniform.
    #[arg(long, default_value_t = 0.01)]
    tv_tol: f64,
    #[arg(long)]
    kv: bool,
}

#[derive(Debug, Args)]
pub struct RemarkArgs {
    #[command(flatten)]
    chain: ChainFlags,
    /// Matrix powers for the convergence measurement.
    #[arg(long, default_value_t = 1_000)]
    t: u64,
    #[arg(long)]
    kv: bool,
}

pub fn run(cmd: VerifyCmd) -> Result<Outcome, UsageError> {
    match cmd {
        VerifyCmd::Symmetry(args) => symmetry(args),
        VerifyCmd::Irreducibility(args) => irreducibility(args),
        VerifyCmd::Diameter(args) => diameter(args),
        VerifyCmd::Convergence(args) => convergence(args),
        VerifyCmd::Uniformity(args) => uniformity(args),
        VerifyCmd::Remark(args) => remark(args),
    }
}

fn enumerated(config: &ChainConfig) -> Result<(StateSpace, TransitionMatrix), UsageError> {
    let space = StateSpace::enumerate(config).map_err(|e| match e {
        OracleError::AboveCap { .. } => UsageError(e.to_string()),
        other => UsageError(other.to_string()),
    })?;
    let matrix = TransitionMatrix::build(&space, config);
    Ok((space, matrix))
}

fn describe(report: &mut Report, config: &ChainConfig, space: &StateSpace) {
    report.field("n", config.n);
    report.field(
        "variant",
        match config.variant {
            Variant::Unrestricted => "unrestricted",
            Variant::Connected => "connected",
        },
    );
    report.field("reversal_rule", config.reversal_rule_enabled);
    report.field("states", space.len());
}

fn finish(report: Report, kv: bool) -> Result<Outcome, UsageError> {
    if kv {
        print!("{}", report.kv());
    } else {
        println!("{report}");
    }
    Ok(if report.pass { Outcome::Success } else { Outcome::CheckFailed })
}

fn symmetry(args: SpaceArgs) -> Result<Outcome, UsageError> {
    let config = args.chain.resolve()?;
    let (space, matrix) = enumerated(&config)?;
    let mut report = Report::new("symmetry");
    describe(&mut report, &config, &space);
    match matrix.check_symmetric() {
        Ok(()) => {
            report.field("symmetric", true);
        }
        Err((x, y)) => {
            report.field("symmetric", false);
            report.field("counterexample_states", format!("{x} {y}"));
            report.field(
                "numerators",
                format!("{} vs {}", matrix.numerator(x, y), matrix.numerator(y, x)),
            );
            report.fail();
        }
    }
    finish(report, args.kv)
}

fn irreducibility(args: SpaceArgs) -> Result<Outcome, UsageError> {
    let config = args.chain.resolve()?;
    let (space, matrix) = enumerated(&config)?;
    let mut report = Report::new("irreducibility");
    describe(&mut report, &config, &space);
    let irreducible = matrix.is_irreducible();
    report.field("irreducible", irreducible);
    report.set_pass(irreducible);
    finish(report, args.kv)
}

fn diameter(args: SpaceArgs) -> Result<Outcome, UsageError> {
    let config = args.chain.resolve()?;
    let (space, matrix) = enumerated(&config)?;
    let mut report = Report::new("diameter");
    describe(&mut report, &config, &space);
    match matrix.diameter() {
        Some(d) => {
            report.field("diameter", d);
            if config.variant == Variant::Connected {
                let bound = certificate_length_bound(config.n);
                report.field("bound", bound);
                report.set_pass(d <= bound);
            } else {
                report.field("bound", "none claimed");
            }
        }
        None => {
            report.field("diameter", "infinite (not irreducible)");
            report.fail();
        }
    }
    finish(report, args.kv)
}

fn convergence(args: ConvergenceArgs) -> Result<Outcome, UsageError> {
    let config = args.chain.resolve()?;
    let (space, matrix) = enumerated(&config)?;
    let start = default_start(&config)?;
    let ordinal = space
        .index_of(&start)
        .ok_or_else(|| UsageError("start state missing from the space".into()))?;
    let tv = matrix.check_convergence(&space.point_mass(ordinal), args.t);
    let mut report = Report::new("convergence");
    describe(&mut report, &config, &space);
    report.field("t", args.t);
    report.field("tv_to_uniform", format!("{tv:.3e}"));
    report.field("tolerance", format!("{:.3e}", args.tol));
    report.set_pass(tv < args.tol);
    finish(report, args.kv)
}

fn uniformity(args: UniformityArgs) -> Result<Outcome, UsageError> {
    let config = args.chain.resolve()?;
    let plan = SamplePlan {
        burn_in: args.burn_in.unwrap_or(10_000),
        gap: args.gap.unwrap_or(50),
        count: args.samples.unwrap_or(100_000),
    };
    let summary = if args.chains > 1 {
        stats::sample_chain_multi(&config, &plan, args.chains)
    } else {
        stats::sample_chain(&config, &plan)
    }
    .map_err(|e| UsageError(e.to_string()))?;

    let mut report = summary.report();
    report.check = "uniformity".into();
    report.field("burn_in", plan.burn_in);
    report.field("gap", plan.gap);
    let (Some(chi), Some(dof), Some(tv)) = (summary.chi_square, summary.dof, summary.tv_to_uniform)
    else {
        return Err(UsageError(
            "sample too small for a valid chi-square test; raise --samples".into(),
        ));
    };
    let lo = stats::chi_square_quantile(dof, args.band);
    let hi = stats::chi_square_quantile(dof, 1.0 - args.band);
    report.field("chi_square_band", format!("[{lo:.3}, {hi:.3}]"));
    report.field("tv_tolerance", args.tv_tol);
    report.set_pass(chi >= lo && chi <= hi && tv < args.tv_tol);
    finish(report, args.kv)
}

fn remark(args: RemarkArgs) -> Result<Outcome, UsageError> {
    let mut config = args.chain.resolve()?;
    config.variant = Variant::Connected; // the rule only exists there
    let mut report = Report::new("remark");
    report.field("n", config.n);
    let mut expected_ok = true;
    for enabled in [true, false] {
        config.reversal_rule_enabled = enabled;
        let (space, matrix) = enumerated(&config)?;
        let tag = if enabled { "with_reversal" } else { "without_reversal" };
        let irreducible = matrix.is_irreducible();
        report.field(format!("irreducible_{tag}"), irreducible);
        match matrix.diameter() {
            Some(d) => report.field(format!("diameter_{tag}"), d),
            None => report.field(format!("diameter_{tag}"), "infinite"),
        };
        let start = space
            .index_of(&default_start(&config)?)
            .ok_or_else(|| UsageError("start state missing from the space".into()))?;
        let tv = matrix.check_convergence(&space.point_mass(start), args.t);
        report.field(format!("tv_after_t_{tag}"), format!("{tv:.3e}"));
        // The rule is needed exactly at N = 2; beyond that it is optional.
        let expected = enabled || config.n >= 3;
        expected_ok &= irreducible == expected;
    }
    report.field("t", args.t);
    report.field("matches_expectation", expected_ok);
    report.set_pass(expected_ok);
    finish(report, args.kv)
}

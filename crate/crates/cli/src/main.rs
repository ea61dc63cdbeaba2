//! `facmom`: moment tables, identity checks and convergence diagnostics.
//!
//! Exit status is 0 when every check passes, 1 when an identity fails and 2
//! on bad usage.

mod args;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use facmom::Precision;

use args::{CliError, RangeArg, RationalArg, MIN_PRECISION};
use report::Format;

#[derive(Parser, Debug)]
#[command(name = "facmom", version, about = "Factorial moments of discrete orthogonal polynomial ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Decimal digits for floating-point work (at least 30).
    #[arg(long, global = true, env = "FACMOM_PRECISION", default_value_t = Precision::DEFAULT_DIGITS)]
    precision: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moment tables across computation routes.
    Moments(MomentsArgs),
    /// Randomised moments: coefficients, recurrences, equation residuals.
    Randomised(RandomisedArgs),
    /// Equilibrium-measure moments and correspondences.
    Equilibrium(EquilibriumArgs),
    /// Truncated Schur-measure sums against closed forms.
    Schur(SchurArgs),
    /// The full acceptance battery.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EnsembleKind {
    Charlier,
    Meixner,
    Krawtchouk,
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    #[arg(long, value_enum)]
    ensemble: EnsembleKind,
    #[arg(long)]
    theta: Option<RationalArg>,
    #[arg(long)]
    q: Option<RationalArg>,
    #[arg(long, default_value = "1")]
    gamma: RationalArg,
    #[arg(long)]
    p: Option<RationalArg>,
    /// Krawtchouk support size K.
    #[arg(long)]
    bigk: Option<u64>,
    /// Moment orders, inclusive: `3`, `0..5` or `1,4`.
    #[arg(long, default_value = "0..4")]
    k: RangeArg,
    #[arg(long, default_value = "1..3")]
    n: RangeArg,
    /// Skip the lattice-sum oracle.
    #[arg(long)]
    no_oracle: bool,
    /// Lattice cutoff for unbounded supports.
    #[arg(long)]
    x_max: Option<u64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args, Debug)]
pub struct RandomisedArgs {
    #[arg(long)]
    theta: Option<RationalArg>,
    #[arg(long)]
    q: Option<RationalArg>,
    #[arg(long, default_value = "0..4")]
    k: RangeArg,
    /// Check recurrences and the transformed Jacobi equation for k = 1 up to this.
    #[arg(long, default_value_t = 30)]
    recurrence_max: u64,
    /// Orders for the printed-equation report.
    #[arg(long, default_value = "1..3")]
    report_k: RangeArg,
    #[arg(long)]
    no_report: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EquilibriumKind {
    Charlier,
    Meixner1,
    Meixner,
    Krawtchouk,
}

#[derive(Args, Debug)]
pub struct EquilibriumArgs {
    #[arg(long, value_enum)]
    kind: EquilibriumKind,
    #[arg(long)]
    h: Option<RationalArg>,
    #[arg(long)]
    q: Option<RationalArg>,
    #[arg(long)]
    c: Option<RationalArg>,
    #[arg(long)]
    kappa: Option<RationalArg>,
    #[arg(long)]
    p: Option<RationalArg>,
    #[arg(long, default_value = "0..6")]
    k: RangeArg,
    /// Charlier parameters for the correspondence check (repeatable).
    #[arg(long)]
    theta: Vec<RationalArg>,
    /// Walk t toward 1/q (meixner1 only).
    #[arg(long)]
    limit: bool,
    #[arg(long = "limit-t")]
    limit_t: Vec<RationalArg>,
    #[arg(long, default_value_t = 60_000)]
    m_max: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VerifyKind {
    Charlier,
    Meixner,
    Poissonised,
    Nb,
}

#[derive(Args, Debug)]
pub struct SchurArgs {
    #[arg(long, value_enum)]
    verify: VerifyKind,
    #[arg(long)]
    theta: Option<RationalArg>,
    #[arg(long)]
    q: Option<RationalArg>,
    #[arg(long)]
    t: Option<RationalArg>,
    #[arg(long, default_value = "1..3")]
    n: RangeArg,
    #[arg(long, default_value = "0..3")]
    k: RangeArg,
    /// Largest partition size summed.
    #[arg(long, default_value_t = 400)]
    max_size: u64,
    /// Largest N in the randomised sums.
    #[arg(long, default_value_t = 200)]
    max_n: u64,
    #[arg(long, default_value_t = 1e-12)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    /// Run one criterion (1 to 9) instead of all.
    #[arg(long)]
    criterion: Option<u32>,
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    if cli.precision < MIN_PRECISION {
        return Err(CliError::Usage(format!("precision must be at least {MIN_PRECISION}, got {}", cli.precision)));
    }
    let prec = Precision::digits(cli.precision);
    let report = match &cli.command {
        Command::Moments(a) => commands::moments(a, prec)?,
        Command::Randomised(a) => commands::randomised(a)?,
        Command::Equilibrium(a) => commands::equilibrium(a, prec)?,
        Command::Schur(a) => commands::schur(a, prec)?,
        Command::Suite(a) => commands::suite(a)?,
    };
    report.emit(cli.format, cli.output.as_deref())?;
    if !report.passed() {
        eprintln!("{} check(s) failed", report.summary()["failed"]);
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("facmom: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => 2,
                CliError::Runtime(_) => 1,
            })
        }
    }
}

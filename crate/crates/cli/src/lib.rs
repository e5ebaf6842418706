//! Command-line front end: argument parsing, command dispatch and rendering.
//! Every command produces a flat stream of [`Record`]s; the process exits
//! nonzero exactly when an error record is present.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod kinds;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use kinds::{ModelChoice, PriorKind};
pub use output::{format_machine, format_sig, render, Format, Record, Value};

#[derive(Debug, Parser)]
#[command(name = "objprior", version, about = "Noninformative priors, grid posteriors and information-processing reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a prior with its normalizing constant and endpoint limits.
    Prior(PriorArgs),
    /// Grid posterior, atoms and marginal likelihood.
    Posterior(PosteriorArgs),
    /// Rule-of-succession table, one column per prior.
    Succession(SuccessionArgs),
    /// Information-processing report for the Bayes posterior and perturbations.
    Efficiency(EfficiencyArgs),
    /// AR(1) slope posteriors under the two closed-form priors.
    Ar1(Ar1Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    TanhSinh,
    GaussLegendre,
    Midpoint,
}

impl From<SchemeArg> for objprior::Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::TanhSinh => objprior::Scheme::TanhSinh,
            SchemeArg::GaussLegendre => objprior::Scheme::GaussLegendre,
            SchemeArg::Midpoint => objprior::Scheme::Midpoint,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Grid node count.
    #[arg(long, default_value_t = 2048, value_parser = clap::value_parser!(u64).range(2..))]
    pub grid: u64,
    /// Grid rule; defaults to tanh-sinh on bounded-singular domains and
    /// Gauss-Legendre for the AR(1) slope.
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the output here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct LumpArgs {
    /// Mass of the atom at 0 for the mixed prior.
    #[arg(long)]
    pub k0: Option<f64>,
    /// Mass of the atom at 1 for the mixed prior.
    #[arg(long)]
    pub k1: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Dataset file (header line with the model label, one observation per line).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Bernoulli successes, used when no data file is given.
    #[arg(long)]
    pub successes: Option<usize>,
    /// Bernoulli failures, used when no data file is given.
    #[arg(long)]
    pub failures: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct PriorArgs {
    #[arg(long, default_value = "bernoulli")]
    pub model: ModelChoice,
    /// uniform, haldane, jeffreys, mdip, mixed or beta:A:B.
    #[arg(long)]
    pub kind: PriorKind,
    /// Rescale to unit mass; fails for improper measures.
    #[arg(long)]
    pub normalize: bool,
    #[command(flatten)]
    pub lumps: LumpArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct PosteriorArgs {
    #[arg(long, default_value = "bernoulli")]
    pub model: ModelChoice,
    #[arg(long)]
    pub kind: PriorKind,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub lumps: LumpArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct SuccessionArgs {
    /// Comma-separated prior kinds, one column each.
    #[arg(long, value_delimiter = ',', default_value = "uniform,jeffreys,mixed,haldane")]
    pub kind: Vec<PriorKind>,
    #[arg(long = "n-max", default_value_t = 10)]
    pub n_max: u64,
    /// Report the limiting value for the Haldane prior instead of marking
    /// its improper cells.
    #[arg(long = "haldane-limit")]
    pub haldane_limit: bool,
    #[command(flatten)]
    pub lumps: LumpArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct EfficiencyArgs {
    #[arg(long, default_value = "bernoulli")]
    pub model: ModelChoice,
    #[arg(long, default_value = "uniform")]
    pub kind: PriorKind,
    #[command(flatten)]
    pub data: DataArgs,
    /// Number of seeded random candidate densities.
    #[arg(long, default_value_t = 0)]
    pub perturbations: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub lumps: LumpArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Ar1Args {
    /// Series length.
    #[arg(long = "T", default_value_t = 500)]
    pub t: usize,
    /// True slope of the simulated series.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Required unless a data file supplies the series.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Series file in the `ar1` dataset format; replaces simulation.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Prior(a) => &a.common,
            Command::Posterior(a) => &a.common,
            Command::Succession(a) => &a.common,
            Command::Efficiency(a) => &a.common,
            Command::Ar1(a) => &a.common,
        }
    }
}

/// Runs a parsed command. Failures become error records.
pub fn execute(command: &Command) -> Vec<Record> {
    let mut records = Vec::new();
    let result = match command {
        Command::Prior(a) => commands::prior(a, &mut records),
        Command::Posterior(a) => commands::posterior_cmd(a, &mut records),
        Command::Succession(a) => commands::succession(a, &mut records),
        Command::Efficiency(a) => commands::efficiency(a, &mut records),
        Command::Ar1(a) => commands::ar1(a, &mut records),
    };
    if let Err(message) = result {
        records.push(Record::error(message));
    }
    records
}

/// 0 when no error record is present, 1 otherwise.
pub fn exit_code(records: &[Record]) -> i32 {
    if records.iter().any(Record::is_error) {
        1
    } else {
        0
    }
}

/// Parses `args`, runs the command and writes the output. Returns the exit
/// status.
pub fn run_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let records = execute(&cli.command);
    let common = cli.command.common();
    let text = render(&records, common.format);
    let code = exit_code(&records);
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => {
            use std::io::Write;
            // a closed downstream pipe is not a failure of the command
            let mut out = std::io::stdout().lock();
            if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: cannot write output: {e}");
                    return 1;
                }
            }
        }
    }
    for r in records.iter().filter(|r| r.is_error()) {
        if let Some(Value::Text(m)) = r.get("message") {
            eprintln!("error: {m}");
        }
    }
    code
}

//! Command-line front end: `measures`, `simulate`, `judge`, `sweep`, `select`.
//!
//! Exit codes: 0 success, 2 usage or parameter error, 3 validation failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub mod commands;
pub mod format;
pub mod io;

pub use format::OutputFormat;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// Statistical check or selection failed on otherwise valid input.
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl From<pairclean_core::Error> for CliError {
    fn from(e: pairclean_core::Error) -> Self {
        match e {
            pairclean_core::Error::Selection(_) => CliError::Validation(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pairclean",
    version,
    about = "Channel-level measures for pairwise-similarity data cleaning"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form outcome probabilities and preference measures.
    Measures(MeasuresArgs),
    /// Monte Carlo estimate of the outcome probabilities, checked against the closed form.
    Simulate(SimulateArgs),
    /// Judge channels from a prediction file.
    Judge(JudgeArgs),
    /// Sweep the measures over a (Q2, Q3) grid and report rank correlations with Q3.
    Sweep(SweepArgs),
    /// Rank candidate operating points by a preference measure.
    Select(SelectArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CohortArgs {
    /// Number of channels N.
    #[arg(long)]
    pub channels: usize,
    /// Number of correct channels n.
    #[arg(long, conflicts_with = "q1", required_unless_present = "q1")]
    pub correct: Option<usize>,
    /// Proportion of correct channels; rounded to n = round(Q1 * N).
    #[arg(long)]
    pub q1: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct RecallArgs {
    /// Recall of similar pairs.
    #[arg(long)]
    pub q2: Option<f64>,
    /// Recall of dissimilar pairs.
    #[arg(long)]
    pub q3: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct MeasuresArgs {
    #[command(flatten)]
    pub cohort: CohortArgs,
    #[command(flatten)]
    pub recalls: RecallArgs,
    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub cohort: CohortArgs,
    #[command(flatten)]
    pub recalls: RecallArgs,
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `absolute` or `threshold:<theta>`.
    #[arg(long, default_value = "absolute")]
    pub rule: String,
    /// Largest tolerated |z| against the closed form before exiting with 3.
    #[arg(long, default_value_t = 4.0)]
    pub tolerance_sigma: f64,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct JudgeArgs {
    /// CSV with header `a,b,prediction`.
    #[arg(long)]
    pub predictions: PathBuf,
    #[arg(long, default_value = "absolute")]
    pub rule: String,
    /// CSV with header `channel,label`.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Channel count; inferred from the files when absent.
    #[arg(long)]
    pub channels: Option<usize>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub cohort: CohortArgs,
    /// `start:stop:step` or a single value.
    #[arg(long, default_value = "0.5:1.0:0.1")]
    pub q2_grid: String,
    #[arg(long, default_value = "0.5:1.0:0.1")]
    pub q3_grid: String,
    /// Sweep rows are written here as CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Rank correlation at or above which a measure counts as strongly positive.
    #[arg(long, default_value_t = pairclean_core::analysis::DEFAULT_STRONG_THRESHOLD)]
    pub threshold: f64,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct SelectArgs {
    /// CSV with header `id,q2,q3`.
    #[arg(long)]
    pub candidates: PathBuf,
    #[command(flatten)]
    pub cohort: CohortArgs,
    /// One of e1, e2, e3, e4.
    #[arg(long)]
    pub measure: String,
}

/// Runs a parsed command; returns the process exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Measures(a) => commands::measures(&a, stdout, stderr),
        Command::Simulate(a) => commands::simulate(&a, stdout, stderr),
        Command::Judge(a) => commands::judge(&a, stdout, stderr),
        Command::Sweep(a) => commands::sweep(&a, stdout, stderr),
        Command::Select(a) => commands::select(&a, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs them. Argument
/// errors print clap's message and exit with 2.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, stdout, stderr),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            code
        }
    }
}

pub(crate) fn write_out(path: Option<&PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(CliError::from),
    }
}

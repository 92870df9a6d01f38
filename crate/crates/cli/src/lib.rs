//! `stoqforge` command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 on success or a passing verdict, 2 on a failing verdict and
//! 1 on any error.

mod commands;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use report::{Report, RunManifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

/// Environment variable bounding the worker thread count.
pub const THREADS_ENV: &str = "STOQFORGE_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "stoqforge",
    version,
    about = "Compile reversible verification circuits to stoquastic Hamiltonians and verify them"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest register (in qubits) any subcommand will touch.
    #[arg(long = "cap-qubits", global = true, default_value_t = 24)]
    pub cap_qubits: usize,
    /// Comparison tolerance for `verify`, convergence tolerance for `spectrum`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output path: the artifact for amplify/compile/pin/guide, the report otherwise.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Add wall-clock time to the manifest (reports are then no longer reproducible).
    #[arg(long = "record-timing", global = true)]
    #[serde(skip)]
    pub record_timing: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Isometric,
    Expanded,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact acceptance probability of a circuit on one input.
    Accept(AcceptArgs),
    /// Majority-vote amplification.
    Amplify(AmplifyArgs),
    /// Clock-construction Hamiltonian of a circuit on one input.
    Compile(CompileArgs),
    /// Perturbed Hamiltonian with a truncated-history guide, as an instance bundle.
    Guide(GuideArgs),
    /// Stoquastic embedding with a pinned auxiliary qubit.
    Pin(PinArgs),
    /// Minimum of a diagonal Hamiltonian over subset-state members.
    SolveDiag(SolveDiagArgs),
    /// Measurement samples from a subset state.
    Sample(SampleArgs),
    /// Lowest eigenpairs of a Hamiltonian.
    Spectrum(SpectrumArgs),
    /// Check every claim of a guided instance.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct AcceptArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub input: String,
}

#[derive(Args, Debug, Serialize)]
pub struct AmplifyArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub rounds: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct CompileArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub input: String,
    #[arg(long = "pre-idle", default_value_t = 0)]
    pub pre_idle: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct GuideArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub input: String,
    #[arg(long = "pre-idle", default_value_t = 0)]
    pub pre_idle: usize,
    /// Truncation time Q of the guide.
    #[arg(long)]
    pub truncation: usize,
    /// Δ as a multiple of 112·K̂³.
    #[arg(long = "delta-factor", default_value_t = 1.0)]
    pub delta_factor: f64,
    /// f such that the circuit errs with probability at most 2^-f.
    #[arg(long = "error-exponent", default_value_t = 2)]
    pub error_exponent: u32,
    /// Slack constant C in the thresholds' C/Δ term.
    #[arg(long, default_value_t = stoqforge::hamiltonian::DEFAULT_SLACK)]
    pub slack: f64,
    #[arg(long, value_enum, default_value_t = Encoding::Isometric)]
    pub encoding: Encoding,
    /// Use this ε instead of measuring ‖ξ − η‖.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long = "gap-budget", default_value_t = 0.0)]
    pub gap_budget: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct PinArgs {
    #[arg(long)]
    pub ham: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct SolveDiagArgs {
    #[arg(long)]
    pub ham: PathBuf,
    #[arg(long)]
    pub subset: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub ham: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_ERROR;
    }
    match commands::execute(&cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {value:?}"))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

//! Command-line front end: argument parsing, command dispatch and result documents.

pub mod args;
mod commands;
pub mod document;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quartic_core::continuation::{ParameterBox, PathSpec};
use quartic_core::spectral::{NewtonSettings, SpectrumSettings, DEFAULT_TOL};
use quartic_core::{Complex64, Parity};
use serde_json::Value;
use thiserror::Error;

use document::{CommandEcho, ResultDocument, Status, Tolerances};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Compute(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<quartic_core::Error> for CliError {
    fn from(e: quartic_core::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "quartic", version, about = "Spectra, continuation and monodromy of the quartic oscillator")]
pub struct Cli {
    /// Directory receiving `<command>.json`.
    #[arg(long, global = true, env = "QUARTIC_OUT_DIR", default_value = "quartic-out")]
    pub out_dir: PathBuf,
    /// Relative tolerance of the ODE integrator.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for sample placement.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
    Both,
}

impl ParityArg {
    fn parities(self) -> Vec<Parity> {
        match self {
            ParityArg::Even => vec![Parity::Even],
            ParityArg::Odd => vec![Parity::Odd],
            ParityArg::Both => vec![Parity::Even, Parity::Odd],
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues with labels 0..=n_max at one value of alpha.
    Spectrum(SpectrumArgs),
    /// Continue one eigenvalue along a path in the alpha-plane.
    Continue(ContinueArgs),
    /// Permutation of labels after one traversal of a closed loop.
    Monodromy(MonodromyArgs),
    /// Locate branch points inside a box of the alpha-plane.
    BranchScan(BranchScanArgs),
    /// Convert between the beta-form and the alpha-form of the problem.
    Scale(ScaleArgs),
    /// Apply a word of s-moves to a tree state.
    TreesAct(TreesActArgs),
    /// Bounded orbit of a tree state over i.
    TreesOrbit(TreesOrbitArgs),
    /// Run the acceptance checks and print a pass/fail table.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Continue(_) => "continue",
            Command::Monodromy(_) => "monodromy",
            Command::BranchScan(_) => "branch-scan",
            Command::Scale(_) => "scale",
            Command::TreesAct(_) => "trees-act",
            Command::TreesOrbit(_) => "trees-orbit",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_parser = args::parse_complex, allow_hyphen_values = true)]
    pub alpha: Complex64,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t = ParityArg::Both)]
    pub parity: ParityArg,
}

#[derive(Debug, Args)]
pub struct ContinueArgs {
    /// Path as JSON, or `@file`.
    #[arg(long, value_parser = args::parse_path)]
    pub path: PathSpec,
    /// Eigenvalue at the start of the path.
    #[arg(long, value_parser = args::parse_complex, allow_hyphen_values = true)]
    pub start: Complex64,
    /// Parity of the eigenfunction; inferred from the determinants when omitted.
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
}

#[derive(Debug, Args)]
pub struct MonodromyArgs {
    /// Closed loop as JSON, or `@file`; its start is the base point.
    #[arg(long = "loop", value_parser = args::parse_path)]
    pub path: PathSpec,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t = ParityArg::Both)]
    pub parity: ParityArg,
}

#[derive(Debug, Args)]
pub struct BranchScanArgs {
    /// `re_min,re_max,im_min,im_max`.
    #[arg(long = "box", value_parser = args::parse_box, allow_hyphen_values = true)]
    pub region: ParameterBox,
    /// Cells per side of the scan grid (at least 8).
    #[arg(long, default_value_t = 8)]
    pub grid: usize,
    #[arg(long, default_value_t = 4)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t = ParityArg::Even)]
    pub parity: ParityArg,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "scale_input")]
pub struct ScaleArgs {
    #[arg(long, value_parser = args::parse_complex, allow_hyphen_values = true, group = "scale_input")]
    pub beta: Option<Complex64>,
    #[arg(long, value_parser = args::parse_complex, allow_hyphen_values = true, group = "scale_input")]
    pub alpha: Option<Complex64>,
    /// Also list the beta-form eigenvalues with labels 0..=n_max.
    #[arg(long)]
    pub n_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TreesActArgs {
    /// Whitespace-separated moves `s0 s0i si sii`, applied left to right.
    #[arg(long)]
    pub word: String,
    /// State such as `A[1]` or `D[2,3]`.
    #[arg(long)]
    pub state: String,
    /// Also rewrite this free-group word (e.g. `g_1 g_i^-1`) under the same moves.
    #[arg(long)]
    pub free_word: Option<String>,
}

#[derive(Debug, Args)]
pub struct TreesOrbitArgs {
    #[arg(long)]
    pub start: String,
    #[arg(long, default_value_t = 12)]
    pub bound: i64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Short tier, about two minutes.
    #[arg(long, conflicts_with = "full")]
    pub quick: bool,
    /// Complete tier, including the sample-doubling stability check.
    #[arg(long)]
    pub full: bool,
}

/// What one command produced before it is wrapped into a document.
pub(crate) struct Report {
    pub parameters: Value,
    pub payload: Value,
    pub summary: String,
    /// False when the computation ran but its outcome is a failure.
    pub ok: bool,
}

/// Result of [`run`]: the exit code and the document, when one was produced.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub document: Option<ResultDocument>,
    pub written: Option<PathBuf>,
}

pub(crate) fn settings_for(tol: f64) -> SpectrumSettings {
    SpectrumSettings {
        tol,
        newton: NewtonSettings::default(),
    }
}

fn tolerances_for(tol: f64) -> Tolerances {
    let newton = NewtonSettings::default();
    Tolerances {
        integrator: tol,
        newton_step: newton.step_tol,
        residual: newton.residual_tol,
    }
}

/// Parses `argv` (including the program name), runs the command, writes
/// `<out-dir>/<command>.json` and prints a summary to standard output.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return Outcome {
                code,
                document: None,
                written: None,
            };
        }
    };
    run_cli(cli)
}

pub fn run_cli(cli: Cli) -> Outcome {
    let fail = |e: CliError| {
        eprintln!("error: {e}");
        Outcome {
            code: e.exit_code(),
            document: None,
            written: None,
        }
    };
    if !(cli.tol > 0.0 && cli.tol < 1e-3) {
        return fail(CliError::Parse(format!("--tol must lie in (0, 1e-3), got {}", cli.tol)));
    }
    let name = cli.command.name();
    let (parameters, result) = match commands::execute(&cli) {
        Ok(report) => (report.parameters.clone(), Ok(report)),
        Err((parameters, e)) => (parameters, Err(e)),
    };
    let (status, payload, summary, code) = match result {
        Ok(r) if r.ok => (Status::Ok, r.payload, r.summary, 0),
        Ok(r) => (Status::Error, r.payload, r.summary, 1),
        Err(e @ CliError::Parse(_)) => return fail(e),
        Err(e) => {
            let msg = e.to_string();
            (Status::Error, serde_json::json!({ "error": msg }), format!("{name} failed: {msg}"), e.exit_code())
        }
    };
    let mut echo = parameters;
    if let Value::Object(map) = &mut echo {
        map.insert("out_dir".into(), Value::String(cli.out_dir.display().to_string()));
    }
    let document = match ResultDocument::new(
        CommandEcho {
            name: name.to_string(),
            parameters: echo,
        },
        status,
        payload,
        tolerances_for(cli.tol),
        cli.seed,
    ) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let written = match document.write(&cli.out_dir) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    println!("{summary}");
    println!("wrote {}", written.display());
    Outcome {
        code,
        document: Some(document),
        written: Some(written),
    }
}

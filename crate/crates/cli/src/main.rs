//! Command-line front end for the mhd2d pseudo-spectral simulator.

mod artifacts;
mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Overrides;

/// Errors surfaced to the shell: configuration problems exit with code 2,
/// everything else (I/O, verification failures) with code 1. Run outcomes
/// (positivity breach, non-finite values) are mapped to codes 3 and 4 by
/// the run subcommand itself.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Failure(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Failure(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => commands::EXIT_CONFIG,
            CliError::Failure(_) => 1,
        }
    }
}

/// Pseudo-spectral simulator for planar compressible, viscous,
/// non-resistive, heat-conducting MHD with an out-of-plane magnetic
/// component, on the unit torus.
#[derive(Parser)]
#[command(name = "mhd2d", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// TOML configuration file; built-in defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Initial-data preset; overrides the config file.
    #[arg(long)]
    preset: Option<String>,
    /// RNG seed; overrides the config file.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration; write diagnostics.csv, field snapshots
    /// and summary.json.
    Run(CommonArgs),
    /// Check the spectral operators against closed-form single-mode answers.
    VerifyOps,
    /// Evaluate the functional-inequality ensembles; write lemmas.csv.
    VerifyLemmas(CommonArgs),
    /// Integrate the same data under both formulations and compare at T.
    CrossCheck(CommonArgs),
    /// Sweep the data amplitude and tabulate fitted decay rates.
    DecayStudy(CommonArgs),
}

/// Environment variable setting the number of worker threads for internal
/// data parallelism (lemma ensembles, decay-study sweep members).
const THREADS_VAR: &str = "MHD2D_THREADS";

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v.parse().map_err(|_| {
        CliError::Config(format!("{THREADS_VAR} must be a positive integer, got '{v}'"))
    })?;
    if n == 0 {
        return Err(CliError::Config(format!(
            "{THREADS_VAR} must be a positive integer, got '{v}'"
        )));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Failure(format!("cannot build thread pool: {e}")))
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    init_threads()?;
    match cli.command {
        Command::Run(args) => {
            let cfg = load(&args, 10.0)?;
            commands::run(&cfg, &args.out)
        }
        Command::VerifyOps => commands::verify_ops(),
        Command::VerifyLemmas(args) => {
            let cfg = load(&args, 10.0)?;
            commands::verify_lemmas(&cfg, &args.out)
        }
        Command::CrossCheck(args) => {
            let cfg = load(&args, 1.0)?;
            commands::cross_check(&cfg)
        }
        Command::DecayStudy(args) => {
            let cfg = load(&args, 10.0)?;
            commands::decay_study(&cfg, &args.out)
        }
    }
}

fn load(args: &CommonArgs, default_t_end: f64) -> Result<config::Resolved, CliError> {
    let ov = Overrides {
        preset: args.preset.clone(),
        seed: args.seed,
        default_t_end,
    };
    config::load(args.config.as_deref(), &ov)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("mhd2d: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

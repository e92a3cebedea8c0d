//! Scenario configs, sweeps and the output files of the `decobec` binary.

mod config;
mod run;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{
    strip_comments, sweep_points, validate_config, CavityMethod, CavitySpec, ConfigError, ExplicitMode,
    OracleModelKind, OracleSpec, OutputFormat, OutputSpec, Scenario, ScenarioConfig, SingleWellSpec, SweepAxis,
    SweepPoint, TimeSpec, TunnelingSpec,
};
pub use run::{
    compute, resolve_out_dir, run, Column, FailureKind, PointFailure, RunManifest, RunOptions, ScenarioOutput,
    ScenarioTable, DEFAULT_OUT_DIR, OUT_DIR_ENV,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(ConfigError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "decobec",
    version,
    about = "Light-induced decoherence of a Bose-Einstein condensate"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario and write its table and manifest.
    Run(RunArgs),
    /// Check a config and print it with defaults filled in.
    Validate { config: PathBuf },
    /// Compare the closed forms against the brute-force oracle.
    OracleCheck(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub config: PathBuf,
    /// Output directory (default: config, then $DECOBEC_OUT, then ./decobec-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let raw = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(ConfigError {
            messages: vec![format!("cannot read {}: {e}", path.display())],
        })
    })?;
    validate_config(&raw).map_err(CliError::Config)
}

/// Execute a parsed command line and return the process exit code.
pub fn execute(cli: Cli) -> i32 {
    match cli.command {
        Command::Validate { config } => match load_config(&config) {
            Ok(c) => {
                println!("{}", serde_json::to_string_pretty(&c).expect("config serializes"));
                eprintln!("ok: {} (hash {})", config.display(), c.hash());
                0
            }
            Err(e) => report(&e),
        },
        Command::Run(args) => run_command(args, false),
        Command::OracleCheck(args) => run_command(args, true),
    }
}

fn report(e: &CliError) -> i32 {
    match e {
        CliError::Config(c) => {
            for m in &c.messages {
                eprintln!("config error: {m}");
            }
        }
        other => eprintln!("error: {other}"),
    }
    e.exit_code()
}

fn run_command(args: RunArgs, oracle: bool) -> i32 {
    let config = match load_config(&args.config) {
        Ok(c) => c,
        Err(e) => return report(&e),
    };
    if oracle && config.scenario != Scenario::OracleCheck {
        eprintln!(
            "config error: oracle-check needs scenario \"oracle_check\", got \"{}\"",
            config.scenario.name()
        );
        return 1;
    }
    let options = RunOptions {
        out_dir: resolve_out_dir(args.out.as_deref(), &config, Some(&args.config)),
        workers: args.workers.max(1),
        format: args.format.map(Into::into),
    };
    match run(&config, &options) {
        Ok((manifest, output)) => {
            for w in &manifest.warnings {
                eprintln!("warning: {w}");
            }
            for f in &manifest.failures {
                eprintln!("failed point {}: {}", f.point, f.message);
            }
            if let Some(d) = manifest.max_deviation {
                println!("max deviation {d:e} (bound {:e})", config.oracle.max_deviation);
            }
            for path in &manifest.outputs {
                println!("wrote {}", path.display());
            }
            output.exit_code()
        }
        Err(e) => report(&e),
    }
}

//! Command-line orchestration: config loading, the five run modes and the exit-code contract.

pub mod config;
pub mod levinson;
pub mod run;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
use config::{Mode, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "levinson-lab",
    version,
    about = "Levinson identity, spectral shift and spectral flow checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run configuration (flat TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Overrides the `seed` key.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Both sides of the Levinson identity.
    Levinson,
    /// Phase shifts, ξ and trace curves as CSV.
    Curves,
    /// Depths where a channel's growth coefficient vanishes.
    ResonanceScan,
    /// Random matrix paths and discretized Hamiltonian flows.
    FlowSuite,
    /// Trace formula check in a finite box.
    BkCheck,
}

impl Command {
    pub fn mode(self) -> Mode {
        match self {
            Command::Levinson => Mode::Levinson,
            Command::Curves => Mode::Curves,
            Command::ResonanceScan => Mode::ResonanceScan,
            Command::FlowSuite => Mode::FlowSuite,
            Command::BkCheck => Mode::BkCheck,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Configuration(_) | Error::Io { .. } => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result = (|| {
        let path = cli
            .config
            .as_ref()
            .ok_or_else(|| Error::Configuration("--config PATH is required".into()))?;
        let mut cfg = RunConfig::load(path)?;
        cfg.check_mode(cli.command.mode())?;
        if cli.seed.is_some() {
            cfg.seed = cli.seed;
        }
        if let Some(n) = cli.threads {
            if n == 0 {
                return Err(Error::Configuration("--threads must be positive".into()));
            }
            // A second call in the same process keeps the first pool.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        match cli.command {
            Command::Levinson => run::levinson_command(&cfg, &cli.out),
            Command::Curves => run::run_curves(&cfg, &cli.out),
            Command::ResonanceScan => run::run_resonance_scan(&cfg, &cli.out),
            Command::FlowSuite => run::run_flow_suite(&cfg, &cli.out),
            Command::BkCheck => run::run_bk_check(&cfg, &cli.out),
        }
    })();
    match result {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.passed {
                EXIT_OK
            } else {
                EXIT_NUMERICAL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `std::env::args` and runs; clap usage errors map to the configuration code.
pub fn main() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

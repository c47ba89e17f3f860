//! Command-line front end: `bethe verify|decompose|solve|spectrum`.

mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{cmd_decompose, cmd_solve, cmd_spectrum, cmd_verify, RunOptions};
pub use config::{Model, RunConfig, SplitSelection, Suite, Tolerances};
pub use report::{CheckRecord, Report, SolverFailureRecord, Status, Summary, SCHEMA_VERSION};

use crate::error::{Error, Result};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Operator identities: Yang-Baxter, RTT, exchange relations, vacuum, transfer commutativity.
    Verify,
    /// Reconstruct Bethe vectors from subchains and compare with the direct product.
    Decompose,
    /// Solve the Bethe equations and certify each root set.
    Solve,
    /// Dense transfer-matrix spectrum by down-spin sector.
    Spectrum,
}

#[derive(Debug, Parser)]
#[command(
    name = "bethe",
    version,
    about = "Algebraic Bethe ansatz verification for XXX/XXZ chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configuration seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Writes the JSON report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Standard output rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Records wall time per check (reports are then no longer reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
}

/// Loads the configuration and runs one command.
pub fn execute(cli: &Cli) -> Result<Report> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::ConfigInvalid("--config is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))?;
    let mut cfg = RunConfig::from_json(&text)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let opts = RunOptions {
        timings: cli.timings,
        ..RunOptions::default()
    };
    match cli.command {
        Command::Verify => cmd_verify(&cfg, &opts),
        Command::Decompose => cmd_decompose(&cfg, &opts),
        Command::Solve => cmd_solve(&cfg, &opts),
        Command::Spectrum => cmd_spectrum(&cfg, &opts),
    }
}

/// Parses arguments, runs, prints, and returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let json = report.to_json();
    let out = cli.out.clone().or_else(|| report.config.output.clone());
    if let Some(path) = out {
        if let Err(e) = std::fs::write(&path, &json) {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    let rendered = match cli.format {
        Format::Json => json,
        Format::Table => report.to_table(),
    };
    let _ = std::io::stdout().lock().write_all(rendered.as_bytes());
    if report.all_passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

//! JSON-config driven front end behind the `contact-index` binary.

mod coeff;
mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::{Error, Result};

pub use coeff::{parse_coeff_expr, CoeffExpr, CoeffProgram};
pub use commands::{cmd_cocycle, cmd_index, cmd_rockland, cmd_spectrum, cmd_weyl_check, Outcome};
pub use config::{ManifoldSpec, Outputs, Prepared, RunConfig, Schedule, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_NOT_STABILIZED: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "contact-index", version, about = "K¹ cocycles and index integrals for Heisenberg-calculus operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report destination (default: config `outputs.report`, else stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Truncation schedule `N0:N1:step`, overriding the config.
    #[arg(long, global = true)]
    pub schedule: Option<Schedule>,
    /// Mesh resolution, overriding the config.
    #[arg(long, global = true)]
    pub res: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Block spectra of π(P) per Fock degree.
    Spectrum,
    /// Rockland check of the model operator(s).
    Rockland,
    /// Cocycle a(P) over the mesh with its odd Chern character.
    Cocycle,
    /// Index integral over a truncation schedule.
    Index,
    /// Randomized identities of the Weyl sharp product.
    WeylCheck,
}

/// Process exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Degenerate(_)
        | Error::DegenerateNodes { .. }
        | Error::SingularNode { .. }
        | Error::Discontinuous(_)
        | Error::Calibration(_) => EXIT_DEGENERATE,
        Error::NotStabilized { .. } | Error::ScheduleNotStabilized(_) => EXIT_NOT_STABILIZED,
        Error::Parse { .. }
        | Error::Undeclared(_)
        | Error::Unbound(_)
        | Error::Shape(_)
        | Error::OrderViolation { .. }
        | Error::Config(_)
        | Error::Json(_)
        | Error::InvalidArgument(_)
        | Error::DimensionMismatch(_)
        | Error::Truncation { .. }
        | Error::Degree(_)
        | Error::NotClosed(_) => EXIT_PARSE,
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let path = cli.config.as_ref().ok_or_else(|| Error::Config("--config is required".into()))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(s) = cli.schedule {
        cfg.schedule = Some(s);
    }
    if let Some(res) = cli.res {
        let m = cfg.manifold.as_mut().ok_or_else(|| Error::Config("--res given but the config has no manifold".into()))?;
        m.res = res;
    }
    if let Some(out) = &cli.out {
        cfg.outputs.report = Some(out.clone());
    }
    Ok(cfg)
}

/// Executes one command and returns its outcome; the report is not written yet.
pub fn execute(cli: &Cli) -> Result<(Outcome, Option<PathBuf>)> {
    if cli.command == Command::WeylCheck {
        let n = match &cli.config {
            Some(_) => load_config(cli)?.n,
            None => 1,
        };
        return Ok((cmd_weyl_check(n, cli.seed, 100)?, cli.out.clone()));
    }
    let cfg = load_config(cli)?;
    let outcome = match cli.command {
        Command::Spectrum => cmd_spectrum(&cfg)?,
        Command::Rockland => cmd_rockland(&cfg)?,
        Command::Cocycle => cmd_cocycle(&cfg)?,
        Command::Index => cmd_index(&cfg)?,
        Command::WeylCheck => unreachable!(),
    };
    Ok((outcome, cfg.outputs.report.clone()))
}

fn emit(report: &serde_json::Value, dest: Option<&PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    match dest {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Full CLI run: execute, write the report, print diagnostics, return the exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok((outcome, dest)) => {
            if let Err(e) = emit(&outcome.report, dest.as_ref()) {
                eprintln!("error: {e}");
                return exit_code(&e);
            }
            if let Some(msg) = &outcome.message {
                eprintln!("error: {msg}");
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

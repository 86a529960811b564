//! Command-line front end: `hyperctl <command> [options]`.
//!
//! Without `--config` the built-in calibration system is used. Flags
//! override the corresponding configuration entries. Exit status is 0 on
//! success, 1 when a study assertion fails and 2 on any error.

mod config;
mod dispatch;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{
    config_error, load_config, parse_config, parse_config_with_base, serialize_config,
    ConfigError, ControlMode, DataSpec, RunConfig,
};
pub use dispatch::{dispatch, run_study, Command, Outcome, STUDY_NAMES};

use crate::experiments::calibration_system;

#[derive(Debug, Parser)]
#[command(name = "hyperctl", version, about = "Boundary controllability of 1D linear hyperbolic systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    /// Configuration file (TOML)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of grid cells
    #[arg(long, global = true)]
    pub nx: Option<usize>,
    /// Courant number in (0, 1]
    #[arg(long, global = true)]
    pub cfl: Option<f64>,
    /// Horizon
    #[arg(long = "T", global = true)]
    pub horizon: Option<f64>,
    /// Regularization relative to the Gramian norm
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// null or exact
    #[arg(long, global = true)]
    pub mode: Option<ControlMode>,
    /// Keep every time level and write trajectory.csv
    #[arg(long, global = true)]
    pub store_trajectory: bool,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Travel times, optimal time and Russell time
    Times,
    /// Class membership of the boundary matrix
    CheckB,
    /// Forward simulation
    Simulate,
    /// HUM control synthesis
    Control,
    /// Observability constant at one horizon
    Observability,
    /// Observability constant over several horizons
    Scan,
    /// Duality gap between the control map and its adjoint
    Duality,
    /// Run a named study
    Study { name: String },
}

impl CliCommand {
    fn to_command(&self) -> Command {
        match self {
            Self::Times => Command::Times,
            Self::CheckB => Command::CheckB,
            Self::Simulate => Command::Simulate,
            Self::Control => Command::Control,
            Self::Observability => Command::Observability,
            Self::Scan => Command::Scan,
            Self::Duality => Command::Duality,
            Self::Study { name } => Command::Study(name.clone()),
        }
    }
}

fn apply_overrides(cli: &Cli, cfg: &mut RunConfig) -> crate::Result<()> {
    if let Some(v) = &cli.out {
        cfg.out_dir = v.clone();
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.nx {
        cfg.nx = v;
    }
    if let Some(v) = cli.cfl {
        cfg.cfl = v;
    }
    if let Some(v) = cli.horizon {
        if !(v > 0.0) {
            return Err(crate::Error::Config(format!("--T must be positive, got {v}")));
        }
        cfg.horizon = Some(v);
    }
    if let Some(v) = cli.eps {
        if !(v >= 0.0) {
            return Err(crate::Error::Config(format!("--eps must be nonnegative, got {v}")));
        }
        cfg.eps = v;
    }
    if let Some(v) = cli.mode {
        cfg.mode = v;
    }
    if cli.store_trajectory {
        cfg.store_trajectory = true;
    }
    cfg.grid()?;
    Ok(())
}

/// Parse arguments, run the command and return the exit status.
pub fn run<I, T>(args: I, console: &mut dyn Write, errors: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(errors, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let loaded = match &cli.config {
        Some(path) => load_config(path),
        None => Ok((RunConfig::default(), calibration_system())),
    };
    let result = loaded.and_then(|(mut cfg, system)| {
        apply_overrides(&cli, &mut cfg)?;
        dispatch(&cli.command.to_command(), &cfg, &system, console)
    });
    match result {
        Ok(Outcome::Passed) => 0,
        Ok(Outcome::AssertionFailed) => {
            let _ = writeln!(errors, "assertion failed");
            1
        }
        Err(e) => {
            let _ = writeln!(errors, "error: {e}");
            2
        }
    }
}

//! Command-line front end: configuration, state export, parameter sweeps,
//! plot data and the verification suite.

pub mod commands;
pub mod config;
pub mod error;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use landau_gk::model::{GaugeChoice, SpectrumMode};
use landau_gk::verify::CheckGroup;

use crate::commands::Outcome;
use crate::config::{Overrides, RunConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Shifted,
    Unshifted,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GaugeArg {
    Gauge1,
    Gauge2,
}

#[derive(Debug, Parser)]
#[command(
    name = "landau-gk",
    version,
    about = "Coherent states for an electron in crossed magnetic and electric fields"
)]
pub struct Cli {
    /// JSON run configuration; every field is optional.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, global = true, value_enum)]
    pub gauge: Option<GaugeArg>,
    /// Energy quantum ħω_c; rescales ħ.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Discrete cutoff for built states and the resolution check.
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Tolerance override, e.g. `--tol laguerre=1e-6` or `--tol all=0`.
    #[arg(long = "tol", global = true, value_name = "NAME=VAL")]
    pub tol: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies over n, l and α.
    Spectrum,
    /// Build one combined state and export it.
    CsBuild,
    /// Run the verification suite.
    Verify {
        /// Groups to run, comma separated; replaces `verify.checks`.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Keep wall times in the report.
        #[arg(long)]
        include_runtime: bool,
    },
    /// Plane eigenfunction on a grid.
    Wavefunction,
    /// Combined states over a (J, K) label grid.
    Sweep,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            mode: self.mode.map(|m| match m {
                ModeArg::Shifted => SpectrumMode::Shifted,
                ModeArg::Unshifted => SpectrumMode::Unshifted,
            }),
            gauge: self.gauge.map(|g| match g {
                GaugeArg::Gauge1 => GaugeChoice::Gauge1,
                GaugeArg::Gauge2 => GaugeChoice::Gauge2,
            }),
            kappa: self.kappa,
            cutoff: self.cutoff,
            out_dir: self.out.clone(),
            tolerances: self.tol.clone(),
        }
    }

    /// The validated configuration this invocation runs with.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        cfg.apply(&self.overrides())?;
        if let Command::Verify {
            checks,
            include_runtime,
        } = &self.command
        {
            if !checks.is_empty() {
                cfg.verify.checks = checks
                    .iter()
                    .map(|c| c.trim().parse::<CheckGroup>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| CliError::field("verify.checks", e.to_string()))?;
            }
            cfg.verify.include_runtime |= include_runtime;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let cfg = cli.resolve()?;
    match cli.command {
        Command::Spectrum => commands::spectrum(&cfg),
        Command::CsBuild => commands::cs_build(&cfg),
        Command::Verify { .. } => commands::verify(&cfg),
        Command::Wavefunction => commands::wavefunction(&cfg),
        Command::Sweep => commands::sweep(&cfg),
    }
}

/// Runs the command, reports on stdout/stderr and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(out) => {
            for line in &out.summary {
                println!("{line}");
            }
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            out.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

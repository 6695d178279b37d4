//! The `darboux` command line: argument parsing and exit codes.
//!
//! Exit codes: 0 when every check passes (or the verb has no checks),
//! 1 when a check fails or the run itself fails, 2 for configuration errors.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub use commands::{
    propagation_checks, run_figures, run_potential, run_propagate, run_states, run_validate,
    validation_battery, Report, SCHEMA_VERSION,
};
pub use config::{parse_config, FigurePreset, Perturbation, PropagationConfig, RunConfig};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "darboux",
    version,
    about = "Deformed oscillator potentials, their solutions, and the checks behind them"
)]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `outputs` in the configuration.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Figure preset (fig1a, fig1b, fig2-upper, fig2-lower); overrides the
    /// configuration's parameters and times.
    #[arg(long, global = true)]
    pub preset: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Verb {
    /// V1 on the grid at each time.
    Potential,
    /// |psi|^2 of the plotted states at each time, with zero census.
    States,
    /// The full residual battery; writes validate.json.
    Validate,
    /// Split-step evolution against the closed-form states; writes propagate.json.
    Propagate,
    /// Potential and state data for a preset.
    Figures,
}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

/// Configuration from the file and flags, with presets applied.
pub fn load_config(cli: &Cli) -> Result<RunConfig> {
    let preset = cli
        .preset
        .as_deref()
        .map(str::parse::<FigurePreset>)
        .transpose()?;
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            let mut cfg = parse_config(&text)?;
            if let Some(p) = preset {
                cfg.params = p.params();
                cfg.times = FigurePreset::times();
                cfg.figure_preset = Some(p);
                cfg.transform()?;
            }
            cfg
        }
        None => match preset {
            Some(p) => RunConfig::from_preset(p)?,
            None => {
                return Err(Error::Config {
                    field: "--config".into(),
                    reason: "give a configuration file or --preset".into(),
                })
            }
        },
    };
    if let Some(out) = &cli.out {
        cfg.outputs = out.clone();
    }
    if cli.verb == Verb::Figures && cfg.figure_preset.is_none() {
        return Err(Error::Config {
            field: "figure_preset".into(),
            reason: "`figures` needs a preset".into(),
        });
    }
    Ok(cfg)
}

fn print_report(report: &Report) {
    for c in &report.checks {
        let verdict = if c.pass { "pass" } else { "FAIL" };
        println!(
            "{verdict}  {:<44} {:.3e} (tol {:.1e})",
            c.name,
            c.measured(),
            c.tolerance
        );
    }
    let failed = report.failures().count();
    if failed > 0 {
        eprintln!("{failed} check(s) failed:");
        for c in report.failures() {
            eprintln!(
                "  {}{}",
                c.name,
                c.note
                    .as_deref()
                    .map(|n| format!(": {n}"))
                    .unwrap_or_default()
            );
        }
    }
}

/// Runs one invocation and returns its exit code.
pub fn run(cli: &Cli) -> u8 {
    let cfg = match load_config(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let outcome = match cli.verb {
        Verb::Potential => run_potential(&cfg).map(|files| (files, None)),
        Verb::States => run_states(&cfg).map(|files| (files, None)),
        Verb::Figures => run_figures(&cfg).map(|files| (files, None)),
        Verb::Validate => run_validate(&cfg).map(|(r, path)| (vec![path], Some(r))),
        Verb::Propagate => run_propagate(&cfg).map(|(r, path)| (vec![path], Some(r))),
    };
    match outcome {
        Ok((files, report)) => {
            if let Some(r) = &report {
                print_report(r);
            }
            for f in files {
                println!("wrote {}", f.display());
            }
            match report {
                Some(r) if !r.pass => EXIT_CHECK_FAILED,
                _ => EXIT_PASS,
            }
        }
        Err(e @ Error::Config { .. }) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CHECK_FAILED
        }
    }
}

pub fn main() -> ExitCode {
    ExitCode::from(run(&Cli::parse()))
}

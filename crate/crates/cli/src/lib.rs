//! Command-line front end for `hyperspectra`: configuration, Monte Carlo
//! orchestration and report emission.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::Outcome;
use crate::config::{Config, Format, Overrides};
use crate::error::{CliError, CliResult};
use crate::report::{to_json, write_file};

#[derive(Debug, Parser)]
#[command(name = "hyperspectra", version, about = "Spectra of non-uniform random hypergraphs")]
pub struct Cli {
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Theory report: derived statistics, covariance profile, regime, tail diagnostics, bound
    Analyze,
    /// Draw one hypergraph and write it in the text format
    Sample,
    /// Eigenvalues of the centered, scaled adjacency matrix of a hypergraph file
    Spectrum {
        /// Hypergraph text file
        input: PathBuf,
    },
    /// Averaged spectra over independent trials, compared with the semicircle law
    Montecarlo,
    /// Covariance profile and coefficients of the Gaussian surrogate
    Gaussian,
    /// Exact enumeration against closed forms and Monte Carlo on a tiny model
    Verify,
}

fn json_only(cfg: &Config, what: &str) -> CliResult<()> {
    match cfg.format {
        Some(Format::Csv) => Err(CliError::Config(format!("{what} only supports --format json"))),
        _ => Ok(()),
    }
}

pub fn execute(command: &Command, cfg: &Config) -> CliResult<Outcome> {
    match command {
        Command::Analyze => {
            json_only(cfg, "analyze")?;
            let report = commands::analyze(&cfg.params()?, cfg)?;
            let text = to_json(&report);
            if let Some(path) = commands::out_path(cfg, "analyze.json") {
                write_file(&path, &text)?;
            }
            Ok(Outcome::ok(text))
        }
        Command::Sample => Ok(commands::sample(cfg)?.1),
        Command::Spectrum { input } => Ok(commands::spectrum(cfg, input)?.1),
        Command::Montecarlo => {
            let run = commands::run_montecarlo(&cfg.params()?, cfg)?;
            Ok(Outcome::ok(match cfg.format {
                Some(Format::Csv) => commands::histogram_csv(&run.report),
                _ => to_json(&run.report),
            }))
        }
        Command::Gaussian => {
            json_only(cfg, "gaussian")?;
            Ok(Outcome::ok(to_json(&commands::gaussian(cfg)?)))
        }
        Command::Verify => {
            json_only(cfg, "verify")?;
            let v = commands::verify(&cfg.params()?, cfg)?;
            let text = to_json(&v.report);
            if let Some(path) = commands::out_path(cfg, "verify.json") {
                write_file(&path, &text)?;
            }
            let error = (!v.passed()).then(|| CliError::Verify(v.diff()));
            Ok(Outcome { stdout: text, error })
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = Config::resolve(&cli.overrides).and_then(|cfg| {
        let out = execute(&cli.command, &cfg)?;
        Ok((cfg.quiet, out))
    });
    match outcome {
        Ok((quiet, out)) => {
            if !quiet {
                print!("{}", out.stdout);
            }
            match out.error {
                None => 0,
                Some(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

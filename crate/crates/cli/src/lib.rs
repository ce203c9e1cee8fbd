//! Command-line front end: grid classification to CSV, spectra, exceptional
//! points and Hermitian counterparts as JSON, and the self-verification run.

pub mod commands;
pub mod config;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use deformed_e2::verify::{run_verify, Faults, Suite, VerifyOptions, VerifyReport};
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "e2pt", version, about = "Deformed E2 PT-symmetric Hamiltonians: scans, spectra, checks")]
pub struct Cli {
    /// Worker threads for grid scans (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// JSON scan configuration.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// Override a config field, e.g. `--set theta=2` or `--set axes.0.steps=11`.
    #[arg(long = "set", value_name = "PATH=VALUE")]
    pub overrides: Vec<String>,
    /// Write here instead of the config's `output` (or stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify every grid point and emit CSV.
    Classify(ConfigArgs),
    /// Diagonalize one Hamiltonian in a matrix representation and emit JSON.
    Spectrum(ConfigArgs),
    /// Locate an exceptional point by bisection along one parameter.
    Ep(ConfigArgs),
    /// Solve for the Dyson map and emit the Hermitian counterpart.
    Hermitize(ConfigArgs),
    /// Run the identity suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated suites to run: algebra, adjoint, constraints, pt5, ep, spectral, toy.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Print the summary as JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON summary to this file.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
    /// Deliberately break a closed form to check the suite notices.
    #[arg(long, value_name = "FAULT", value_parser = ["adjoint-theta"])]
    pub inject_fault: Option<String>,
    #[arg(long, default_value_t = VerifyOptions::default().seed)]
    pub seed: u64,
}

fn write_output(text: &str, flag: Option<&Path>, config: Option<&Path>) -> Result<(), CliError> {
    match flag.or(config) {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn report_json(report: &VerifyReport) -> serde_json::Value {
    let checks: Vec<_> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "suite": c.suite.name(),
                "name": c.name,
                "passed": c.passed,
                "worst": if c.worst.is_finite() { json!(c.worst) } else { json!(c.worst.to_string()) },
                "tolerance": c.tolerance,
                "draws": c.draws,
                "offending": c.offending,
            })
        })
        .collect();
    json!({ "passed": report.passed(), "failed": report.failures().count(), "checks": checks })
}

fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let suites = if args.only.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.only.iter().map(|s| s.parse::<Suite>().map_err(|e| CliError::Config(e.to_string()))).collect::<Result<_, _>>()?
    };
    let faults = Faults { adjoint_theta_shift: if args.inject_fault.is_some() { 1e-3 } else { 0.0 } };
    let report = run_verify(&VerifyOptions { suites, faults, seed: args.seed });
    let js = commands::to_json(&report_json(&report));
    if args.json {
        print!("{js}");
    } else {
        println!("{report}");
    }
    if let Some(p) = &args.json_out {
        std::fs::write(p, &js)?;
    }
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<String> = report.failures().map(|c| format!("[{}] {}", c.suite, c.name)).collect();
        Err(CliError::Verify(names.join("; ")))
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let threads = cli.threads.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    if threads == 0 {
        return Err(CliError::Config("--threads must be positive".into()));
    }
    match &cli.command {
        Command::Verify(args) => verify(args),
        Command::Classify(a) | Command::Spectrum(a) | Command::Ep(a) | Command::Hermitize(a) => {
            let cfg = config::load(a.config.as_deref(), &a.overrides)?;
            let text = match &cli.command {
                Command::Classify(_) => {
                    let (csv, failures) = commands::classify(&cfg, threads)?;
                    write_output(&csv, a.output.as_deref(), cfg.output.as_deref())?;
                    if failures > 0 {
                        return Err(CliError::Numeric(format!("{failures} grid points failed")));
                    }
                    return Ok(());
                }
                Command::Spectrum(_) => commands::spectrum(&cfg)?,
                Command::Ep(_) => commands::ep(&cfg)?,
                _ => commands::hermitize(&cfg)?,
            };
            write_output(&text, a.output.as_deref(), cfg.output.as_deref())
        }
    }
}

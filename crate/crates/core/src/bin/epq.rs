use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use epq_rework::scenario::{exit_code, run_export, run_solve, run_validate, to_json, to_text, write_atomic, Scenario};
use epq_rework::Result;

/// Lot sizing for imperfect production with rework, deteriorating stock and backlogging.
#[derive(Parser)]
#[command(name = "epq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a scenario and print the optimal cycle.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Solve complete backlogging numerically, as if it were partial.
        #[arg(long)]
        force_partial: bool,
    },
    /// Compare the closed-form cycle with the optimum of the exact cost.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Write the inventory trajectory of the optimal cycle as CSV.
    Export {
        #[arg(long)]
        scenario: PathBuf,
        /// Sampling step; defaults to the scenario's step or 1/1000 of the cycle.
        #[arg(long)]
        step: Option<f64>,
        /// CSV destination; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scenario: PathBuf,
    /// Also write the report as JSON to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

fn emit<T: Serialize>(report: &T, common: &Common) -> Result<()> {
    let json = to_json(report)?;
    if let Some(path) = &common.out {
        write_atomic(path, json.as_bytes())?;
    }
    if common.json {
        print!("{json}");
    } else {
        print!("{}", to_text(report)?);
    }
    Ok(())
}

fn load(path: &Path) -> Result<Scenario> {
    Scenario::load(path)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve { common, force_partial } => {
            let mut scenario = load(&common.scenario)?;
            scenario.options.force_partial |= force_partial;
            emit(&run_solve(&scenario)?, &common)
        }
        Command::Validate { common } => emit(&run_validate(&load(&common.scenario)?)?, &common),
        Command::Export { scenario, step, out } => {
            let csv = run_export(&load(&scenario)?, step)?;
            match out {
                Some(path) => write_atomic(&path, &csv),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(&csv).map_err(Into::into)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quench_core::run::{figure_runs, run_to_file};
use quench_core::validate::run_validation;
use quench_core::{QuenchError, RunConfig, Threads};

const EXIT_VALIDATION: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Exact multi-quench dynamics of a periodic harmonic chain.
#[derive(Debug, Parser)]
#[command(name = "quench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one JSON configuration and write its CSV series.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the oracle suite and report each residual.
    Validate,
    /// Write the series behind one figure using its parameter preset.
    Figures {
        /// Supplies the output path stem, dt, ratio_delta and threads.
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=6))]
        figure: u32,
    },
}

fn exit_code(err: &QuenchError) -> u8 {
    match err {
        QuenchError::Numerical { .. } => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

fn load(path: &Path) -> Result<(RunConfig, usize), QuenchError> {
    let config = RunConfig::load(path)?;
    for w in config.validate()? {
        eprintln!("warning: {w}");
    }
    let threads = match std::env::var("THREADS") {
        Ok(v) => Threads::parse(&v)?,
        Err(_) => config.threads,
    };
    Ok((config, threads.resolve()))
}

fn simulate(path: &Path) -> Result<(), QuenchError> {
    let (config, threads) = load(path)?;
    let rows = run_to_file(&config, threads, &[])?;
    eprintln!("wrote {rows} rows to {}", config.output_path.display());
    Ok(())
}

fn figures(path: &Path, figure: u32) -> Result<(), QuenchError> {
    let (base, threads) = load(path)?;
    for run in figure_runs(&base, figure)? {
        let rows = run_to_file(&run.config, threads, &run.comments)?;
        eprintln!("figure {figure} {}: wrote {rows} rows to {}", run.label, run.config.output_path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Validate => {
            let results = run_validation(|r| println!("{r}"));
            let failed: Vec<_> = results.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
            if failed.is_empty() {
                println!("all {} checks passed", results.len());
                return ExitCode::SUCCESS;
            }
            eprintln!("failed checks: {}", failed.join(", "));
            return ExitCode::from(EXIT_VALIDATION);
        }
        Command::Simulate { config } => simulate(&config),
        Command::Figures { config, figure } => figures(&config, figure),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

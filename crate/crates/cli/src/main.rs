//! Command-line front end: reproduces the library's experiment families
//! from declarative JSON configs with full reproducibility metadata.

mod config;
mod error;
mod output;
mod runner;
mod state_spec;
mod summarize;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use zenochain::Boundary;

use config::FileConfig;
use error::CliError;

#[derive(Parser)]
#[command(
    name = "zenochain",
    version,
    about = "Measurement-driven spin-chain experiments: polaron formation, \
             subspace scans, and state distillation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario described by a JSON config file.
    Run {
        /// Path to the scenario config.
        config: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate non-decaying subspace dimensions over chain sizes.
    Scan {
        /// Inclusive size range, e.g. 3..12.
        #[arg(long)]
        n: String,
        /// Boundary condition: periodic or open.
        #[arg(long, default_value = "periodic")]
        boundary: String,
        /// Write the table to this directory as CSV/JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify and aggregate manifests from previous runs.
    Summarize {
        /// Run directories containing manifests.
        dirs: Vec<PathBuf>,
        /// Write the aggregate CSV to this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, seed, out } => {
            let mut file_config = FileConfig::load(&config)?;
            if let Some(seed) = seed {
                file_config.seed = seed;
            }
            let dir = output::resolve_output_dir(&file_config, out.as_deref())?;
            let manifest = runner::run_scenario(&file_config, &dir)?;
            println!(
                "{}: wrote {} output file(s) to {} in {} ms",
                file_config.scenario.name(),
                manifest.outputs.len(),
                dir.display(),
                manifest.duration_ms
            );
            for (key, value) in &manifest.results {
                println!("  {key} = {value}");
            }
            Ok(())
        }
        Command::Scan { n, boundary, out } => {
            let (lo, hi) = config::parse_range(&n).ok_or_else(|| {
                CliError::Config(format!("invalid range {n:?} (expected lo..hi)"))
            })?;
            let boundary = Boundary::from_str(&boundary)?;
            let sizes: Vec<usize> = (lo..=hi).collect();
            let positions: Vec<usize> = match boundary {
                Boundary::Periodic => vec![1],
                Boundary::Open => (1..=hi).collect(),
            };
            let table =
                zenochain::subspace::nondecaying_dimension_scan(&sizes, boundary, &positions)?;
            println!("n_spins,boundary,probe_site,dimension");
            for entry in &table {
                println!(
                    "{},{},{},{}",
                    entry.n_spins, entry.boundary, entry.probe_site, entry.dimension
                );
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)
                    .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
                let rows: Vec<String> = table
                    .iter()
                    .map(|e| {
                        format!(
                            "{},{},{},{}",
                            e.n_spins, e.boundary, e.probe_site, e.dimension
                        )
                    })
                    .collect();
                output::write_csv(
                    &dir,
                    "dimensions.csv",
                    "n_spins,boundary,probe_site,dimension",
                    &rows,
                )?;
            }
            Ok(())
        }
        Command::Summarize { dirs, out } => {
            let report = summarize::summarize(&dirs, out.as_deref())?;
            println!("{report}");
            Ok(())
        }
    }
}

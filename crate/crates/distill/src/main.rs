use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use distill::monotone::{evaluate_file, Measure};
use distill::oracle_check::run_oracle_validation;
use distill::runner::{simulate, SimulateOptions};
use distill::CliError;

/// Deterministic sweeps and resource-measure evaluation for mixtures of
/// Gaussian bosonic states.
#[derive(Parser)]
#[command(
    name = "distill",
    version,
    about,
    after_help = "Config defaults: delta_prime = e^{-r} per round, grid_points = 64, \
prune_tol = 1e-12, output = sweep.csv. Config keys: protocol, r, p, d_over_sigma, \
N_list (multi-copy), transmissivity_list or t_list (one-shot), delta_prime, \
grid_points, prune_tol, output. Lists use [a, b, c]; linear grids use \
(start, stop, count). Exit codes: 0 success, 2 configuration error, 3 engine error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file and write a CSV table.
    Simulate {
        /// Path of the flat key = value config file.
        config: PathBuf,
        /// Write the table here instead of the config's `output` path.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Override the conditioning grid's node count (minimum 8).
        #[arg(long)]
        grid_points: Option<usize>,
        /// Suppress the summary line on standard output.
        #[arg(long)]
        quiet: bool,
    },
    /// Evaluate a resource measure on a state or mixture file.
    Monotone {
        /// One of: kappa_squeeze, kappa_ent, kappa_tilde_squeeze,
        /// kappa_tilde_ent, m_var, m_var_bar.
        measure: String,
        /// State file ("n_modes …") or mixture file ("branches …").
        file: PathBuf,
    },
    /// Internal validation suites.
    #[command(hide = true)]
    Validate {
        /// What to validate; only "oracle" exists.
        #[arg(value_parser = ["oracle"])]
        target: String,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config, output, grid_points, quiet } => {
            let opts = SimulateOptions { output, grid_points, quiet };
            simulate(&config, &opts, &mut std::io::stdout())?;
            Ok(())
        }
        Command::Monotone { measure, file } => {
            let measure: Measure = measure.parse()?;
            println!("{}", evaluate_file(measure, &file)?);
            Ok(())
        }
        Command::Validate { target: _ } => {
            let deviations = run_oracle_validation()?;
            let mut all_ok = true;
            for dev in &deviations {
                println!("{dev}");
                all_ok &= dev.ok();
            }
            if all_ok {
                println!("oracle validation passed");
                Ok(())
            } else {
                Err(CliError::Engine(
                    "oracle validation failed: deviation above tolerance".into(),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

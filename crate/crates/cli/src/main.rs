//! `smoothcal`: batch runner for smoothness-index experiments.
//!
//! Exit codes: 0 success, 2 configuration or input error, 3 numeric
//! failure, 4 I/O failure.

mod config;
mod error;
mod fit;
mod output;
mod simulate;
mod tailcheck;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use smoothcal::fit::Family;

use crate::config::Overrides;
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "smoothcal", version, about = "Smoothness-index simulations, fits and tail checks")]
struct Cli {
    /// Override the seed of the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the number of replications of the configuration.
    #[arg(long, global = true)]
    reps: Option<usize>,
    /// Print nothing on success.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run seeded replications and write trajectories, summaries and selections.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Fit a smoothness model to a `N,rho_hat` trajectory file.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare empirical deviation tails with the Gaussian and non-asymptotic bounds.
    Tailcheck {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    QuasiPower,
    QuasiExp,
}

/// Progress messages, silenced by `--quiet`.
pub struct Report {
    quiet: bool,
}

impl Report {
    pub fn wrote(&self, path: &Path) {
        if !self.quiet {
            println!("wrote {}", path.display());
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let report = Report { quiet: cli.quiet };
    let overrides = Overrides { seed: cli.seed, replications: cli.reps };
    match cli.command {
        Command::Simulate { config } => simulate::run(&config::load(&config, overrides)?, &report),
        Command::Tailcheck { config } => tailcheck::run(&config::load(&config, overrides)?, &report),
        Command::Fit { input, family, out } => {
            if cli.seed.is_some() || cli.reps.is_some() {
                return Err(CliError::config("--seed/--reps", "fit is deterministic and takes neither"));
            }
            let traj = fit::read_trajectory(&input)?;
            let family = match family {
                FamilyArg::QuasiPower => Family::QuasiPower,
                FamilyArg::QuasiExp => Family::QuasiExp,
            };
            fit::fit_and_write(&traj, family, &out, &report).map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("smoothcal: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! Command-line front end for `usd-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod record;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{SweepParam, SweepSpec, Which};
use config::RunConfig;
use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "usd", version, about = "Optimal unambiguous receiver for two coherent states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConstructionArg {
    Analytic,
    Ancilla,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the receiver POVM and report its diagnostics.
    Povm {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        construction: ConstructionArg,
        /// Also write every element as a dense matrix text file.
        #[arg(long)]
        dump: bool,
    },
    /// Outcome probabilities for both sent states.
    Probs { config: PathBuf },
    /// Monte Carlo detector clicks against the closed forms.
    Simulate {
        config: PathBuf,
        /// Trials per sent state.
        #[arg(long)]
        trials: u64,
    },
    /// Run the time-multiplexed key-distribution link.
    Multiplex { config: PathBuf },
    /// Sweep one parameter and tabulate inconclusive rates.
    Sweep {
        config: PathBuf,
        /// One of eta, T, gamma_mag, alpha_separation.
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Add a Monte Carlo column with this many trials (or rounds) per point.
        #[arg(long)]
        trials: Option<u64>,
    },
}

/// Execute a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let (stem, path) = match &cli.command {
        Command::Povm { config, .. } => ("povm", config),
        Command::Probs { config } => ("probs", config),
        Command::Simulate { config, .. } => ("simulate", config),
        Command::Multiplex { config } => ("multiplex", config),
        Command::Sweep { config, .. } => ("sweep", config),
    };
    // argument checks come before the config so usage errors are reported first
    let param = match &cli.command {
        Command::Sweep { param, .. } => Some(param.parse::<SweepParam>()?),
        _ => None,
    };
    let cfg = RunConfig::load(path)?;
    let record = match cli.command {
        Command::Povm { construction, dump, .. } => {
            let which = match construction {
                ConstructionArg::Analytic => Which::Analytic,
                ConstructionArg::Ancilla => Which::Ancilla,
                ConstructionArg::Both => Which::Both,
            };
            commands::povm(&cfg, which, dump)?
        }
        Command::Probs { .. } => commands::probs(&cfg)?,
        Command::Simulate { trials, .. } => commands::simulate(&cfg, trials)?,
        Command::Multiplex { .. } => commands::multiplex(&cfg)?,
        Command::Sweep { from, to, steps, trials, .. } => commands::sweep(
            &cfg,
            &SweepSpec {
                param: param.ok_or_else(|| CliError::Usage("missing --param".into()))?,
                from,
                to,
                steps,
                trials,
            },
        )?,
    };
    for path in record.emit(stem, cfg.format, cfg.output_dir.as_deref())? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

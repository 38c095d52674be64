//! `memwin`: simulate memristors under periodic drives, locate their
//! time-averaged attractors, sweep pulse strengths, tabulate potentials and
//! classify window functions.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 1 anything else
//! (such as an unwritable output file).

mod commands;
mod manifest;
mod params;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{AttractorArgs, ClassifyArgs, Common, PotentialArgs, SimulateArgs, SweepArgs};

#[derive(Parser, Debug)]
#[command(
    name = "memwin",
    version,
    about = "Memristor window-function dynamics under periodic drives"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate x(t) and its one-period moving average; one CSV per initial state.
    #[command(allow_negative_numbers = true)]
    Simulate(SimulateArgs),
    /// Locate the attractor of the period-averaged dynamics (JSON on stdout).
    #[command(allow_negative_numbers = true)]
    Attractor(AttractorArgs),
    /// Biolek attractor position over a grid of pulse strengths.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Potential of the averaged dynamics on [0, 1].
    #[command(allow_negative_numbers = true)]
    Potential(PotentialArgs),
    /// Check a window function against the attracting and neutral class conditions.
    Classify(ClassifyArgs),
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<memwin_core::Error>() {
            return if err.is_validation() { 2 } else { 3 };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => commands::simulate(a, &cli.common),
        Command::Attractor(a) => commands::attractor(a, &cli.common),
        Command::Sweep(a) => commands::sweep(a, &cli.common),
        Command::Potential(a) => commands::potential_cmd(a, &cli.common),
        Command::Classify(a) => commands::classify(a, &cli.common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

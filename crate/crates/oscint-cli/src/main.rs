//! `oscint`: oscillatory power integrals, asymptotic expansions, and λ sweeps
//! from the command line.
//!
//! Every run prints a versioned JSON report to stdout; sweeps additionally
//! write a CSV file. Exit codes: 0 success, 2 invalid input, 3 numerical
//! non-convergence.

mod ampspec;
mod args;
mod expand_cmd;
mod fresnel_cmd;
mod report;
mod sweep_cmd;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "oscint",
    version,
    about = "Oscillatory integrals: regularized values, stationary-phase expansions, decay sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the oscillatory integral of e^{±ix^p} x^{q-1} over (0, ∞)
    Fresnel(fresnel_cmd::FresnelArgs),
    /// Expansion term table, partial sum, and quadrature oracle at one λ
    Expand(expand_cmd::ExpandArgs),
    /// Sweep λ, write CSV, and fit decay slopes
    Sweep(sweep_cmd::SweepArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = match &cli.command {
        Command::Fresnel(a) => fresnel_cmd::run(a),
        Command::Expand(a) => expand_cmd::run(a),
        Command::Sweep(a) => sweep_cmd::run(a),
    };
    match result {
        Ok(mut rep) => {
            rep.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
            println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 3 })
        }
    }
}

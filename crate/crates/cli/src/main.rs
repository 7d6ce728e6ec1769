//! Command-line front end for the solver suite.
//!
//! Exit codes are a stable contract: 0 on success, 1 when a validation
//! threshold fails, 2 on usage errors, 3 on numerical failure.

mod cmd_alpha;
mod cmd_profile;
mod cmd_tables;
mod cmd_validate;
mod manifest;
mod sweep;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "frontflux",
    version,
    about = "Front-tracking solvers for degenerate nonlinear diffusion \
             driven by a power-law boundary flux"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the front-position coefficient for one case.
    Alpha(cmd_alpha::AlphaArgs),
    /// Reproduce a published reference table and report deviations.
    Tables(cmd_tables::TablesArgs),
    /// Export a reduced profile as CSV.
    Profile(cmd_profile::ProfileArgs),
    /// Cross-check the solver routes against each other.
    Validate(cmd_validate::ValidateArgs),
}

/// Failure modes of a command, ordered by exit code.
pub enum CliError {
    /// Exit 2: bad flag combinations, unusable environment, io failures.
    Usage(String),
    /// Exit 3: a solver reported a numerical failure.
    Solver(frontflux::Error),
}

impl From<frontflux::Error> for CliError {
    fn from(e: frontflux::Error) -> Self {
        CliError::Solver(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io failure: {e}"))
    }
}

pub type CmdResult = Result<i32, CliError>;

/// Converts the mutually exclusive --k/--m pair to (m, k).
pub fn resolve_exponents(n: f64, k: Option<f64>, m: Option<f64>) -> Result<(f64, f64), CliError> {
    match (k, m) {
        (Some(k), None) => Ok((frontflux::similarity::growth_exponent(n, k), k)),
        (None, Some(m)) => Ok((m, frontflux::similarity::flux_exponent(n, m))),
        _ => Err(CliError::Usage(
            "exactly one of --k and --m must be given".into(),
        )),
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Alpha(args) => cmd_alpha::run(&args),
        Command::Tables(args) => cmd_tables::run(&args),
        Command::Profile(args) => cmd_profile::run(&args),
        Command::Validate(args) => cmd_validate::run(&args),
    };
    let code = match outcome {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(CliError::Solver(e)) => {
            eprintln!("solver error: {e}");
            3
        }
    };
    std::process::exit(code);
}

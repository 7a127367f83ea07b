//! Command line front end: configuration, file formats and the
//! `spectrum`, `rates`, `bounds`, `energy` and `verify` commands.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use clap::{Parser, Subcommand};

pub use commands::Outcome;
pub use config::{Config, Overrides};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "freeholder", version, about = "Spectral laws of polynomials in free semicirculars and their matrix models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density and distribution function of p(S); optionally simulate p(X_N).
    Spectrum(Overrides),
    /// Kolmogorov distance to the limit law along a size ladder.
    Rates(Overrides),
    /// Evaluate explicit constants and exponents.
    Bounds(Overrides),
    /// Logarithmic energy against its Hölder-based bound.
    Energy(Overrides),
    /// Run inequality suites; exits 1 if any check fails.
    Verify(Overrides),
}

impl Command {
    fn overrides(&self) -> &Overrides {
        match self {
            Command::Spectrum(o) | Command::Rates(o) | Command::Bounds(o) | Command::Energy(o) | Command::Verify(o) => o,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let c = Config::resolve(cli.command.overrides())?;
    match cli.command {
        Command::Spectrum(_) => commands::cmd_spectrum(&c),
        Command::Rates(_) => commands::cmd_rates(&c),
        Command::Bounds(_) => commands::cmd_bounds(&c),
        Command::Energy(_) => commands::cmd_energy(&c),
        Command::Verify(_) => commands::cmd_verify(&c),
    }
}

/// 0 on success, 1 when a checked inequality failed, otherwise the error's code.
pub fn exit_code(result: &Result<Outcome, CliError>) -> i32 {
    match result {
        Ok(o) if o.passed => 0,
        Ok(_) => 1,
        Err(e) => e.exit_code(),
    }
}

//! Command-line layer of the pseudodot solver: run configuration, table
//! output, verification checks and the subcommands.

pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::Outcome;
pub use config::{Format, RunConfig};
pub use error::CliError;

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Density,
    Effpot,
    Verify,
    ReproduceFigures,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Spectrum => "spectrum",
            Command::Density => "density",
            Command::Effpot => "effpot",
            Command::Verify => "verify",
            Command::ReproduceFigures => "reproduce-figures",
        })
    }
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match command {
        Command::Spectrum => commands::spectrum(cfg),
        Command::Density => commands::density(cfg),
        Command::Effpot => commands::effpot(cfg),
        Command::Verify => commands::verify(cfg),
        Command::ReproduceFigures => commands::reproduce_figures(cfg),
    }
}

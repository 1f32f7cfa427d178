//! Command-line front end for the amplification models and simulators.

pub mod cli;
pub mod commands;
pub mod error;
pub mod fileconf;
pub mod formats;
pub mod output;
pub mod params;
pub mod sweep;
pub mod units;

use cli::{Cli, Command, OutputFormat};
use error::CliResult;
use fileconf::FileConfig;

/// Per-command defaults: tables default to CSV, single results to text.
fn default_format(command: &Command) -> OutputFormat {
    match command {
        Command::Sweep(_) | Command::Compare(_) => OutputFormat::Csv,
        _ => OutputFormat::Text,
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    let conf = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::empty(),
    };
    let format = cli.format.unwrap_or_else(|| default_format(&cli.command));
    let seed = match cli.seed {
        Some(s) => Some(s),
        None => conf.u64("seed")?,
    };
    let rendered = match &cli.command {
        Command::Eval(args) => commands::eval::run(&conf, args, format)?,
        Command::Sweep(args) => commands::sweep::run(&conf, args, format)?,
        Command::Optimize(args) => commands::optimize::run(&conf, args, format)?,
        Command::Simulate(args) => commands::simulate::run(&conf, args, seed, format)?,
        Command::Calibrate(args) => commands::calibrate::run(&conf, args, format)?,
        Command::Compare(args) => commands::compare::run(&conf, args, format)?,
    };
    output::emit(cli.out.as_deref(), &rendered)
}

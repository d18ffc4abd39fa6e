//! Command-line harness for `maxplus-lln`: model loading, report
//! rendering and the worked scenarios behind `reproduce`.

pub mod args;
pub mod commands;
pub mod model;
pub mod output;

pub use args::Cli;
pub use output::{Outcome, Status};

/// Runs a parsed command line to completion without printing anything.
pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    commands::dispatch(cli)
}

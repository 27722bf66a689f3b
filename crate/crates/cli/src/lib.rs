//! Command-line front end for the `revcgd` library.

use std::io::Write;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod rules;
pub mod suites;

use commands::{CheckArgs, ConvertArgs, RunArgs};

#[derive(Parser, Debug)]
#[command(name = "revcgd", version, about = "Reversible causal graph dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evolve a graph for a number of steps.
    Run(RunArgs),
    /// Run a property suite (or `all`).
    Check(CheckArgs),
    /// Translate a graph between formalisms.
    Convert(ConvertArgs),
}

/// Runs the command, writing results to `out` and diagnostics to `err`, and
/// returns the process exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Run(a) => commands::cmd_run(a, out),
        Command::Check(a) => commands::cmd_check(a, out),
        Command::Convert(a) => commands::cmd_convert(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "revcgd: {f}");
            f.code()
        }
    }
}

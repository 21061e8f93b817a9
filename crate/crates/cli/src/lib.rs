//! Library side of the `spinstar` command: argument types, the three
//! subcommands and their output formats.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

pub use args::{Cli, Command, Format};
pub use commands::{cmd_events, cmd_evolve, cmd_verify, evolve, RunConfig};
pub use error::{CliError, Result};

/// Dispatch a parsed command line, writing data to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn std::io::Write) -> Result<()> {
    match &cli.command {
        Command::Evolve(a) => evolve(a, stdout).map(|_| ()),
        Command::Events(a) => cmd_events(a, stdout).map(|_| ()),
        Command::Verify(a) => cmd_verify(a, stdout).map(|_| ()),
    }
}

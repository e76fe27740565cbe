mod commands;
mod manifest;
mod table;
mod vectors;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::{bpdn, project, validate, Status, UsageError};

const EXIT_VALIDATION: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sparsebox",
    version,
    about = "Projection onto sparse vectors in a box, and BPDN experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Project a point onto kB0 ∩ (x + ΔB∞)
    Project(project::ProjectArgs),
    /// Run a trust-region solver on a random sparse recovery problem
    Bpdn(bpdn::BpdnArgs),
    /// Compare projections with the exhaustive oracle on random instances
    Validate(validate::ValidateArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let result = match &cli.command {
        Command::Project(args) => project::run(args),
        Command::Bpdn(args) => bpdn::run(args),
        Command::Validate(args) => validate::run(args),
    };
    match result {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::ValidationFailed) => ExitCode::from(EXIT_VALIDATION),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

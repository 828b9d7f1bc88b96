//! `interlace` — exact interlace polynomials of looped vertex-weighted
//! graphs, by cross-validating methods.
//!
//! Exit codes: 0 success, 1 usage, 2 file parse error (`line:col`),
//! 3 semantic error, 4 invariant violation (selftest or compose mismatch).

mod commands;
mod graphfile;
mod report;
mod selftest;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use graphfile::FileError;
use std::path::PathBuf;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    File { path: PathBuf, inner: FileError },
    Semantic(String),
    Invariant(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::File { inner, .. } => match inner {
                FileError::Parse { .. } => 2,
                FileError::Semantic { .. } => 3,
            },
            CliError::Semantic(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }

    fn render(&self) -> String {
        match self {
            CliError::Usage(m) => format!("error: {m}"),
            CliError::File { path, inner } => format!("{}:{inner}", path.display()),
            CliError::Semantic(m) => format!("error: {m}"),
            CliError::Invariant(m) => format!("invariant violation: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "interlace",
    version,
    about = "Exact interlace polynomials of looped vertex-weighted graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute q, q_N or q_R of a graph file.
    Compute(commands::ComputeArgs),
    /// Compose two graphs along a shared marker vertex and report the
    /// re-weighting.
    Compose(commands::ComposeArgs),
    /// Invariants gamma and epsilon plus leaf-count statistics per strategy.
    Stats(commands::StatsArgs),
    /// Run the full cross-validation suites on seeded random instances.
    Selftest(selftest::SelftestArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            std::process::exit(0);
        }
        Err(e) => {
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    let result = match &cli.command {
        Command::Compute(args) => commands::compute(args),
        Command::Compose(args) => commands::compose(args),
        Command::Stats(args) => commands::stats(args),
        Command::Selftest(args) => selftest::run(args),
    };
    if let Err(e) = result {
        eprintln!("{}", e.render());
        std::process::exit(e.exit_code());
    }
}

use std::io;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twoconn::{cmd_enumerate, cmd_gen, cmd_verify, EnumerateArgs, GenArgs, VerifyArgs};

/// Enumerate induced 2-edge-connected or 2-vertex-connected subgraphs.
#[derive(Parser)]
#[command(name = "twoconn", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stream every component of a graph.
    Enumerate(EnumerateArgs),
    /// Print a seeded random graph G(n, p).
    Gen(GenArgs),
    /// Cross-check the enumerator against brute force.
    Verify(VerifyArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = match &cli.command {
        Command::Enumerate(a) => cmd_enumerate(a, &mut out, &mut err),
        Command::Gen(a) => cmd_gen(a, &mut out, &mut err),
        Command::Verify(a) => cmd_verify(a, &mut out, &mut err),
    };
    ExitCode::from(code as u8)
}

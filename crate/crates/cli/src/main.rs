use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zecmac_cli::info::{self, InfoArgs};
use zecmac_cli::region::{self, RegionArgs};
use zecmac_cli::simulate::{self, SimulateArgs};
use zecmac_cli::CliError;

/// Zero-error multiple access codes and state estimation over them.
#[derive(Debug, Parser)]
#[command(name = "zecmac", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Nonstochastic information and partitions of a joint range.
    Info(InfoArgs),
    /// Zero-error rate region of a channel at finite blocklengths.
    Region(RegionArgs),
    /// Estimate three plants over a zero-error code.
    Simulate(SimulateArgs),
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("ZECMAC_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("ZECMAC_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = init_threads().and_then(|()| match &cli.command {
        Command::Info(a) => info::run(a).map(drop),
        Command::Region(a) => region::run(a).map(drop),
        Command::Simulate(a) => simulate::run(a).map(drop),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zecmac: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

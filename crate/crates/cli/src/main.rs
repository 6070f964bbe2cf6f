//! Command-line front end: point evaluation, sweeps, regime reports, ratio
//! studies and the oracle self-test.

mod common;
mod config;
mod error;
mod report;
mod scan;
mod selftest;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "accelshift", version, about = "Energy shift of a uniformly accelerated atom near a conducting plate")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Shift breakdown, statistical functions and regime at one point.
    Shift(report::PointArgs),
    /// Sweep z or a and write the CSV table.
    Scan(scan::ScanArgs),
    /// Regime classification and the matching asymptotic expansion.
    Regime(report::RegimeArgs),
    /// Ratios to the static shift and to the thermal comparator.
    Ratio(report::PointArgs),
    /// Run the oracle suite; exit 1 on any failure.
    Selftest(selftest::SelftestArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let text = match cli.cmd {
        Cmd::Shift(a) => report::cmd_shift(a)?,
        Cmd::Scan(a) => return scan::cmd_scan(a),
        Cmd::Regime(a) => report::cmd_regime(a)?,
        Cmd::Ratio(a) => report::cmd_ratio(a)?,
        Cmd::Selftest(a) => selftest::cmd_selftest(a)?,
    };
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Output(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("accelshift: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

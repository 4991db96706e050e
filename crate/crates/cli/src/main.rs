//! `plc-tdr` command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 invalid input, 3 numerical guard
//! (aliasing, singular network), 4 table reproduction failure.

mod args;
mod commands;
mod output;

use std::ffi::OsString;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::Context;

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_REPRODUCTION: u8 = 4;

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(&cli, &argv[1..]) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_REPRODUCTION),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical_guard() {
                EXIT_GUARD
            } else {
                EXIT_INVALID
            })
        }
    }
}

/// Runs the command; `Ok(false)` flags a failed reproduction.
fn run(cli: &Cli, args: &[OsString]) -> plc_tdr::Result<bool> {
    let inputs: Vec<&Path> = match &cli.command {
        Command::Simulate(s) => s.topology.iter().map(|p| p.as_path()).collect(),
        Command::Tables(t) => t.expectations.iter().map(|p| p.as_path()).collect(),
        _ => Vec::new(),
    };
    let ctx = Context {
        format: cli.format,
        seed: cli.seed,
        input_hash: output::input_hash(args, &inputs)?,
    };
    let outcome = match &cli.command {
        Command::Pulse(p) => commands::pulse(&ctx, p)?,
        Command::Acf(a) => commands::acf(&ctx, a)?,
        Command::Metrics(m) => commands::metrics(&ctx, m)?,
        Command::Simulate(s) => commands::simulate(&ctx, s)?,
        Command::Topology(d) => commands::topology(d)?,
        Command::Tables(t) => commands::tables(&ctx, t)?,
        Command::Sweep(s) => commands::sweep_cmd(&ctx, s)?,
    };
    outcome.emit(cli.out.as_deref())?;
    Ok(!outcome.reproduction_failed)
}

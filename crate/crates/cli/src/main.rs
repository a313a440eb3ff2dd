//! `lstx`: command-line access to kernel evaluation, identity residuals,
//! transform round trips and golden tables.
//!
//! Exit status: 0 on success, 1 for invalid input or domain errors, 2 when
//! a quadrature fails to converge. Reports are written only after the whole
//! command has succeeded.

mod args;
mod commands;
mod error;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Format};
use commands::Output;
use error::CliError;

fn execute(cli: &Cli) -> Result<(), CliError> {
    let start = Instant::now();
    let output = commands::run(&cli.command, &cli.common)?;
    let body = match output {
        Output::Report(mut report) => {
            report.elapsed_seconds = start.elapsed().as_secs_f64();
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            match cli.common.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv()?,
            }
        }
        Output::Golden { json, csv } => match cli.common.format {
            Format::Json => json,
            Format::Csv => csv,
        },
    };
    report::emit(&body, cli.common.output.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

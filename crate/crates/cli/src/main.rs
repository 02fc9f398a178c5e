//! `charp`: claim verification, plurigenera tables and lc/dlt checks.
//!
//! Exit status: 0 when every binding check passes, 1 when one fails, 2 on invalid input.

mod commands;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::{curve_info, dlt, plurigenera, verify};
use input::{is_input_error, Format, OutputArgs, UsageError};
use report::Report;

#[derive(Parser, Debug)]
#[command(name = "charp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the section counts, pushforward types, non-CM numbers and pencil for one curve.
    VerifyClaims(verify::VerifyArgs),
    /// Tabulate surface and threefold plurigenera on both fibers of the family.
    Plurigenera(plurigenera::PlurigeneraArgs),
    /// Decide dlt / lc / condition-violated for an annotated pair.
    DltCheck(dlt::DltArgs),
    /// Print point count, invariants and supersingularity of a curve.
    CurveInfo(curve_info::CurveInfoArgs),
}

fn emit(report: &Report, out: &OutputArgs) -> Result<()> {
    if let Some(path) = &out.out_json {
        std::fs::write(path, report.to_json())
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    let mut stdout = std::io::stdout().lock();
    match out.format {
        Format::Json => stdout.write_all(report.to_json().as_bytes())?,
        Format::Text => report.write_text(&mut stdout)?,
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let (report, out) = match &cli.command {
        Command::VerifyClaims(a) => (verify::run(a)?, &a.output),
        Command::Plurigenera(a) => {
            let (report, table) = plurigenera::run(a)?;
            if let Some(path) = &a.out_csv {
                plurigenera::write_csv(&table, path)?;
            }
            (report, &a.output)
        }
        Command::DltCheck(a) => (dlt::run(a)?, &a.output),
        Command::CurveInfo(a) => (curve_info::run(a)?, &a.output),
    };
    emit(&report, out)?;
    Ok(report.passed())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let input = err.downcast_ref::<UsageError>().is_some()
        || err
            .downcast_ref::<charp_core::Error>()
            .is_some_and(is_input_error);
    if input {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

//! `branched`: batch runner for the verification suites.
//!
//! Exit codes: 0 all checks pass, 2 violations, 3 numeric non-convergence,
//! 4 bad configuration or unreadable input.

mod args;
mod source;
mod suites;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use branched::bounds::{write_csv_summary, BoundsError, CheckReport};
use branched::character::CharacterError;
use branched::extension::ExtensionError;
use branched::hopf::HopfError;
use branched::lift::LiftError;

use args::{Cli, Command};
use suites::{LemmaPlan, SuiteOutput};

pub const EXIT_VIOLATIONS: u8 = 2;
pub const EXIT_NOT_CONVERGED: u8 = 3;
pub const EXIT_CONFIG: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("did not converge: {0}")]
    NotConverged(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::NotConverged(_) => EXIT_NOT_CONVERGED,
        }
    }
}

impl From<LiftError> for CliError {
    fn from(e: LiftError) -> Self {
        match e {
            LiftError::NotConverged { .. } => CliError::NotConverged(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<ExtensionError> for CliError {
    fn from(e: ExtensionError) -> Self {
        match e {
            ExtensionError::NotConverged { .. } => CliError::NotConverged(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

macro_rules! config_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Config(e.to_string())
            }
        }
    )*};
}

config_from!(BoundsError, CharacterError, HopfError, std::io::Error, serde_json::Error, csv::Error);

fn write_outputs(dir: &Path, seed: u64, outputs: &[SuiteOutput]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))?;
    let mut all_reports: Vec<CheckReport> = Vec::new();
    for out in outputs {
        let doc = json!({
            "schema": 1,
            "suite": out.name,
            "seed": seed,
            "passed": out.reports.iter().all(CheckReport::passed),
            "reports": out.reports,
            "data": out.data,
        });
        fs::write(dir.join(format!("{}.json", out.name)), serde_json::to_string_pretty(&doc)? + "\n")?;
        if let Some(csv) = &out.csv {
            fs::write(dir.join(format!("{}.csv", out.name)), csv)?;
        }
        all_reports.extend(out.reports.iter().cloned());
    }
    if !all_reports.is_empty() {
        write_csv_summary(&all_reports, fs::File::create(dir.join("summary.csv"))?)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Vec<SuiteOutput>, CliError> {
    Ok(match &cli.command {
        Command::Enumerate { n, labels } => vec![suites::enumerate(*n, *labels)?],
        Command::Coproduct { forest } => vec![suites::coproduct(forest)?],
        Command::Lift(a) => vec![suites::lift(a)?],
        Command::Extend(a) => vec![suites::extend_cmd(a)?],
        Command::VerifyDecay(a) => vec![suites::verify_decay_cmd(a)?],
        Command::Counterexample(a) => vec![suites::counterexample(a)?],
        Command::Lemmas(a) => vec![suites::lemmas(&LemmaPlan::from_args(a, cli.seed)?)?],
        Command::All => suites::all(cli.seed)?,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_CONFIG),
            };
        }
    };
    let outputs = match run(&cli).and_then(|o| write_outputs(&cli.out, cli.seed, &o).map(|_| o)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let stdout = std::io::stdout();
    let mut stdout = stdout.lock();
    let mut failed = false;
    for out in &outputs {
        // CSV suites keep stdout machine-readable; their summary goes to stderr.
        if let Some(csv) = &out.csv {
            let _ = stdout.write_all(csv.as_bytes());
            for line in &out.lines {
                eprintln!("{line}");
            }
        } else {
            for line in &out.lines {
                let _ = writeln!(stdout, "{line}");
            }
        }
        for r in &out.reports {
            failed |= !r.passed();
            if out.csv.is_some() {
                eprintln!("{}", r.summary());
            } else {
                let _ = writeln!(stdout, "{}", r.summary());
            }
        }
    }
    if failed {
        ExitCode::from(EXIT_VIOLATIONS)
    } else {
        ExitCode::SUCCESS
    }
}

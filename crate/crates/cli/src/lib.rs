//! Command-line front end for `afc-core`.
//!
//! Scalars go to stdout as JSON, tables as CSV (stdout or `--out`). Exit
//! status is 0 on success, 1 when the model rejects the input (with a JSON
//! error object on stderr) and 2 on usage errors.

pub mod args;
pub mod commands;
pub mod input;
pub mod output;
pub mod reproduce;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, ReproduceArgs};
use commands::Output;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] afc_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("unknown reproduce case `{0}`")]
    UnknownCase(String),
    #[error("{} reproduce case(s) outside tolerance: {}", .0.len(), .0.join(", "))]
    ReproductionFailed(Vec<String>),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Model(e) => e.kind(),
            CliError::Io { .. } => "Io",
            CliError::UnknownCase(_) => "UnknownCase",
            CliError::ReproductionFailed(_) => "ReproductionFailed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_INVALID,
        }
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    violations: Option<&'a afc_core::Violations>,
}

fn report_error(err: &mut dyn Write, e: &CliError) {
    if let CliError::Usage(msg) = e {
        let _ = writeln!(err, "error: {msg}");
        return;
    }
    let violations = match e {
        CliError::Model(m) => m.violations(),
        _ => None,
    };
    let report = ErrorReport {
        error: e.kind(),
        message: e.to_string(),
        violations,
    };
    let _ = output::write_json(err, &report);
}

fn reproduce(a: &ReproduceArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.list {
        let names: Vec<&str> = reproduce::CASES.iter().map(|c| c.name).collect();
        return write_or_io(out, |o| output::write_json(o, &names));
    }
    let reports: Vec<reproduce::CaseReport> = if a.case == "all" {
        reproduce::CASES.iter().map(reproduce::Case::evaluate).collect()
    } else {
        vec![reproduce::find(&a.case)?.evaluate()]
    };
    if let Some(dir) = &a.out_dir {
        reproduce::write_figure_tables(dir)?;
    }
    let failed: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| r.case.clone()).collect();
    if a.case == "all" {
        #[derive(Serialize)]
        struct Summary<'a> {
            passed: usize,
            failed: usize,
            cases: &'a [reproduce::CaseReport],
        }
        let s = Summary {
            passed: reports.len() - failed.len(),
            failed: failed.len(),
            cases: &reports,
        };
        write_or_io(out, |o| output::write_json(o, &s))?;
    } else {
        write_or_io(out, |o| output::write_json(o, &reports[0]))?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ReproductionFailed(failed))
    }
}

fn write_or_io(out: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<(), CliError> {
    match f(out) {
        // a closed pipe (e.g. `| head`) is not a failure
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r.map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let result = match &cli.command {
        Command::Capacity(a) => commands::capacity(a),
        Command::SwCapacity(a) => commands::sw_capacity(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Multiplex(a) => commands::multiplex(a),
        Command::Materials(a) => commands::materials(a),
        Command::Rate(a) => commands::rate(a),
        Command::Reproduce(a) => return reproduce(a, out),
    }?;
    match result {
        Output::Json(v) => write_or_io(out, |o| output::write_json(o, &v)),
        Output::Csv(bytes) => write_or_io(out, |o| o.write_all(&bytes)),
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            report_error(err, &e);
            e.exit_code()
        }
    }
}

mod args;
mod commands;
mod document;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use tubed_core::Error;

use crate::args::{validate, Cli};
use crate::document::{Document, TOOL, VERSION};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Verification(String),
    NoPath(String),
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "invalid-arguments",
            CliError::Core(e) => e.kind(),
            CliError::Verification(_) => "verification-failure",
            CliError::NoPath(_) => "no-path",
            CliError::Io(_) => "io",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::InvalidParameter(_)
                | Error::InvalidOperation(_)
                | Error::InvalidMove(_)
                | Error::ExcludedMove(_) => 2,
                Error::MoveRejected { .. } => 3,
                Error::ResourceLimit(_) => 4,
                Error::OracleViolation(_) | Error::InternalConsistency(_) => 5,
            },
            CliError::Verification(_) => 6,
            CliError::NoPath(_) => 7,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m)
            | CliError::Verification(m)
            | CliError::NoPath(m)
            | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

/// A document to write, plus the failure to report once it is written.
pub struct Outcome {
    pub doc: Document,
    pub failure: Option<CliError>,
}

impl Outcome {
    pub fn ok(doc: Document) -> Self {
        Outcome { doc, failure: None }
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'static str,
    message: String,
    exit_code: u8,
    tool: &'static str,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a tubed_core::moves::RejectReason>,
}

fn report(err: &CliError) -> ExitCode {
    let code = err.exit_code();
    let reason = match err {
        CliError::Core(Error::MoveRejected { reason, .. }) => Some(reason),
        _ => None,
    };
    let record = ErrorRecord {
        error: err.kind(),
        message: err.to_string(),
        exit_code: code,
        tool: TOOL,
        version: VERSION,
        reason,
    };
    eprintln!(
        "{}",
        serde_json::to_string(&record).expect("error record serializes")
    );
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let inv = validate(cli.command, &cli.opts)?;
    let outcome = commands::dispatch(&inv)?;
    outcome
        .doc
        .write(cli.opts.output.as_deref())
        .map_err(|e| CliError::Io(format!("cannot write output: {e}")))?;
    match outcome.failure {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.kind().to_string();
            let detail = e.to_string();
            let first = detail
                .lines()
                .next()
                .unwrap_or(&msg)
                .trim_start_matches("error: ");
            return report(&CliError::usage(first.to_string()));
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e),
    }
}

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use ellchain_core::independence::OracleConfig;
use ellchain_core::theorems::Status;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Every JSON document the tool writes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub command: String,
    /// Present for commands that draw random scalars.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleConfig>,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &str, oracle: Option<OracleConfig>, result: T) -> Self {
        Envelope { schema_version: SCHEMA_VERSION, command: command.into(), oracle, result }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Process exit status, ordered by severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Success = 0,
    Usage = 2,
    Failed = 3,
    Inconsistent = 4,
}

impl Exit {
    pub fn of(status: Status, single: bool) -> Exit {
        match status {
            Status::Proven | Status::Vacuous => Exit::Success,
            Status::HypothesisNotMet if !single => Exit::Success,
            Status::HypothesisNotMet | Status::NotProven => Exit::Failed,
            Status::Inconsistent => Exit::Inconsistent,
        }
    }
}

/// Bad arguments or unreadable input; exits with [`Exit::Usage`].
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::Proven => "proven",
        Status::NotProven => "not-proven",
        Status::HypothesisNotMet => "hypothesis-not-met",
        Status::Vacuous => "vacuous",
        Status::Inconsistent => "inconsistent",
    }
}

pub fn emit(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

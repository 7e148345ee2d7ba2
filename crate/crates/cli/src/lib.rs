//! Library backing the `bphs` binary: system-file parsing, derivation
//! reports, and the check / derive / simulate / study commands.

pub mod commands;
pub mod report;
pub mod systemfile;

use std::fmt;
use std::path::Path;

/// Failure categories with their documented process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable input: bad JSON, malformed rational, missing file. Exit 1.
    Parse(String),
    /// Structurally readable input that violates an invariant. Exit 2.
    Validation(String),
    /// Numerical failure during time stepping (singular or diverging). Exit 3.
    Numerical(String),
    /// Simulation completed but the audit residual exceeded --tol. Exit 4.
    Audit(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Audit(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
            CliError::Audit(m) => write!(f, "audit failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

pub fn sim_error(e: bphs_core::sim::SimError) -> CliError {
    use bphs_core::sim::SimError;
    match e {
        SimError::Singular(p) => {
            CliError::Numerical(format!("time-step matrix is numerically singular (pivot {p:e})"))
        }
        SimError::NonFinite { step } => {
            CliError::Numerical(format!("state became non-finite at step {step}"))
        }
        SimError::Invalid(m) => CliError::Validation(m),
    }
}

/// Writes a file atomically: the content lands under a temporary name in the
/// same directory and is renamed into place, so readers never see a partial
/// file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{file_name}.tmp"));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

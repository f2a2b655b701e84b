use std::io;

use serde::Serialize;

/// Everything a command can fail with, and the exit code it maps to.
#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Core(twinsub_core::Error),
    Io(io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        use twinsub_core::Error as E;
        match self {
            RunError::Usage(_) => 2,
            RunError::Core(E::Domain(_) | E::Invalid { .. } | E::CostGuard { .. }) => 2,
            RunError::Core(_) | RunError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        use twinsub_core::Error as E;
        match self {
            RunError::Usage(_) => "usage",
            RunError::Core(E::Domain(_)) => "domain",
            RunError::Core(E::Invalid { .. }) => "invalid",
            RunError::Core(E::CostGuard { .. }) => "cost_guard",
            RunError::Core(E::NoConvergence { .. }) => "no_convergence",
            RunError::Core(E::Precision(_)) => "precision",
            RunError::Io(_) => "io",
        }
    }

    pub fn report(&self) -> ErrorReport {
        ErrorReport { error: ErrorBody { kind: self.kind(), message: self.to_string(), exit_code: self.exit_code() } }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Usage(m) => f.write_str(m),
            RunError::Core(e) => e.fmt(f),
            RunError::Io(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for RunError {}

impl From<twinsub_core::Error> for RunError {
    fn from(e: twinsub_core::Error) -> Self {
        RunError::Core(e)
    }
}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        RunError::Io(e)
    }
}

/// The machine-readable error object printed on failure.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

pub type RunResult<T> = Result<T, RunError>;

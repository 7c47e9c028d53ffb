use std::path::Path;

use bsgraph::diophantine::DiophantineError;
use bsgraph::floquet::FloquetError;
use bsgraph::lattice::LatticeError;
use thiserror::Error;

/// Exit code for invalid input.
pub const EXIT_INPUT: i32 = 2;
/// Exit code when a precision or search budget ran out.
pub const EXIT_BUDGET: i32 = 3;
/// Exit code for any other failure.
pub const EXIT_FAILURE: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Missing(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Diophantine(#[from] DiophantineError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Floquet(#[from] FloquetError),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::Missing(_) => "missing_parameter",
            CliError::Io { .. } => "io",
            CliError::Diophantine(_) => "diophantine",
            CliError::Lattice(_) => "lattice",
            CliError::Floquet(_) => "floquet",
            CliError::Budget(_) => "budget",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Missing(_) => EXIT_INPUT,
            CliError::Io { .. } => EXIT_FAILURE,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Diophantine(e) => diophantine_code(e),
            CliError::Lattice(e) => match e {
                LatticeError::UncertifiedComparison { .. } => EXIT_BUDGET,
                LatticeError::DegenerateResonance { .. } => EXIT_FAILURE,
                LatticeError::Diophantine(d) => diophantine_code(d),
                _ => EXIT_INPUT,
            },
            CliError::Floquet(e) => match e {
                FloquetError::SearchBudgetExceeded { .. } => EXIT_BUDGET,
                FloquetError::InvalidCoupling(_)
                | FloquetError::InvalidCell(_)
                | FloquetError::Parse(_)
                | FloquetError::InvalidMomentum(_)
                | FloquetError::Precondition(_) => EXIT_INPUT,
                _ => EXIT_FAILURE,
            },
        }
    }

    /// `{"error": {"kind": ..., "message": ..., "exit_code": ...}}`.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() }
        })
        .to_string()
    }
}

fn diophantine_code(e: &DiophantineError) -> i32 {
    match e {
        DiophantineError::PeriodNotFound { .. } => EXIT_BUDGET,
        _ => EXIT_INPUT,
    }
}

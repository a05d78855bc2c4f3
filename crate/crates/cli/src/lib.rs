//! Command-line front-end of `svirlab`: configuration, dispatch and
//! deterministic JSON/CSV reports.

pub mod commands;
pub mod config;
pub mod functions;
pub mod report;

use svirlab::repmat::RepError;
use svirlab::smeared::SmearedError;
use svirlab::superderiv::SuperError;
use svirlab::verma::VermaError;

/// Exit status of a run.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid --{field}: {message}")]
pub struct UsageError {
    pub field: String,
    pub message: String,
}

impl UsageError {
    pub fn new(field: &str, message: String) -> Self {
        UsageError { field: field.to_string(), message }
    }
}

/// A command either cannot run with the given inputs, or ran into a
/// mathematical obstruction that is reported as a failed check.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Usage(#[from] UsageError),
    #[error("{0}")]
    Failed(String),
}

impl From<VermaError> for CommandError {
    fn from(e: VermaError) -> Self {
        match e {
            VermaError::NotUnitary { .. } => CommandError::Failed(e.to_string()),
            VermaError::LevelOutOfRange { .. } => CommandError::Usage(UsageError::new("level", e.to_string())),
            _ => CommandError::Usage(UsageError::new("cutoff", e.to_string())),
        }
    }
}

impl From<RepError> for CommandError {
    fn from(e: RepError) -> Self {
        let usage = |field: &str| CommandError::Usage(UsageError::new(field, e.to_string()));
        match &e {
            RepError::NotUnitary { .. } | RepError::NoHilbertSpace { .. } => CommandError::Failed(e.to_string()),
            RepError::NoGlobalSupercharge | RepError::IndexNeedsRamond => usage("sector"),
            RepError::NotGraded => usage("h"),
            RepError::NonPositiveBeta(_) => usage("beta"),
            RepError::Algebra(_) => usage("sector"),
            RepError::Verma(v) => v.clone().into(),
        }
    }
}

impl From<SmearedError> for CommandError {
    fn from(e: SmearedError) -> Self {
        match e {
            SmearedError::Rep(r) => r.into(),
            SmearedError::Singular => CommandError::Failed(e.to_string()),
            SmearedError::ZeroAlpha(_) => CommandError::Usage(UsageError::new("alpha", e.to_string())),
            SmearedError::Domination { .. } => CommandError::Usage(UsageError::new("c-dom", e.to_string())),
            _ => CommandError::Usage(UsageError::new("function", e.to_string())),
        }
    }
}

impl From<SuperError> for CommandError {
    fn from(e: SuperError) -> Self {
        match e {
            SuperError::Rep(r) => r.into(),
            SuperError::Smeared(s) => s.into(),
            SuperError::NotOdd => CommandError::Usage(UsageError::new("phi", e.to_string())),
            SuperError::NotOrthonormal => CommandError::Failed(e.to_string()),
        }
    }
}

//! Error types shared across the crate.

use std::fmt;
use std::path::PathBuf;

/// A single violated invariant, located by a dotted field path
/// such as `partitions[0].node_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Failure to turn a file into a validated value.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in `{field}`: {message}")]
    Parse {
        line: usize,
        column: usize,
        field: String,
        message: String,
    },

    #[error("unknown field(s): {}", .0.join(", "))]
    UnknownFields(Vec<String>),

    #[error("unsupported schema version {0} (expected 1)")]
    UnsupportedSchema(u32),

    #[error("validation failed: {}", join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

impl LoadError {
    /// True for errors from the validation stage, false for read/parse errors.
    pub fn is_validation(&self) -> bool {
        matches!(self, LoadError::Invalid(_))
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            LoadError::Invalid(v) => v,
            _ => &[],
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Failure of an analysis operation on otherwise valid data.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must be in {range}, got {value}")]
    OutOfRange {
        name: &'static str,
        range: &'static str,
        value: f64,
    },

    #[error("unknown precision `{0}`")]
    UnknownPrecision(String),

    #[error("unknown vector variant `{0}`")]
    UnknownVariant(String),

    #[error("unknown partition or node `{0}`")]
    UnknownPartition(String),

    #[error("missing {0}")]
    Missing(String),

    #[error("index {index} out of range (0..{len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("total energy {total} is below IT energy {it}: inconsistent metering")]
    InconsistentMetering { total: f64, it: f64 },

    #[error("usable capacity {usable} B exceeds raw capacity {raw} B")]
    UsableExceedsRaw { usable: u64, raw: u64 },

    #[error("expected exactly {expected} values, got {got}")]
    WrongArity { expected: usize, got: usize },
}

/// Rejects zero, negative and non-finite inputs.
pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64, AnalysisError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(AnalysisError::NonPositive { name, value })
    }
}

use thiserror::Error;

/// Errors produced by the library. Every variant names the offending field
/// or quantity so the CLI can surface it verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("count mismatch for {what}: expected {expected}, found {found}")]
    CountMismatch {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("norm is unbounded: {0}")]
    Unbounded(String),

    #[error("q-condition fails (1/q - sum 1/q_i = {slack}); use the q-scaling series instead")]
    QConditionViolated { slack: String },

    #[error("epsilon {eps} outside (0, {bound})")]
    EpsilonOutOfRange { eps: f64, bound: f64 },

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: String, input: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

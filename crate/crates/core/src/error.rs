use thiserror::Error;

/// Errors raised by the library. Range violations carry the violated
/// inequality in their message so callers can surface it verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty evaluation set")]
    EmptyEvaluationSet,
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0}")]
    Range(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("missing hyperparameter: {0}")]
    MissingHyperparameter(String),
    #[error("{0}")]
    InvalidHyperparameter(String),
    #[error("tau support exhausted")]
    TauSupportExhausted,
    #[error("invalid config field `{field}`: {reason}")]
    Config { field: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

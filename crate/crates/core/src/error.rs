use alloc::string::String;

/// Errors raised by the alignment library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("account name is empty")]
    EmptyName,

    #[error("name type mismatch: {0}")]
    TypeMismatch(&'static str),

    #[error("training set needs both labels, {0} class is absent")]
    DegenerateLabels(&'static str),

    #[error("expected a vector of length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("schema violation: {0}")]
    SchemaViolation(String),

    #[error("need at least {needed} positive pairs, got {actual}")]
    InsufficientPositives { needed: usize, actual: usize },

    #[error("need at least {needed} pairs to split into folds, got {actual}")]
    TooFewPairs { needed: usize, actual: usize },

    #[error("table {table}, line {line}: {message}")]
    Table {
        table: &'static str,
        line: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("model format, line {line}: {message}")]
    ModelFormat { line: usize, message: String },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

use thiserror::Error;

/// Errors reported by the engine and the net front end.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateIdentifier(String),
    #[error("identifier `{0}` is reserved")]
    ReservedIdentifier(String),
    #[error("counter delta {0} is outside {{-1, 0, +1}}")]
    InvalidDelta(i64),
    #[error("action alphabets differ: {0}")]
    AlphabetMismatch(String),
    #[error("invalid configuration literal `{0}`")]
    InvalidConfig(String),
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

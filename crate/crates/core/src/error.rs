use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: expected {expected} states, found {found}")]
    AlphabetMismatch { expected: usize, found: usize },

    #[error("operation undefined on the bottom counter")]
    BottomCounter,

    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid model: {0}")]
    Semantic(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("enumeration too large: {0} candidates exceed the limit")]
    EnumerationTooLarge(u128),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("module has infinite cokernel")]
    InfiniteCokernel,
    #[error("no matrix realization available for character {0}")]
    NoRealization(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("missing L-value for {0}")]
    MissingValue(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("element is not rational: {0}")]
    NotRational(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Prefix the message with where the error arose.
    pub fn context(self, origin: &str) -> Self {
        let pre = |m: String| format!("{origin}: {m}");
        match self {
            Error::Invalid(m) => Error::Invalid(pre(m)),
            Error::Unsupported(m) => Error::Unsupported(pre(m)),
            Error::Inconsistent(m) => Error::Inconsistent(pre(m)),
            Error::Precondition(m) => Error::Precondition(pre(m)),
            Error::Schema(m) => Error::Schema(pre(m)),
            Error::Io(m) => Error::Io(pre(m)),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

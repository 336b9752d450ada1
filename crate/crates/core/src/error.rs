use thiserror::Error;

/// Errors raised by the computational pipelines.
///
/// The variants fall into three families that front-ends map to distinct
/// exit codes: malformed input, broken invariants, and exhausted caps.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("box mismatch between series operands")]
    BoxMismatch,
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("invariant breach: {0}")]
    Invariant(String),
    #[error("counts do not fit a polynomial: {0}")]
    Interpolation(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
}

/// Broad classification used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Invariant,
    Cap,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::UnknownVertex(_) | Error::InvalidDatum(_) | Error::InvalidInput(_) => {
                ErrorKind::Input
            }
            Error::BoxMismatch
            | Error::NotInvertible(_)
            | Error::Invariant(_)
            | Error::Interpolation(_) => ErrorKind::Invariant,
            Error::CapExceeded(_) => ErrorKind::Cap,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

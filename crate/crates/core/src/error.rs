use thiserror::Error;

/// Errors raised by code construction, analysis and file handling.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// An argument is outside the domain of the operation.
    #[error("invalid input: {0}")]
    Input(String),
    /// A documented precondition does not hold; the caller should fall back to a general path.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A structural invariant (for example CSS orthogonality) is violated.
    #[error("integrity violation: {0}")]
    Integrity(String),
    /// The operation declines to run, typically because the instance is too large.
    #[error("refused: {0}")]
    Refused(String),
    /// Malformed text input. `location` is a byte offset or `line:column` pair.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse_at(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            location: format!("byte {offset}"),
            message: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse_line_col(text: &str, offset: usize, msg: impl Into<String>) -> Self {
        let before = &text[..offset.min(text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Parse {
            location: format!("line {line}, column {column}"),
            message: msg.into(),
        }
    }
}

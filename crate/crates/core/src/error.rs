use thiserror::Error;

/// Errors raised by the library and surfaced by the command-line tool.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An enumeration would exceed a configured size cap.
    #[error("resource limit: {what} requires {requested}, cap is {cap}{}", hint.as_deref().map(|h| format!(" ({h})")).unwrap_or_default())]
    ResourceLimit {
        what: String,
        requested: usize,
        cap: usize,
        hint: Option<String>,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn from_json(err: &serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

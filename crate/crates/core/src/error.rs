use thiserror::Error;

use crate::groups::TableDiagnostic;

/// Errors raised by the library. The CLI maps them onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("capacity exceeded: {what} (limit {limit})")]
    Capacity { what: String, limit: usize },
    #[error("pin conflict at {element}: pinned {pinned}, requested {requested}")]
    Conflict {
        element: String,
        pinned: bool,
        requested: bool,
    },
    #[error("invalid group table: {0}")]
    Table(#[from] TableDiagnostic),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid state: {0}")]
    State(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A parse failure, annotated with the 1-based character column where it occurred.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(column: usize, message: impl Into<String>) -> Self {
        Self {
            column,
            message: message.into(),
        }
    }
}

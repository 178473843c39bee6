use thiserror::Error;

use crate::schedule::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown task id {0}")]
    UnknownTask(usize),
    #[error("precedence relation contains a cycle through task {0}")]
    Cycle(usize),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("schedule is infeasible: {0:?}")]
    Infeasible(Vec<Violation>),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("solution pool is empty")]
    EmptyPool,
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// Attaches a file path to an error, producing `path:line: msg` for parse errors.
    pub fn in_file(self, path: impl Into<String>) -> Self {
        Error::File { path: path.into(), source: Box::new(self) }
    }
}

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),

    #[error("{what} of size {size} exceeds the limit of {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },

    #[error("anchor {0:?} is not a dart of the distinguished face")]
    BadAnchor((usize, usize)),

    #[error("not a cycle of the graph: {0:?}")]
    NotACycle(Vec<usize>),

    #[error("construction rejected: {0}")]
    Rejected(&'static str),

    #[error("tripod pattern invalid: {0}")]
    BadPattern(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("corrupt journal {path}: {msg}")]
    CorruptJournal { path: PathBuf, msg: String },

    #[error("incomplete library: {0}")]
    IncompleteLibrary(String),

    #[error("oracle guard exceeded: {0}")]
    OracleGuard(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}

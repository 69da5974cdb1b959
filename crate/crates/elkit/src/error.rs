use thiserror::Error;

/// Errors surfaced by the library. Variants map onto the CLI exit codes:
/// `NoFit` exits 3, everything else exits 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The search box contained no finite refined candidate.
    #[error("no fit: no finite candidate in the search box")]
    NoFit,

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A diagnostic could not produce a decision (e.g. a non-positive
    /// variance estimate in a studentized statistic).
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("parse error at row {row}: {msg}")]
    Parse { row: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

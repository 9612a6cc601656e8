use thiserror::Error;

/// Errors raised across the catalog, verifier and spectral layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Bad caller input: out-of-range index, violated parameter constraint, k = 0, ...
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A point or window that leaves the regular region of an instance.
    #[error("domain error: {0}")]
    Domain(String),
    /// Overflow, non-finite values, eigensolver trouble.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// Guard clauses of composite operations (e.g. spectrum comparison on a non shape-invariant instance).
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The SUSY ladder could not be continued because the shifted ground state is not normalizable.
    #[error("ladder truncated at level {level}: {reason}")]
    LadderTruncated { level: usize, reason: String },
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

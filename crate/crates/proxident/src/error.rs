use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite entry rejected")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} did not converge within its iteration cap")]
    NoConvergence(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid solver config: {0}")]
    InvalidConfig(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

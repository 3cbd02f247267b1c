use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid chain specification: {0}")]
    InvalidSpec(String),

    #[error("argument outside supported domain: {0}")]
    Domain(String),

    #[error("unsupported coupling model: {0}")]
    UnsupportedModel(String),

    #[error("oracle capacity exceeded: {n_spins} spins requested, limit is {limit}")]
    Capacity { n_spins: usize, limit: usize },

    #[error("singular evaluation: {0}")]
    Singularity(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

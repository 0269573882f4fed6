use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("capacity exceeded: {what} is {size}, limit {limit}")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("operator is not Hermitian")]
    NotHermitian,

    #[error("index {index} out of range for {what} (len {len})")]
    Index {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("lattice construction failed: {0}")]
    Construction(String),

    #[error("invalid coupling parameters: {0}")]
    Coupling(String),

    #[error("path is not on the lattice: {0}")]
    Path(String),

    #[error("illegal move #{index}: {reason}")]
    IllegalMove { index: usize, reason: String },

    #[error("braid does not close: {0}")]
    OpenBraid(String),

    #[error("cluster unsuitable: {0}")]
    Cluster(String),

    #[error("invalid encoding: {0}")]
    Encoding(String),

    #[error("state is outside the code space: {0}")]
    CodeSpace(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

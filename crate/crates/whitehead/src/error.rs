use thiserror::Error;

/// Crate-wide error type. Domain errors map to CLI exit code 2,
/// resource-cap errors to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("vertex {0} dominates the graph (Γ-st(v) is empty)")]
    Dominating(usize),

    #[error("graph is not reduced: vertex {0} is dominating")]
    NotReduced(usize),

    #[error("based partitions have different operative vertices ({0} and {1})")]
    OperativeMismatch(usize, usize),

    #[error("vertices {0} and {1} are adjacent")]
    Adjacent(usize, usize),

    #[error("not a component: {0}")]
    NotAComponent(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("incompatible generator set: {0}")]
    Incompatible(String),

    #[error("poset exceeds cap of {cap} elements ({partial} found so far)")]
    Cap { cap: usize, partial: usize },

    #[error("generator {0} has no assigned word")]
    Unassigned(String),

    #[error("cell set is not closed under faces: {0}")]
    NotFaceClosed(String),

    #[error("dimension mismatch: {0}")]
    Dimensions(String),

    #[error("case analysis fell through: {0}")]
    CaseGap(String),

    #[error("cache mismatch: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// CLI exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Cap { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

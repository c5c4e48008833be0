use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("duplicate edge from `{vertex}` with label `{label}`")]
    DuplicateEdge { vertex: String, label: String },
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("label alphabets differ")]
    AlphabetMismatch,
    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("column is not a unit vector (norm {0})")]
    NonUnitColumn(f64),
    #[error("requested level {requested} exceeds truncation depth {depth}")]
    DepthExceeded { requested: usize, depth: usize },
    #[error("problem too large for the dense oracle: {unknowns} unknowns (limit {limit})")]
    SizeLimit { unknowns: usize, limit: usize },
    #[error("iteration did not converge after {0} steps")]
    NoConvergence(usize),
    #[error("invalid spectral system: {0}")]
    InvalidSystem(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

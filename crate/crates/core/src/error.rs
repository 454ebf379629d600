use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: u32, n: usize },

    #[error("vertex ids must be in 1..=64 (got {0})")]
    VertexLimit(u64),

    #[error("at most 64 vertices are supported (got n = {0})")]
    TooManyVertices(usize),

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("edge vertices must be strictly increasing: {0:?}")]
    UnsortedEdge(Vec<u32>),

    #[error("duplicate edge {0}")]
    DuplicateEdge(String),

    #[error("pair operators need two distinct vertices (got {0} twice)")]
    SameVertex(u32),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("infeasible weighting: {0}")]
    InfeasibleWeighting(String),

    #[error("enumeration guard exceeded: C({t}, {r}) = {ground} > {limit}")]
    GuardExceeded {
        t: usize,
        r: usize,
        ground: u64,
        limit: u64,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

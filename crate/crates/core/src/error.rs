use thiserror::Error;

use crate::graph::{EdgeKey, Vertex};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("edge {0} is not an edge of the host graph")]
    InvalidEdge(EdgeKey),

    #[error("edge {0} is already missing")]
    AlreadyMissing(EdgeKey),

    #[error("duplicate edge {0} in input")]
    DuplicateEdge(EdgeKey),

    #[error("vertex {0} is out of range")]
    InvalidVertex(Vertex),

    #[error("transversal must pick one vertex from each of {expected} parts, got {got}")]
    TransversalLength { expected: usize, got: usize },

    #[error("defect budget infeasible: {0}")]
    InfeasibleBudget(String),

    #[error("operator is singular: {0}")]
    Singular(String),

    #[error("graph is not admissible: {0}")]
    Inadmissible(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("negative edge weight {value:e} at edge {edge}")]
    NegativeWeight { edge: EdgeKey, value: f64 },

    #[error("dense oracle size {size} exceeds cap {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

use thiserror::Error;

/// Errors raised by the graph-level algorithms (quivers, paths, commerge, comcut).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("quiver is not well-formed: arc {arc} has an endpoint out of bound")]
    NotWellFormed { arc: usize },
    #[error("subquiver is not well-formed for the host quiver: {0}")]
    RestrIllFormed(String),
    #[error("quiver has a directed cycle")]
    Cycle,
    #[error("vertex {0} is out of bound")]
    VertexOutOfBound(usize),
    #[error("invalid bipath: {0}")]
    InvalidBipath(String),
    #[error("path count {count} exceeds the cap of {cap}")]
    CapExceeded { count: usize, cap: usize },
    #[error("no path from {u} to {v}")]
    NoPath { u: usize, v: usize },
}

pub type Result<T, E = QuiverError> = std::result::Result<T, E>;

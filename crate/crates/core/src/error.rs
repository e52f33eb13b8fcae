use thiserror::Error;

use crate::colouring::Vertex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid host: {0}")]
    InvalidHost(String),

    #[error("malformed colouring: {0}")]
    MalformedColouring(String),

    #[error("colouring is not proper: {count} violation(s), first at vertex {vertex} colour {colour}")]
    ImproperColouring { count: usize, vertex: Vertex, colour: u64 },

    #[error("parse error on line {line}: {detail}")]
    Parse { line: usize, detail: String },

    #[error("invalid Latin square at row {row}, column {col}: {detail}")]
    InvalidLatinSquare { row: usize, col: usize, detail: String },

    #[error("colour id {0} out of range")]
    ColourOutOfRange(u32),

    #[error("invalid vertex set: {0}")]
    InvalidVertexSet(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown family '{0}'")]
    UnknownFamily(String),

    #[error("forest precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("augmentation stalled at {edges} edges, target {target}")]
    AugmentationStalled { edges: usize, target: usize },

    #[error("stale augmenting chain: {0}")]
    StaleChain(String),

    #[error("H shares colour {0} with the forest")]
    ColourOverlap(u32),

    #[error("parameters infeasible: {0}")]
    ParamsInfeasible(String),

    #[error("no closing edge between the first and last {b} vertices")]
    NoClosingEdge { b: usize },

    #[error("instance too large for exact search: {n} vertices, limit {limit}")]
    OverLimit { n: usize, limit: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Short stable code for machine-readable error lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidHost(_) => "invalid-host",
            Error::MalformedColouring(_) => "malformed-colouring",
            Error::ImproperColouring { .. } => "improper-colouring",
            Error::Parse { .. } => "parse",
            Error::InvalidLatinSquare { .. } => "invalid-latin-square",
            Error::ColourOutOfRange(_) => "colour-out-of-range",
            Error::InvalidVertexSet(_) => "invalid-vertex-set",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::UnknownFamily(_) => "unknown-family",
            Error::PreconditionFailed(_) => "forest-precondition-failed",
            Error::AugmentationStalled { .. } => "augmentation-stalled",
            Error::StaleChain(_) => "stale-chain",
            Error::ColourOverlap(_) => "colour-overlap",
            Error::ParamsInfeasible(_) => "params-infeasible",
            Error::NoClosingEdge { .. } => "no-closing-edge",
            Error::OverLimit { .. } => "over-limit",
            Error::Internal(_) => "internal",
        }
    }
}

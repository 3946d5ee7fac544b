use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),

    #[error("edge ({0}, {1}) is not in the graph")]
    UnknownEdge(Vertex, Vertex),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("universe mismatch: {0} vs {1} vertices")]
    UniverseMismatch(usize, usize),

    #[error("color counts {counts:?} do not match ratio {ratio:?}; no fair clustering exists")]
    RatioViolated { counts: Vec<usize>, ratio: Vec<u64> },

    #[error(
        "malformed stream for clustering {index}: pair ({u}, {v}) reported separated but lies in one cluster"
    )]
    MalformedStream { index: usize, u: Vertex, v: Vertex },

    #[error("inconsistent stream for clustering {index}: {msg}")]
    InconsistentStream { index: usize, msg: String },

    #[error("enumeration over {n} vertices exceeds the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("node id {id} out of range for graph with {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },

    #[error("node sets differ: {0}")]
    NodeSetMismatch(String),

    #[error("modularity undefined: graph has no edge weight")]
    EmptyGraph,

    #[error("infeasible benchmark spec: {0}")]
    InfeasibleSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("manifest error at {path}: {msg}")]
    Manifest { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

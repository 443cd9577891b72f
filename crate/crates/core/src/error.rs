use thiserror::Error;

/// Errors produced by graph construction, loaders, and batch generation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex id {id} out of range (vertex count {vertex_count})")]
    VertexOutOfRange { id: u64, vertex_count: usize },

    #[error("edge ({i}, {j}) has non-positive weight {weight}")]
    NonPositiveWeight { i: u32, j: u32, weight: f64 },

    #[error("community id {id} has no mapping at the next dendrogram level")]
    UnmappedCommunity { id: u32 },

    #[error("requested {requested} deletions but only {available} distinct edges exist")]
    NotEnoughEdges { requested: usize, available: usize },

    #[error("gave up sampling {requested} non-edges after {attempts} attempts")]
    InsertionSamplingExhausted { requested: usize, attempts: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("unsupported input format: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

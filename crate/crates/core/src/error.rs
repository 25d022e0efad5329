use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot compose: first route ends at {end}, second starts at {start}")]
    Composition { end: VertexId, start: VertexId },

    #[error("dwell position {pos} out of range for a route of length {len}")]
    DwellOutOfRange { pos: usize, len: usize },

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("unknown edge {0}")]
    UnknownEdge(String),

    #[error("edges do not form a route: edge {edge} does not start at {expected}")]
    Disconnected { edge: EdgeId, expected: VertexId },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {0} is not flexible")]
    NotFlexible(String),

    #[error("malformed quotient: {0}")]
    MalformedQuotient(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed covering: {0}")]
    Covering(String),

    #[error("{path}: {message}")]
    Document { path: String, message: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn doc(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Document {
            path: path.into(),
            message: message.into(),
        }
    }
}

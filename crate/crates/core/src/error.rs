use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The instance is larger than the configured work budget. Callers are
    /// expected to shrink the instance or switch to a sampling method.
    #[error("resource budget exceeded: {what} needs {needed}, budget is {budget}")]
    Resource {
        what: &'static str,
        needed: u64,
        budget: u64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {vertex} outside ground set of size {ground_size}")]
    VertexOutOfRange { vertex: usize, ground_size: usize },

    /// The hypergraph contains the empty edge, so it is never q-small.
    #[error("trivial hypergraph: contains the empty edge")]
    Trivial,

    #[error("hypergraph has no edges")]
    NoEdges,

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

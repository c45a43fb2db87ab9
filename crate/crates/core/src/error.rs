use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("edge {0} has non-positive length {1}")]
    NonPositiveLength(usize, String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no edges")]
    EmptyEdgeSet,
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("invalid document: {0}")]
    Document(String),
    #[error("edge index {0} out of range ({1} edges)")]
    InvalidEdge(usize, usize),
    #[error("offset {0} outside [0,1]")]
    InvalidOffset(String),
    #[error("radius {0} is negative")]
    NegativeRadius(String),
    #[error("radius {0} must be positive")]
    NonPositiveRadius(String),
    #[error("empty set")]
    EmptySet,
    #[error("sets belong to different graphs")]
    GraphMismatch,
    #[error("merge radius needs two distinct points")]
    SamePoint,
    #[error("resolution must be 1/k for a positive integer k, got {0}")]
    BadResolution(String),
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable short identifier used in one-line error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedRational(_) => "malformed-rational",
            Error::NonPositiveLength(..) => "non-positive-length",
            Error::Disconnected => "disconnected",
            Error::EmptyEdgeSet => "empty-edge-set",
            Error::UnknownVertex(_) => "unknown-vertex",
            Error::DuplicateVertex(_) => "duplicate-vertex",
            Error::Document(_) => "bad-document",
            Error::InvalidEdge(..) => "invalid-edge",
            Error::InvalidOffset(_) => "invalid-offset",
            Error::NegativeRadius(_) => "negative-radius",
            Error::NonPositiveRadius(_) => "non-positive-radius",
            Error::EmptySet => "empty-set",
            Error::GraphMismatch => "graph-mismatch",
            Error::SamePoint => "same-point",
            Error::BadResolution(_) => "bad-resolution",
            Error::TooFewPoints(_) => "too-few-points",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

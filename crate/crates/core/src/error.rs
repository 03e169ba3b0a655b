use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Input data is malformed.
    Ingestion,
    /// A caller passed an argument outside the operation's domain.
    Usage,
    /// A supplied spanning tree is not a tree.
    Structural,
    /// A merge failed to realize its edge length.
    Placement,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("coordinate buffer of length {len} is not a multiple of dimension {dim}")]
    RaggedCoords { len: usize, dim: usize },
    #[error("point {point} coordinate {coord} is not finite")]
    NonFinite { point: usize, coord: usize },
    #[error("point {point} is the zero vector; angular distance is undefined")]
    ZeroVector { point: usize },
    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("edge ({a}, {b}) has invalid length {length}")]
    InvalidLength { a: usize, b: usize, length: f64 },
    #[error("edge ({a}, {a}) is a self loop")]
    SelfLoop { a: usize },
    #[error("edge ({a}, {b}) closes a cycle")]
    Cycle { a: usize, b: usize },
    #[error("edges leave {components} components; point {point} is not connected to point 0")]
    Disconnected { components: usize, point: usize },
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("cutoff {k} exceeds the number of tree edges {max}")]
    CutoffOutOfRange { k: usize, max: usize },
    #[error("operation needs at least one point")]
    EmptyInput,
    #[error("operation is undefined for a single-point hull")]
    PointHull,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("merge of edge ({a}, {b}) achieved gap {achieved}, expected {expected}")]
    GapViolation { a: usize, b: usize, expected: f64, achieved: f64 },
}


impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::EmptyCloud
            | Error::ZeroDimension
            | Error::RaggedCoords { .. }
            | Error::NonFinite { .. }
            | Error::ZeroVector { .. } => ErrorKind::Ingestion,
            Error::InvalidLength { .. }
            | Error::SelfLoop { .. }
            | Error::Cycle { .. }
            | Error::Disconnected { .. } => ErrorKind::Structural,
            Error::GapViolation { .. } => ErrorKind::Placement,
            Error::IndexOutOfRange { .. }
            | Error::SizeMismatch { .. }
            | Error::CutoffOutOfRange { .. }
            | Error::EmptyInput
            | Error::PointHull
            | Error::InvalidParameter(_) => ErrorKind::Usage,
        }
    }
}

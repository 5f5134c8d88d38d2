use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("walk does not close: gap {gap:e} exceeds tolerance {tolerance:e}")]
    NotClosed { gap: f64, tolerance: f64 },

    #[error("direction is not generic: vertices {0} and {1} are at equal height")]
    NonGenericDirection(usize, usize),

    #[error("diagram is degenerate: {0}")]
    DegenerateDiagram(String),

    #[error("{what} too large: {got} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("inconsistent code: {0}")]
    InconsistentCode(String),

    #[error("certificate does not cover vertex {0}")]
    MissingVertex(usize),

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

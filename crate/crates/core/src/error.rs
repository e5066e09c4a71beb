use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("cochains live on different complexes")]
    ComplexMismatch,

    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },

    #[error("search too large for exact mode: {what} needs {required:.3e} candidates (limit {limit:.0e}); try a heuristic mode")]
    SizeGuard { what: String, required: f64, limit: f64 },

    #[error("complex is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no filling found after {expanded} expansions ({frontier} nodes open, shortest word {shortest}); this does not prove the loop unfillable")]
    FillingFailed { expanded: usize, frontier: usize, shortest: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema { location: location.into(), message: message.into() }
    }

    pub(crate) fn guard(what: impl Into<String>, required: f64, limit: f64) -> Self {
        Error::SizeGuard { what: what.into(), required, limit }
    }
}

//! Error type shared across the library.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value is outside its documented range.
    #[error("invalid {field}: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    /// Dimension of a point does not match the data it is evaluated against.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A domain constructor could not certify uniform convexity.
    #[error("curvature bound not positive: {0}")]
    CurvatureBound(String),

    /// Point classification failed a strict-interior precondition.
    #[error("point ({0}, {1}) is not strictly interior")]
    NotInterior(f64, f64),

    /// A local graph chart is wider than the graph condition allows.
    #[error("chart too wide: {0}")]
    ChartTooWide(String),

    /// The requested quadrature resolution exceeds the hard cap.
    #[error("resolution {needed} exceeds cap {cap}: {hint}")]
    ResolutionCap { needed: u64, cap: u64, hint: &'static str },

    /// The discrete integral equation could not be solved to tolerance.
    #[error("linear solve failed: {0}")]
    SolveFailure(String),

    /// A backend was asked to handle a domain it does not support.
    #[error("backend `{backend}` does not support domain `{domain}`")]
    UnsupportedDomain { backend: &'static str, domain: String },

    /// Unknown name passed to one of the strategy registries.
    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy { kind: &'static str, name: String, available: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty point set: {0}")]
    EmptySet(&'static str),

    #[error("need at least {needed} points, found {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("graph is disconnected: vertices {u} and {v} are not connected by finite-weight edges")]
    Disconnected { u: usize, v: usize },

    #[error("no valid partition: threshold size {k} exceeds vertex count {m}")]
    NoPartition { k: usize, m: usize },

    #[error("tree does not match instance: {0}")]
    TreeMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("out of regime: p = {p} must be below d = {d}")]
    OutOfRegime { p: f64, d: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

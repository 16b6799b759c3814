use thiserror::Error;

/// Errors raised by grid construction, sampling and the norm operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("support of {what} reaches radius {radius}, beyond the usable radius {limit}")]
    SupportViolation {
        what: String,
        radius: f64,
        limit: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("functions live on different grids")]
    GridMismatch,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("reference evaluator refuses {cells} cells per axis in dimension {dim} (limit {limit})")]
    SizeGuard { dim: usize, cells: usize, limit: usize },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("invalid block at k = {k}: {reason}")]
    InvalidBlock { k: i32, reason: String },

    #[error("parameter pair matches neither inclusion pattern: {0}")]
    ParameterPair(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis index {index} exceeds the hard cap {cap}")]
    IndexCap { index: usize, cap: usize },

    #[error("grid half-width {actual} too small; need at least {required}")]
    Support { required: f64, actual: f64 },

    #[error("grid spacing {actual} too coarse; need at most {required}")]
    Resolution { required: f64, actual: f64 },

    #[error("function is not negligible at the grid edge (|f| = {0:e})")]
    EdgeDecay(f64),

    #[error("non-finite sample at node {0}")]
    NonFinite(usize),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("comb is not admissible: {0}")]
    Inadmissible(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed result document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by group, measure and analysis operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("operands live on different groups")]
    GroupMismatch,

    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),

    #[error("unsupported group: {0}")]
    Unsupported(String),

    #[error("seed set must be nonempty")]
    EmptySeed,

    #[error("measure has empty support")]
    EmptySupport,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("invalid representation data: {0}")]
    InvalidDual(String),

    #[error("density grid would need {needed} breakpoints (cap {cap})")]
    BreakpointCap { needed: usize, cap: usize },

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("truncation error bound {bound:e} exceeds tolerance {tol:e}")]
    Truncation { bound: f64, tol: f64 },

    #[error("Parseval identity violated: spectral {spectral} vs direct {direct}")]
    Parseval { spectral: f64, direct: f64 },

    #[error("variance constant is zero; {0}")]
    Degenerate(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("resource budget exceeded: {needed} steps requested, budget {budget}")]
    Budget { needed: u64, budget: u64 },

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

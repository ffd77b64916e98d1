use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} did not converge after {iterations} iterations")]
    Convergence { what: String, iterations: usize },

    #[error("moment audit failed for {rule}: degree {degree} has relative error {error:.3e} (tolerance {tolerance:.1e})")]
    MomentAudit {
        rule: String,
        degree: usize,
        error: f64,
        tolerance: f64,
    },

    #[error("budget exceeded: {what} needs {requested}, cap is {cap}")]
    Budget {
        what: String,
        requested: u128,
        cap: u128,
    },

    #[error("dimension d={d} is not supported here (maximum {max})")]
    DimensionTooLarge { d: usize, max: usize },

    #[error("non-finite integrand value {value} at node {index} ({point:?})")]
    NonFinite {
        index: usize,
        point: Vec<f64>,
        value: f64,
    },

    #[error("quadrature exactness {available} is below the required degree {required}")]
    ExactnessInsufficient { required: usize, available: usize },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

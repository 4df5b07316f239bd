use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("{what} is not antisymmetric (defect {defect:e})")]
    NotAntisymmetric { what: &'static str, defect: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("nonpositive argument {name} = {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("flow stopped at t = {t}: {reason}")]
    FlowStopped { t: f64, reason: String },

    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },

    #[error("admissibility violated at node ({i}, {j}): factor {factor:e}")]
    Admissibility { i: usize, j: usize, factor: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<toml::de::Error> for Error {
    fn from(e: toml::de::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

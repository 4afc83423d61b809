use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension parameter m must be at least 1 (got {0})")]
    InvalidDim(u32),

    #[error("expected {expected} initial derivatives, got {got}")]
    AlphaLength { expected: usize, got: usize },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("source term e^(2mu) overflowed at r = {r} (u = {u})")]
    SourceOverflow { r: f64, u: f64 },

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("radius {r} outside covered interval [{lo}, {hi}]")]
    OutOfCoverage { r: f64, lo: f64, hi: f64 },

    #[error("barrier precondition violated: {0}")]
    BarrierPrecondition(String),

    #[error("kernel undefined at r = s = 0")]
    KernelOrigin,

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("samples are not on a geometric grid")]
    NotGeometric,

    #[error("least-squares fit is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("empty grid: {0}")]
    EmptyGrid(String),

    #[error("polynomial has {got} variables, expected {expected}")]
    VariableCount { expected: usize, got: usize },

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("{0}")]
    Precondition(String),
}

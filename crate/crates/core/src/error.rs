use thiserror::Error;

/// Errors raised by the sensing toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates from its conjugate partner by {deviation:.3e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("matrix dimension {0} outside supported range 1..=64")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: operands live on different quadrature grids")]
    GridMismatch,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("table is not strictly monotone at index {0}")]
    NonMonotone(usize),

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("invalid symmetry function: {0}")]
    InvalidSymmetry(String),

    #[error("likelihood vanishes across the grid for outcome {0}: model and data contradict")]
    Contradiction(String),

    #[error("inconsistent Lyapunov system: eigenvalue pair ({i}, {j}) sums to {sum:.3e} but right-hand side entry is {rhs:.3e}")]
    InconsistentLyapunov { i: usize, j: usize, sum: f64, rhs: f64 },

    #[error("probabilities sum to {0}, not 1")]
    Normalization(f64),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("symmetry function depends on the probe parameter (differs at eta = {eta}); probe optimisation needs a fixed loss and prior")]
    EtaDependentSymmetry { eta: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the linear algebra, state construction and bound evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix has {0} entries, which is not a positive square number")]
    NotSquare(usize),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("operator has no support (largest singular value is zero)")]
    ZeroOperator,

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("Kraus operators are not complete (residual {0:e})")]
    Incomplete(f64),

    #[error("invalid outcome grouping: {0}")]
    InvalidGrouping(String),

    #[error("outcome group {0} is empty")]
    EmptyGroup(usize),

    #[error("measurement carries an outcome grouping; use coarse_grain")]
    NotEfficient,

    #[error("measurement has no outcome grouping")]
    MissingGrouping,

    #[error("index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("ensemble contains mixed states")]
    NotPureEnsemble,

    #[error("evaluation budget {got} is below the minimum of {min}")]
    BudgetTooSmall { got: usize, min: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("equivalent evaluation paths disagree: {0:e} vs {1:e}")]
    FormMismatch(f64, f64),
}

pub type Result<T> = std::result::Result<T, Error>;

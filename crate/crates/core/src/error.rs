use thiserror::Error;

/// Errors raised by the numerical routines and the instance generator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent must lie in (0, inf], got {0}")]
    InvalidExponent(f64),
    #[error("function value must be finite and nonnegative, got {value} (cell {cell})")]
    InvalidValue { cell: usize, value: f64 },
    #[error("argument must be finite and nonnegative, got {0}")]
    InvalidArgument(f64),
    #[error("extended real must be nonnegative and not NaN, got {0}")]
    InvalidXReal(f64),
    #[error("partition must have at least one cell")]
    EmptyPartition,
    #[error("cell {cell} has measure {measure}; measures must be finite and positive")]
    InvalidMeasure { cell: usize, measure: f64 },
    #[error("expected {expected} cells, found {found}")]
    Misaligned { expected: usize, found: usize },
    #[error("sequence must have at least one term")]
    EmptySequence,
    #[error("scale must be finite and positive, got {0}")]
    InvalidScale(f64),
    #[error("tolerance must be finite and positive, got {0}")]
    InvalidTolerance(f64),
    #[error("theta must lie in [0, 1], got {0}")]
    InvalidTheta(f64),
    #[error("parameters outside the admissible regime: {0}")]
    OutOfRegime(String),
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("budget must be at least 1")]
    ZeroBudget,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

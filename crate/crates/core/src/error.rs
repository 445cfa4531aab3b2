use thiserror::Error;

/// Errors raised by lattice construction, enumeration and integration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrolovError {
    #[error("found {found} sign changes for a degree-{d} polynomial; expected {d}")]
    RootCountMismatch { d: usize, found: usize },

    #[error("argument outside the domain: {0}")]
    DomainError(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generator matrix is numerically singular (d = {d})")]
    SingularMatrix { d: usize },

    #[error("enumeration needs {candidates} candidates, budget is {limit}")]
    BudgetExceeded { candidates: u128, limit: u64 },

    #[error("integer vector must be nonzero")]
    ZeroVector,

    #[error("integrand returned a non-finite value {value} at {point:?}")]
    NonFiniteValue { value: f64, point: Vec<f64> },

    #[error("test function '{0}' has no closed-form Fourier transform")]
    UnsupportedFunction(String),

    #[error("need at least 3 records above the noise floor, got {usable}")]
    InsufficientData { usable: usize },
}

pub type Result<T> = std::result::Result<T, FrolovError>;

use thiserror::Error;

use crate::lift::Mode;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision cap must be at least 1")]
    InvalidPrecisionCap,
    #[error("exponent {exponent} exceeds the precision cap {cap}")]
    PrecisionCapExceeded { exponent: u64, cap: u64 },
    #[error("{0} is not a unit (divisible by p)")]
    NotAUnit(String),
    #[error("factor index {index} out of range for {len} factors")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("polynomial of degree zero where degree >= 1 is required")]
    DegreeZero,
    #[error("factor list is empty")]
    EmptyFactorList,
    #[error("factor {0} has degree zero")]
    DegreeZeroFactor(usize),
    #[error("resultant of the factors is zero")]
    ZeroResultant,
    #[error("factors are not in special form: {0}")]
    NotSpecialForm(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("working precision p^{working} cannot separate the elementary divisors")]
    PrecisionTooLow { working: u64 },
    #[error("entry {index} has valuation {valuation}, below the required bound {bound}")]
    InsufficientValuation {
        index: usize,
        valuation: u64,
        bound: u64,
    },
    #[error("matrix/vector dimensions do not match: {0}")]
    DimensionMismatch(String),
    #[error("factor degrees sum to {actual}, but deg f = {expected}")]
    DegreeMismatch { expected: usize, actual: usize },
    #[error("f is not congruent to the product of the factors modulo p^{s}")]
    NotCongruent { s: u64 },
    #[error("{mode} mode requires s >= {required}, got s = {actual}")]
    PrecisionBoundViolated {
        mode: Mode,
        required: u64,
        actual: u64,
    },
    #[error("factorization is exact; nothing left to lift")]
    ExactFactorizationReached,
    #[error("target precision not reached after {0} steps")]
    MaxStepsExceeded(usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),
    #[error("{path}: {message}")]
    InvalidInput { path: String, message: String },
}

impl Error {
    pub(crate) fn input(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidInput {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Errors caused by the computation contradicting a proven bound, as
    /// opposed to bad user input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InvariantViolated(_))
    }
}

use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector has dimension {got}, form has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coefficients must be positive integers")]
    ZeroCoefficient,

    #[error("variable index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("quadratic part is not positive definite")]
    NotPositiveDefinite,

    #[error("cross-term configuration is not connected")]
    NotConnected,

    #[error("configuration entry ({i},{j}) is invalid: {reason}")]
    BadConfigEntry { i: usize, j: usize, reason: &'static str },

    #[error("counting convention {convention} is not defined for this form")]
    InvalidConvention { convention: &'static str },

    #[error("form is not normalized: minimum is {min}, expected 0")]
    NotNormalized { min: i64 },

    #[error("form takes the negative value {min}; series start at q^0")]
    NegativeValues { min: i64 },

    #[error("eta product has leading power {num}/24, not an integer")]
    NonIntegralLeadingPower { num: i64 },

    #[error("series constant term must be a unit to invert")]
    NonUnitConstantTerm,

    #[error("{n} is too large for {what} (limit {limit})")]
    TooLarge { what: &'static str, n: u64, limit: u64 },

    #[error("{n} is too small for {what} (minimum {limit})")]
    TooSmall { what: &'static str, n: u64, limit: u64 },

    #[error("n+1 has a factor {remaining} with no prime divisor below the trial bound; supply the factorization")]
    IncompleteFactorization { remaining: u64 },

    #[error("supplied factorization multiplies to {got}, expected {expected}")]
    BadFactorization { expected: u64, got: u64 },

    #[error("unknown identity leaf `{0}`")]
    UnknownLeaf(String),

    #[error("{0}")]
    InvalidParameter(String),
}

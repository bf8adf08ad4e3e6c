use thiserror::Error;

/// Errors raised by the exact algebra, geometry and optimization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("polynomial must have a nonzero constant term")]
    ZeroConstantTerm,
    #[error("polynomial must have degree at least {0}")]
    DegreeTooSmall(usize),
    #[error("series constant term must be {expected}, found {found}")]
    NonUnitConstant { expected: i64, found: String },
    #[error("series coefficient at index {index} is not an integer ({value})")]
    NonIntegerCoefficient { index: usize, value: String },
    #[error("need at least {needed} series coefficients, have {available}")]
    InsufficientCoefficients { needed: usize, available: usize },
    #[error("weights sum to {0}, expected 1")]
    WeightSumError(f64),
    #[error("weight {0} is not positive")]
    NonPositiveWeight(f64),
    #[error("angle and weight lists differ in length ({angles} vs {weights})")]
    LengthMismatch { angles: usize, weights: usize },
    #[error("configuration has no points")]
    EmptyConfiguration,
    #[error("weight {weight} is not a multiple of 1/{denominator}")]
    NonRationalWeights { weight: f64, denominator: u64 },
    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("{0}")]
    Assertion(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

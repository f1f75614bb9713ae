use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero vector has no primitive representative")]
    ZeroVector,

    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("matrix is not unimodular (determinant {determinant})")]
    NotUnimodular { determinant: String },

    #[error("point ({0}) lies outside the support of the base fan")]
    OutsideSupport(String),

    #[error("unbounded: divisor not nef in some direction")]
    Unbounded,

    #[error("divisor is not nef: {0}")]
    NotNef(String),

    #[error("expected {expected} divisors, got {got}")]
    WrongDivisorCount { expected: usize, got: usize },

    #[error("coefficient count {got} does not match ray count {expected}")]
    WrongCoefficientCount { expected: usize, got: usize },

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("invalid twist data: {0}")]
    InvalidTwist(String),

    #[error("borel approximation requires a smooth complete fan: {0}")]
    BorelInput(String),

    #[error("problem too large for the desk-scale kernel: {0}")]
    TooLarge(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid character conductor {0}: expected 1, odd squarefree m, or 4m")]
    InvalidConductor(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {prime} divides the level {level}")]
    PrimeDividesLevel { prime: u64, level: u64 },
    #[error("gcd({a}, {b}) != 1")]
    NotCoprime { a: u64, b: u64 },
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("divisibility precondition failed: {0}")]
    Divisibility(String),
    #[error("level {0} is outside the supported range")]
    LevelOutOfRange(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no rational newform found at level {0}")]
    NoRationalNewform(u64),
    #[error("newform is not normalized; calibrate it first")]
    NotNormalized,
    #[error("normalization calibration failed: {0}")]
    CalibrationFailed(String),
    #[error("singular Weierstrass model: {0}")]
    SingularModel(String),
    #[error("prime {0} is a prime of bad reduction")]
    BadReduction(u64),
    #[error("point count at {prime} violates the Hasse bound ({count})")]
    HasseViolation { prime: u64, count: u64 },
    #[error("numeric precision {0} bits is below the supported minimum")]
    PrecisionTooLow(u32),
    #[error("root number could not be determined numerically")]
    RootNumberIndeterminate,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("{0}")]
    Invalid(String),
}

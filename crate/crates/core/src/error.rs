use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("gcd undefined: both polynomials are zero")]
    GcdUndefined,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("scaling factor must be nonzero")]
    ZeroScale,
    #[error("pole at evaluation point {0}")]
    Pole(String),
    #[error("not a pole: {0}")]
    NotAPole(String),
    #[error("pole not simple: {0}")]
    PoleNotSimple(String),
    #[error("series exponential needs a zero constant term")]
    NonzeroConstantTerm,
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("genus 0 curves are not supported")]
    GenusZero,
    #[error("Hasse bound violated: a^2 = {a_squared} > 4q = {four_q}")]
    Hasse { a_squared: String, four_q: String },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("enumeration bound exceeded: q^k = {0} > 2^20")]
    EnumerationBound(u64),
    #[error("unsupported equation: {0}")]
    UnsupportedEquation(String),
    #[error("inconsistent point counts: {0}")]
    InconsistentCounts(String),

    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("derivation inconsistency: {0}")]
    DerivationInconsistency(String),
    #[error("level violates the alpha/beta shape: {0}")]
    InvariantShape(String),
    #[error("genus mismatch: expected {expected}, got {actual}")]
    GenusMismatch { expected: u32, actual: u32 },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("special values computed to depth {have}, need {need}")]
    InsufficientDepth { have: usize, need: usize },
    #[error("gamma polynomial inconsistency: {0}")]
    GammaInconsistency(String),
}

use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
///
/// Verdicts that merely record a failed check (a condition that does not
/// hold on the sample, a certificate that does not pass) are data, not
/// errors; only contract violations and numerical breakdowns end up here.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("period must be at least {min}, got {got}")]
    PeriodTooSmall { min: usize, got: usize },

    #[error("sequence contains a non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("index {index} outside 1..={period}")]
    IndexOutOfRange { index: i64, period: usize },

    #[error("period mismatch: {left} vs {right}")]
    PeriodMismatch { left: usize, right: usize },

    #[error("beta-norm exponent must be >= 1, got {0}")]
    InvalidExponent(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sampling grid is empty")]
    EmptyGrid,

    #[error("(A3) constant w3 = {w3} does not exceed lambda_max/2 = {half_lambda_max}; the coercivity bound is vacuous")]
    VacuousBound { w3: f64, half_lambda_max: f64 },

    #[error("mountain geometry invalid: {0}")]
    InvalidGeometry(String),

    #[error("no mountain on this ray: profile max {max} does not exceed level {level}")]
    NoMountain { max: f64, level: f64 },

    #[error("bisection bracket not found: {0}")]
    BracketNotFound(String),

    #[error("direction is not an eigenvector of B (defect {defect:e})")]
    NotEigenvector { defect: f64 },

    #[error("direction entries must lie in {{0, 1, -1}}")]
    DirectionEntries,

    #[error("ray reduction needs an even profile with constant weight: {0}")]
    RayReduction(String),

    #[error("singular Jacobian at iteration {iteration} (reciprocal condition {rcond:e})")]
    SingularJacobian { iteration: usize, rcond: f64 },

    #[error("newton iteration diverged at iteration {iteration} (residual {residual:e})")]
    Divergence { iteration: usize, residual: f64 },

    #[error("integrator step size underflow at t = {t} (state {state:?})")]
    StepUnderflow { t: f64, state: Vec<f64> },

    #[error("path needs an even knot count N >= 8, got {0}")]
    InvalidKnots(usize),

    #[error("catalog is empty")]
    EmptyCatalog,

    #[error("certificate mismatch: {0}")]
    CertificateMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

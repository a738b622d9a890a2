use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T, E = CurvError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvError {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{quantity} is not positive at t = {t}: value {value}")]
    NonPositive {
        quantity: &'static str,
        t: f64,
        value: f64,
    },

    #[error("t = {t} is outside the domain (t must exceed {min})")]
    OutOfDomain { t: f64, min: f64 },

    #[error("dimension n = {got} is too small: at least {required} is required")]
    DimensionTooSmall { required: usize, got: usize },

    #[error("invalid base geometry: {0}")]
    InvalidBase(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ordering violated: u_minus > u_plus at t = {t}")]
    OrderingViolated { t: f64 },

    #[error("{role} check failed at t = {t} (residual {residual})")]
    NotABarrier {
        role: &'static str,
        t: f64,
        residual: f64,
    },

    #[error("iterate {iterate} left the bracket [u_minus, u_plus] at t = {t}")]
    LeftBracket { iterate: usize, t: f64 },

    #[error("iterate {iterate} is not monotone at t = {t}")]
    NotMonotone { iterate: usize, t: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("stiff failure: step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("stiff failure: step budget of {steps} exhausted at t = {t}")]
    StepBudget { steps: usize, t: f64 },

    #[error("interval too short: T must be at least {required}")]
    IntervalTooShort { required: f64 },

    #[error("metric is singular or not positive definite at the probe point")]
    SingularMetric,

    #[error("incompatible grids: {0}")]
    IncompatibleGrid(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

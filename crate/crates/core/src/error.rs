use thiserror::Error;

/// Errors produced by the quadrature engine, kernel evaluators and transforms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("integrand is not finite at node u = {node:e} (value {value})")]
    NonFiniteIntegrand { node: f64, value: f64 },

    #[error("invalid decay hint: rate must be positive, got {0}")]
    InvalidDecayHint(f64),

    #[error("divergent integral: endpoint exponent gamma = {0} must be < 1")]
    DivergentIntegral(f64),

    #[error("quadrature did not converge ({context}): value {value:e}, error estimate {error_estimate:e}")]
    NotConverged {
        context: String,
        value: f64,
        error_estimate: f64,
    },

    #[error("closed form is singular at alpha = {alpha}, index = {index}")]
    SingularIdentity { alpha: f64, index: f64 },

    #[error("unsupported order alpha = {alpha}: {reason}")]
    UnsupportedOrder { alpha: f64, reason: &'static str },

    #[error("missing decay statement: {0}")]
    MissingDecay(String),
}

pub type Result<T> = std::result::Result<T, Error>;

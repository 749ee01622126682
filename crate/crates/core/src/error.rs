use thiserror::Error;

/// Errors raised by the library.
///
/// Numeric payloads are carried as `f64` whatever the scalar type of the
/// failing computation, so the error type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LdpError {
    /// The exponential moment is infinite at the requested tilt.
    #[error("exponential moment diverges: lambda = {lambda} is not below the abscissa {lambda_max}")]
    Divergence { lambda: f64, lambda_max: f64 },

    /// Caller-side misuse: bad order, non-positive horizon, empty grid and so on.
    #[error("invalid argument: {0}")]
    Usage(String),

    /// A distribution could not be constructed or parsed.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// The saddle-point solver ran out of iterations.
    #[error("tilt solver did not converge after {iterations} iterations (last bracket [{lo}, {hi}])")]
    NoConvergence { iterations: usize, lo: f64, hi: f64 },

    /// The target lies outside the range of the cumulant's derivative.
    #[error("u = {u} is outside the attainable range of the cumulant derivative ({u_min}, {u_max})")]
    OutOfRange { u: f64, u_min: f64, u_max: f64 },

    /// A closed form overflowed or produced NaN.
    #[error("non-finite result in {0}")]
    NonFinite(&'static str),
}

impl LdpError {
    /// `true` for argument and parsing errors, `false` for numerical failures.
    pub fn is_usage(&self) -> bool {
        matches!(self, LdpError::Usage(_) | LdpError::InvalidDistribution(_))
    }
}

pub type Result<T> = std::result::Result<T, LdpError>;

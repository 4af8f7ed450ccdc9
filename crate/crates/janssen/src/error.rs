//! Error vocabulary shared by every certified operation.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The requested enclosure width is unreachable at the configured bits.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// Exact-arithmetic order cap exceeded (factorials kept exact).
    #[error("order too large: {0}")]
    OrderTooLarge(String),

    /// Below the hypothesis floor of the invoked estimate.
    #[error("order too small: {0}")]
    OrderTooSmall(String),

    /// Negative argument where a nonnegative one is required.
    #[error("negative argument: {0}")]
    NegativeArgument(String),

    /// Argument outside the validity region of a bound.
    #[error("domain error: {0}")]
    DomainError(String),

    /// An analytic hypothesis of a tail estimate cannot be certified.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// Adaptive bisection hit its depth limit before certifying.
    #[error("subdivision limit exceeded: {0}")]
    SubdivisionLimitExceeded(String),

    /// Malformed configuration or flag value.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

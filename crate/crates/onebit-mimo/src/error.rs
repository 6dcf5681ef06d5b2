use thiserror::Error;

/// Errors produced by configuration validation and shape checks.
///
/// All simulator hot paths are total functions; errors are raised up front,
/// before any trial runs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("N must divide M (got M={m}, N={n})")]
    GroupSplit { m: usize, n: usize },

    #[error("{name} must be positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must be at least 1 (got 0)")]
    ZeroCount { name: &'static str },

    #[error("bit vector length must be even (got {0})")]
    OddBitLength(usize),

    #[error("invalid bit character {0:?}; expected '0' or '1'")]
    InvalidBitChar(char),

    #[error("p_eps must lie in [0, 1/2) (got {0})")]
    PepsOutOfRange(f64),

    #[error("exact enumeration supports at most N={max} receive antennas for this decoder (got N={n})")]
    EnumerationBudget { n: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Positive-and-finite check shared by every config validator; NaN fails.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { name, value })
    }
}

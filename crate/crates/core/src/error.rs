use thiserror::Error;

/// Unified error type for grid construction, field algebra, transforms, and
/// experiment drivers.
#[derive(Debug, Error)]
pub enum CoreError {
    /// Grid parameters violate an invariant (parity, size cap, positivity).
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Two objects that must share a grid or space tag do not.
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// A scalar or structural argument is out of its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation would exceed its declared work or memory budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A precondition on data content failed (support, coverage, band limits).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Malformed on-disk data.
    #[error("format error: {0}")]
    Format(String),
}

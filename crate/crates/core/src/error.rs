use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the range on which the requested quantity is defined,
    /// e.g. a radius beyond the validity window of a compact space.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested quantity diverges at the evaluation point (typically r = 0).
    #[error("pole error: {0}")]
    Pole(String),

    /// A root bracket does not straddle a sign change.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// An iteration failed to reach the requested tolerance. Carries the best
    /// estimate obtained so far.
    #[error("convergence error: {what} (best estimate {best:e})")]
    Convergence { what: String, best: f64 },

    /// A linear-algebra factorization failed or a discretized operator is too
    /// ill-conditioned to trust.
    #[error("conditioning error: {0}")]
    Conditioning(String),

    /// A geometric precondition failed, e.g. loss of star-shapedness about an
    /// integration center.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// The model data itself is inconsistent (non-positive warp, bad Fourier tail, ...).
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// The operation is not defined for the given model kind.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A theorem hypothesis that the caller asked to rely on does not hold.
    #[error("hypothesis error: {0}")]
    Hypothesis(String),

    /// Malformed input data (JSON, CSV, argument validation).
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Crate-wide error type.
//!
//! Variants are grouped by how the CLI maps them to exit codes: bad or
//! degenerate input (2), analysis that legitimately finds nothing (3), and
//! numerical failure (4).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameters collide with a structural degeneracy (a = 0, bc = 0, c = k+1).
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    /// Parameters are finite but outside an operation's domain.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// Parameters violate the homoclinic regime 0 <= k+1 < c, a < 0, b > 0.
    #[error("outside homoclinic regime: {0}")]
    OutsideRegime(String),

    /// The requested reduction is representable but not implemented.
    #[error("unsupported reduction: {0}")]
    UnsupportedReduction(String),

    /// A closed-form reference was requested outside its validity set.
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    /// Evaluation of a function at a point outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Root bracketing failed: no strict sign change in the search interval.
    #[error("no sign change in [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    /// A trajectory left the region of interest before reaching the section.
    #[error("no section crossing: {0}")]
    NoCrossing(String),

    /// An iterative scheme exhausted its budget without meeting tolerance.
    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    /// A root was found but the derivative there is numerically zero.
    #[error("transversality failure: |derivative| = {value:.3e} below threshold")]
    TransversalityFailure { value: f64 },

    /// Adaptive step size collapsed below machine resolution.
    #[error("step underflow at t = {t:.6e}: {detail}")]
    StepUnderflow { t: f64, detail: String },

    /// Eigenvalues of the saddle frame are not cleanly separated.
    #[error("eigen failure: {0}")]
    EigenFailure(String),

    /// Configuration file or flag parsing problems.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            DegenerateParameters(_)
            | InvalidParameters(_)
            | OutsideRegime(_)
            | UnsupportedReduction(_)
            | UnsupportedParameters(_)
            | Domain(_)
            | Config(_)
            | Io(_)
            | Json(_) => 2,
            NoSignChange { .. } | NoCrossing(_) => 3,
            ConvergenceFailure(_)
            | TransversalityFailure { .. }
            | StepUnderflow { .. }
            | EigenFailure(_) => 4,
        }
    }
}

use thiserror::Error;

/// Crate-wide error type. CLI front ends map `InvalidInput` to exit code 2
/// and the numerical variants to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Evaluation was requested too close to a support point carrying a
    /// nonzero residue. The residue itself can be recovered from the
    /// function via [`crate::cauchy::CauchyFunction::residue`].
    #[error("evaluation at a pole: support index {index} (residue {residue})")]
    Pole { index: usize, residue: String },

    #[error("winding count unresolved: {0}")]
    UnresolvedWinding(String),

    #[error("orthogonalization breakdown: {0}")]
    GramBreakdown(String),

    #[error("degenerate stage: {0}")]
    DegenerateStage(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the set where the function is defined.
    #[error("domain error in {func}: {reason}")]
    Domain { func: &'static str, reason: String },

    /// The Fourier symbol was evaluated at the zero frequency.
    #[error("symbol is singular at zero frequency")]
    Singularity,

    /// Successive quadrature refinements disagreed by more than the tolerance.
    #[error("quadrature in {what} did not converge: achieved error {achieved:.3e}, tolerance {tolerance:.3e}")]
    Quadrature {
        what: &'static str,
        achieved: f64,
        tolerance: f64,
    },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("missing input: {0}")]
    MissingInput(String),

    /// A dense path was asked to handle more unknowns than it supports.
    #[error("{cells} cells exceed the dense limit of {limit}; use the matrix-free krylov path")]
    Capacity { cells: usize, limit: usize },

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(func: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            func,
            reason: reason.into(),
        }
    }
}

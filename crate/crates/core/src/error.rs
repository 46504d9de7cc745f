use thiserror::Error;

/// Errors raised across the workbench.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("variable `{0}` is not declared for this operation")]
    UndeclaredVariable(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("series error: {0}")]
    Series(String),

    #[error("pole at {0}")]
    Pole(String),

    #[error("fixed-point iteration did not converge at step {step} (residual {residual:e})")]
    NonConvergence { step: usize, residual: f64 },

    #[error("collision between particles {i} and {j} at step {step}")]
    Collision { i: usize, j: usize, step: usize },

    #[error("Laurent fit residual {residual:e} exceeds tolerance {tol:e}")]
    FitResidual { residual: f64, tol: f64 },

    #[error("singular curve: {0}")]
    SingularCurve(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

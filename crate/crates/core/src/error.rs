use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// `m = 0` in a coset enumeration: the isotropic vectors form infinite rays.
    #[error("norm index m = 0 is isotropic; use the constant-term formulas instead")]
    IsotropicNorm,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("truncation cannot certify tolerance {tol:e}: tail bound {bound:e}")]
    Truncation { tol: f64, bound: f64 },

    #[error("quadrature did not converge: error estimate {estimate:e} exceeds tolerance {tol:e}")]
    Quadrature { estimate: f64, tol: f64 },

    #[error("shift eps = {eps} outside the admissible window (0, {limit}) for t = {t}")]
    ShiftWindow { eps: f64, limit: f64, t: f64 },

    #[error("point ({x}, {y}) lies on the light cone")]
    LightCone { x: f64, y: f64 },

    #[error("extrapolation to s = 0 is ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),

    #[error("finite-difference step {0:e} is below the cancellation guard 1e-6")]
    StepTooSmall(f64),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

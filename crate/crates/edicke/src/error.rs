use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid classical state: {0}")]
    InvalidState(String),

    #[error("no real roots: {0}")]
    NoRealRoots(String),

    #[error("scaled energy {eps} lies below the ground energy {eps_min}")]
    BelowGround { eps: f64, eps_min: f64 },

    #[error("state too close to a pole of the Bloch sphere (1 - z^2 = {gap:.3e})")]
    PoleProximity { gap: f64 },

    #[error("empty energy shell: {0}")]
    EmptyShell(String),

    #[error("initial conditions do not share one energy shell: {0}")]
    ShellMismatch(String),

    #[error("point is not a fixed point: max |equation-of-motion rhs| = {residual:.3e}")]
    NotAFixedPoint { residual: f64 },

    #[error("basis dimension {dim} exceeds the dense-path guard {max}")]
    DimensionGuard { dim: usize, max: usize },

    #[error("insufficient states: {0}")]
    InsufficientStates(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

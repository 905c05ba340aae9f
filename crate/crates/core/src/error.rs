use thiserror::Error;

/// Everything that can go wrong while building or evaluating kinematic objects.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector is not a future-pointing unit timelike vector (dot = {norm_sq:.3e}, t = {t:.3e})")]
    NotFourVelocity { norm_sq: f64, t: f64 },

    #[error("generator is not metric-antisymmetric (residual {residual:.3e})")]
    NotAntisymmetric { residual: f64 },

    #[error("map is not an isometry of the rest space (residual {residual:.3e})")]
    NotIsometric { residual: f64 },

    #[error("map reverses orientation of the rest space")]
    ImproperRotation,

    #[error("superluminal motion requested (speed {speed})")]
    Superluminal { speed: f64 },

    #[error("profile evaluated outside its domain (k = {k}, {reason})")]
    ProfileDomain { k: f64, reason: &'static str },

    #[error("Newton iteration failed to converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("orthogonal-time equation has {count} roots in the search interval")]
    NonUniqueRoot { count: usize },

    #[error("orthogonal-time equation has no root in the search interval")]
    NoRoot,

    #[error("point lies beyond the curvature horizon of the world line (denominator {denominator:.3e})")]
    Singularity { denominator: f64 },

    #[error("world line is not an integral curve of the frame (mismatch {mismatch:.3e} at s = {s})")]
    NotIntegralCurve { mismatch: f64, s: f64 },

    #[error("step-halving check rejected the integration (change {change:.3e})")]
    StepRejected { change: f64 },

    #[error("initial vector is not orthogonal to the initial velocity (dot = {dot:.3e})")]
    NotOrthogonal { dot: f64 },

    #[error("velocity has not returned to its initial value (mismatch {mismatch:.3e})")]
    ReturnConditionViolated { mismatch: f64 },

    #[error("Foucault precession is not meaningful for this frame (antisymmetry residual {residual:.3e})")]
    NotMeaningful { residual: f64 },

    #[error("frame field undefined at the requested point: {0}")]
    FrameDomain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the analysis, planning and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not skew-symmetric (max |M + Mᵀ| = {residual:e})")]
    NotSkew { residual: f64 },

    #[error("drift matrix is (numerically) zero")]
    ZeroMatrix,

    #[error("bracket [A,B] vanishes (alpha = {alpha:e}); controllability is not guaranteed")]
    BracketVanishes { alpha: f64 },

    #[error("b3 = {b3:e} is too small; apply the b3 fixup rotation first")]
    DegenerateB3 { b3: f64 },

    #[error("rotation rate beta = {beta:e} is too small to define a circle")]
    DegenerateRotation { beta: f64 },

    #[error("latitude {z} is not reachable on a pole circle of hemisphere {hemisphere}")]
    LatitudeOutOfRange { z: f64, hemisphere: f64 },

    #[error("vector is not on the unit sphere (norm = {norm})")]
    NotUnit { norm: f64 },

    #[error("state left the sanity ball at t = {t} (norm = {norm})")]
    NonFiniteState { t: f64, norm: f64 },

    #[error("plan playback misses the target by {error:e}")]
    InternalValidation { error: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

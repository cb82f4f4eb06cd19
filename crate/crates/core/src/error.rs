use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KgoError {
    #[error("pole of {function} at argument {arg}")]
    Pole { function: &'static str, arg: f64 },

    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("{function} did not converge after {iterations} iterations")]
    NonConvergence {
        function: &'static str,
        iterations: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("z = {z} collides with the level E = {energy} (shell 2n+l = {shell})")]
    SpectrumCollision { z: String, energy: f64, shell: u32 },

    #[error("representation mismatch: {0}")]
    RepresentationMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(
        "singular value {value:e} is within a factor 10 of the kernel threshold {threshold:e}"
    )]
    ThresholdAmbiguity { value: f64, threshold: f64 },
}

pub type Result<T> = std::result::Result<T, KgoError>;

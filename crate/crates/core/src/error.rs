use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("deformation parameter q = {0} outside (0, 1]")]
    InvalidDeformation(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} overflowed the floating-point range")]
    Overflow { what: &'static str },

    #[error("q-exponential diverges: z = {z} is not below the convergence radius {radius}")]
    DivergentSeries { z: f64, radius: f64 },

    #[error("|alpha|^2 = {alpha_sq} lies outside the convergence disk |alpha|^2 < {radius}")]
    OutsideConvergenceDisk { alpha_sq: f64, radius: f64 },

    #[error("truncation too small: tail bound {tail_bound:e} exceeds tolerance {tol:e}")]
    TruncationTooSmall { tail_bound: f64, tol: f64 },

    #[error("tridiagonal eigensolver did not converge after {iterations} iterations")]
    EigensolveFailure { iterations: usize },

    #[error("Fock index {n} is outside the truncation of dimension {dim}")]
    IndexOutOfTruncation { n: usize, dim: usize },

    #[error("state and measure disagree: {0}")]
    MeasureMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

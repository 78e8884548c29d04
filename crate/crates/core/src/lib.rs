//! Numerics for the q-deformed harmonic oscillator (`AA† − q²A†A = 1`):
//! truncated operator matrices, the orthonormal polynomials generated by the
//! homodyne quadrature operator, its discrete spectral measure, and optical
//! tomograms of deformed Fock and coherent states.
//!
//! At `q = 1` every quantity reduces to the canonical oscillator, which gives
//! exact Hermite / Gauss–Hermite / Gaussian reference values.

pub mod error;
pub mod jacobi;
pub mod qcore;
pub mod qoperators;
pub mod qpolynomials;
pub mod quadrature_measure;
pub mod tomography;
pub mod tridiag;

pub use error::{Error, Result};
pub use qcore::{q_exponential, q_exponential_partial, q_factorial, q_number, DeformationParams};
pub use qoperators::{
    algebra_residual, build_ladder, build_quadrature, commutator_residual, OperatorLabel,
    OperatorMatrix,
};
pub use qpolynomials::{eval_j, hermite_reference, PolySequence};
pub use quadrature_measure::{
    compute_measure, eval_psi, orthonormality_residual, DiscreteWavefunction, SpectralMeasure,
};
pub use tomography::{
    gaussian_oracle, make_coherent, tomogram_coherent, tomogram_fock, QCoherentState,
    TomogramGrid,
};

/// Default absolute tolerance for series truncation.
pub const DEFAULT_TOL: f64 = 1e-12;

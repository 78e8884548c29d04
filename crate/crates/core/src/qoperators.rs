//! Truncated Fock-space matrices of `A`, `A†`, `X`, `P` and `X̂_θ`, and
//! residual checks of the defining algebra and the deformed commutator.

use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::jacobi::hermitian_eigen;
use crate::qcore::{q_number, DeformationParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorLabel {
    Annihilation,
    Creation,
    Position,
    Momentum,
    Quadrature(f64),
}

/// Dense complex matrix of an operator restricted to the first `dim` deformed
/// Fock states `|0⟩_q … |dim−1⟩_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    label: OperatorLabel,
    entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn new(label: OperatorLabel, entries: DMatrix<Complex64>) -> Self {
        assert!(entries.is_square(), "operator matrix must be square");
        Self { label, entries }
    }

    pub fn label(&self) -> OperatorLabel {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    /// Exact (bitwise) Hermiticity test.
    pub fn is_hermitian(&self) -> bool {
        self.entries == self.entries.adjoint()
    }

    /// Eigenvalues (ascending) and matching orthonormal eigenvectors (columns)
    /// from a dense Jacobi eigensolver. Independent of the tridiagonal path
    /// used by [`crate::compute_measure`].
    pub fn dense_eigen(&self) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
        hermitian_eigen(&self.entries)
    }
}

/// `(A, A†)` on the first `n` Fock states: `A[k−1][k] = √[k]`.
pub fn build_ladder(n: usize, p: &DeformationParams) -> (OperatorMatrix, OperatorMatrix) {
    assert!(n >= 1, "truncation must be at least 1");
    let mut a = DMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = Complex64::new(q_number(k, p).sqrt(), 0.0);
    }
    let a_dag = a.adjoint();
    (
        OperatorMatrix::new(OperatorLabel::Annihilation, a),
        OperatorMatrix::new(OperatorLabel::Creation, a_dag),
    )
}

/// `X̂_θ = √(1+q²)/2 · (A e^{−iθ} + A† e^{iθ})`; `θ` is reduced mod 2π.
pub fn build_quadrature(n: usize, p: &DeformationParams, theta: f64) -> OperatorMatrix {
    assert!(n >= 1, "truncation must be at least 1");
    let theta = theta.rem_euclid(TAU);
    let phase = Complex64::from_polar(1.0, -theta);
    let mut x = DMatrix::zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        let v = phase * (p.quad_scale() * q_number(k + 1, p).sqrt());
        x[(k, k + 1)] = v;
        x[(k + 1, k)] = v.conj();
    }
    OperatorMatrix::new(OperatorLabel::Quadrature(theta), x)
}

/// `X = α(A + A†)`, equal to `X̂_0`.
pub fn build_position(n: usize, p: &DeformationParams) -> OperatorMatrix {
    let (a, a_dag) = build_ladder(n, p);
    let x = (a.entries() + a_dag.entries()) * Complex64::new(p.quad_scale(), 0.0);
    OperatorMatrix::new(OperatorLabel::Position, x)
}

/// `P = iβ(A† − A)`, equal to `X̂_{π/2}`.
pub fn build_momentum(n: usize, p: &DeformationParams) -> OperatorMatrix {
    let (a, a_dag) = build_ladder(n, p);
    let m = (a_dag.entries() - a.entries()) * Complex64::new(0.0, p.quad_scale());
    OperatorMatrix::new(OperatorLabel::Momentum, m)
}

/// Max |entry| of `AA† − q²A†A − I`, skipping the bottom-right diagonal entry
/// (where truncation drops the `|n⟩ → |n+1⟩ → |n⟩` path).
pub fn algebra_residual(n: usize, p: &DeformationParams) -> f64 {
    assert!(n >= 2, "algebra residual needs N >= 2");
    let (a, a_dag) = build_ladder(n, p);
    let (a, a_dag) = (a.entries(), a_dag.entries());
    let r = a * a_dag - a_dag * a * Complex64::new(p.q_sq(), 0.0)
        - DMatrix::<Complex64>::identity(n, n);
    max_abs(&r, |i, j| !(i == n - 1 && j == n - 1))
}

/// Max |entry| of `[X,P] − i(I + (q²−1)/(q²+1)(X²+P²))` over the top-left
/// `(N−2)×(N−2)` block.
pub fn commutator_residual(n: usize, p: &DeformationParams) -> f64 {
    assert!(n >= 4, "commutator residual needs N >= 4");
    let x = build_position(n, p);
    let m = build_momentum(n, p);
    let (x, m) = (x.entries(), m.entries());
    let deform = (p.q_sq() - 1.0) / (p.q_sq() + 1.0);
    let rhs = (DMatrix::<Complex64>::identity(n, n)
        + (x * x + m * m) * Complex64::new(deform, 0.0))
        * Complex64::i();
    let r = x * m - m * x - rhs;
    max_abs(&r, |i, j| i < n - 2 && j < n - 2)
}

/// `θ`-covariance residual: max |X̂_θ − U(θ) X̂_0 U(θ)†| with `U = diag(e^{ikθ})`.
pub fn covariance_residual(n: usize, p: &DeformationParams, theta: f64) -> f64 {
    let x0 = build_quadrature(n, p, 0.0);
    let xt = build_quadrature(n, p, theta);
    let rotated = DMatrix::from_fn(n, n, |i, j| {
        Complex64::from_polar(1.0, (i as f64 - j as f64) * theta) * x0.get(i, j)
    });
    max_abs(&(xt.entries() - rotated), |_, _| true)
}

/// Max |X̂_0 − X| and |X̂_{π/2} − P|, relative to the largest entry of X.
/// (`cos(π/2)` rounds to 6e-17, so the absolute error grows like √N.)
pub fn canonical_consistency_residual(n: usize, p: &DeformationParams) -> f64 {
    let x = build_position(n, p);
    let dx = build_quadrature(n, p, 0.0).entries() - x.entries();
    let dp = build_quadrature(n, p, FRAC_PI_2).entries() - build_momentum(n, p).entries();
    let scale = max_abs(x.entries(), |_, _| true).max(f64::MIN_POSITIVE);
    max_abs(&dx, |_, _| true).max(max_abs(&dp, |_, _| true)) / scale
}

fn max_abs(m: &DMatrix<Complex64>, include: impl Fn(usize, usize) -> bool) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if include(i, j) {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn params(q: f64) -> DeformationParams {
        DeformationParams::new(q).unwrap()
    }

    #[test]
    fn ladder_examples() {
        let (a, _) = build_ladder(1, &params(0.5));
        assert_eq!(a.get(0, 0), Complex64::new(0.0, 0.0));

        let (a, a_dag) = build_ladder(3, &params(0.5));
        assert_abs_diff_eq!(a.get(0, 1).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a.get(1, 2).re, 1.118034, epsilon = 1e-6);
        let nonzero = a.entries().iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 2);
        assert_eq!(a_dag.entries(), &a.entries().adjoint());
        assert_eq!(a.label(), OperatorLabel::Annihilation);

        let (a, _) = build_ladder(3, &params(1.0));
        assert_eq!(a.get(0, 1).re, 1.0);
        assert_abs_diff_eq!(a.get(1, 2).re, 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn quadrature_examples() {
        let x = build_quadrature(2, &params(0.5), 0.0);
        assert_abs_diff_eq!(x.get(0, 1).re, 0.559017, epsilon = 1e-6);
        assert_abs_diff_eq!(x.get(1, 0).re, 0.559017, epsilon = 1e-6);
        assert_eq!(x.get(0, 0).norm(), 0.0);

        let x = build_quadrature(2, &params(1.0), 0.0);
        assert_abs_diff_eq!(x.get(0, 1).re, 1.0 / 2f64.sqrt(), epsilon = 1e-15);

        for q in [0.3, 0.5, 1.0] {
            assert!(canonical_consistency_residual(12, &params(q)) < 1e-15);
        }
    }

    #[test]
    fn quadrature_is_hermitian_with_zero_diagonal() {
        for theta in [0.0, 0.4, PI / 2.0, 2.9, 5.5, -1.0, 9.0] {
            let x = build_quadrature(10, &params(0.7), theta);
            assert!(x.is_hermitian());
            for k in 0..10 {
                assert_eq!(x.get(k, k).norm(), 0.0);
            }
        }
    }

    #[test]
    fn quadrature_theta_covariance() {
        for theta in [0.3, 1.0, PI / 2.0, 4.0] {
            assert!(covariance_residual(16, &params(0.6), theta) < 1e-14);
        }
    }

    #[test]
    fn quadrature_spectrum_within_bound() {
        for q in [0.3, 0.5, 0.9] {
            let p = params(q);
            let (vals, _) = build_quadrature(40, &p, 0.7).dense_eigen().unwrap();
            let bound = p.spectral_bound();
            assert!(vals.iter().all(|v| v.abs() <= bound));
        }
    }

    #[test]
    fn algebra_residual_examples() {
        assert!(algebra_residual(16, &params(0.5)) <= 1e-12);
        assert!(algebra_residual(2, &params(1.0)) <= 1e-15);
        assert!(algebra_residual(8, &params(0.9)) <= 1e-12);
    }

    #[test]
    fn algebra_artifact_entry_is_excluded_not_small() {
        // The excluded entry is genuinely wrong: -(1 + q^2 [N-1]) + ... != 0.
        let n = 6;
        let p = params(0.5);
        let (a, a_dag) = build_ladder(n, &p);
        let r = a.entries() * a_dag.entries()
            - a_dag.entries() * a.entries() * Complex64::new(p.q_sq(), 0.0);
        assert!((r[(n - 1, n - 1)].re - 1.0).abs() > 0.1);
    }

    #[test]
    fn commutator_residual_examples() {
        assert!(commutator_residual(16, &params(0.5)) <= 1e-12);
        assert!(commutator_residual(16, &params(1.0)) <= 1e-12);
        assert!(commutator_residual(4, &params(0.7)) <= 1e-12);
    }

    #[test]
    fn dense_eigen_is_sorted() {
        let (vals, vecs) = build_quadrature(7, &params(0.5), 1.1).dense_eigen().unwrap();
        assert!(vals.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(vecs.ncols(), 7);
    }
}

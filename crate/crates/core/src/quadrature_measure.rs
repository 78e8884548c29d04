//! Discrete spectral measure of the truncated quadrature operator and the
//! Fock-state quadrature wavefunctions sampled on it.
//!
//! The ground-state quadrature density is not available in closed form, so it
//! is represented by the Gauss rule of the Jacobi matrix `X̂_0`: nodes are the
//! eigenvalues and each weight is the squared first component of the
//! normalized eigenvector. Since that eigenvector is `(J_n(x_k))_n` up to
//! normalization, it is built from the recurrence and normalized directly; the
//! weight is then `1 / Σ_n J_n(x_k)²`, which keeps full relative accuracy even
//! for weights far below machine epsilon.

use std::f64::consts::TAU;
use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{q_number, DeformationParams};
use crate::qoperators::{build_quadrature, OperatorMatrix};
use crate::tridiag::eigen_symmetric_tridiagonal;

/// Nodes `x_k` (ascending) and weights `w_k` of the `N`-point Gauss rule of
/// the quadrature operator, with the table `J_n(x_k)` for `n < N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    params: DeformationParams,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    eigensolver_weights: Vec<f64>,
    /// `vectors[n * N + k] = J_n(x_k) √w_k`, the normalized eigenvector of node `k`.
    vectors: Vec<f64>,
}

impl SpectralMeasure {
    /// Truncation `N` (number of nodes and of Fock states).
    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn params(&self) -> &DeformationParams {
        &self.params
    }

    pub fn q(&self) -> f64 {
        self.params.q()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Squared first eigenvector components as tracked by the QL iteration.
    /// Agree with [`weights`](Self::weights) to roughly machine epsilon in
    /// absolute terms; kept for diagnostics.
    pub fn eigensolver_weights(&self) -> &[f64] {
        &self.eigensolver_weights
    }

    /// `J_n(x_k) √w_k`, component `n` of the normalized eigenvector at node `k`.
    pub fn component(&self, n: usize, k: usize) -> f64 {
        self.vectors[n * self.dim() + k]
    }

    /// `J_n(x_k)`, recovered from the stored eigenvector. Not finite where the
    /// weight underflows.
    pub fn poly(&self, n: usize, k: usize) -> f64 {
        self.component(n, k) / self.weights[k].sqrt()
    }

    /// Half-neighbour spacings `Δ_k = (x_{k+1} − x_{k−1})/2`, one-sided at the
    /// ends. For `N = 1` the single spacing is taken as 1.
    pub fn spacings(&self) -> Vec<f64> {
        let x = &self.nodes;
        let n = x.len();
        if n == 1 {
            return vec![1.0];
        }
        (0..n)
            .map(|k| match k {
                0 => x[1] - x[0],
                k if k == n - 1 => x[n - 1] - x[n - 2],
                k => (x[k + 1] - x[k - 1]) / 2.0,
            })
            .collect()
    }

    /// Density estimate `mass_k / Δ_k` for a per-node probability mass.
    pub fn density(&self, mass: &[f64]) -> Vec<f64> {
        mass.iter()
            .zip(self.spacings())
            .map(|(p, d)| p / d)
            .collect()
    }

    /// Max of `|x_k + x_{N−1−k}|` and `|w_k − w_{N−1−k}|`.
    pub fn mirror_residual(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let a = (self.nodes[k] + self.nodes[n - 1 - k]).abs();
                let b = (self.weights[k] - self.weights[n - 1 - k]).abs();
                a.max(b)
            })
            .fold(0.0, f64::max)
    }

    /// The `N×N` matrix `ψ_a[k]` (row = Fock index, column = node).
    pub fn psi_matrix(&self, theta: f64) -> DMatrix<Complex64> {
        let n = self.dim();
        let phases: Vec<Complex64> = (0..n).map(|a| fock_phase(a, theta)).collect();
        DMatrix::from_fn(n, n, |a, k| {
            phases[a] * self.component(a, k)
        })
    }

    /// Max entry of `ΨΨ† − I` and `Ψ†Ψ − I`.
    pub fn unitarity_residual(&self, theta: f64) -> f64 {
        let psi = self.psi_matrix(theta);
        let id = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        let rows = &psi * psi.adjoint() - &id;
        let cols = psi.adjoint() * &psi - id;
        rows.iter().chain(cols.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Applies `X̂_θ` to the column `(conj ψ_n[k])_n` for every node and
    /// returns the largest deviation from `x_k` times that column, ignoring
    /// the last row.
    pub fn eigenrelation_residual(&self, theta: f64) -> f64 {
        let n = self.dim();
        let x = build_quadrature(n, &self.params, theta);
        let psi = self.psi_matrix(theta);
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let v = psi.column(k).map(|z| z.conj());
            let applied = x.entries() * &v;
            for row in 0..n.saturating_sub(1) {
                worst = worst.max((applied[row] - v[row] * self.nodes[k]).norm());
            }
        }
        worst
    }

    /// Writes `k,x,w` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,x,w")?;
        for (k, (x, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            writeln!(out, "{k},{x:.16e},{w:.16e}")?;
        }
        Ok(())
    }
}

/// Builds the `N`-point spectral measure of `X̂_0`.
pub fn compute_measure(n: usize, p: &DeformationParams) -> Result<SpectralMeasure> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let off: Vec<f64> = (1..n)
        .map(|k| p.quad_scale() * q_number(k, p).sqrt())
        .collect();
    let eig = eigen_symmetric_tridiagonal(&vec![0.0; n], &off)?;
    let nodes = eig.values;

    let mut vectors = vec![0.0; n * n];
    let mut weights = Vec::with_capacity(n);
    let mut column = vec![0.0; n];
    for (k, &x) in nodes.iter().enumerate() {
        weights.push(normalized_eigenvector(p, x, &mut column));
        for (j, v) in column.iter().enumerate() {
            vectors[j * n + k] = *v;
        }
    }
    let eigensolver_weights = eig.first_components.iter().map(|c| c * c).collect();

    Ok(SpectralMeasure {
        params: *p,
        nodes,
        weights,
        eigensolver_weights,
        vectors,
    })
}

const RESCALE_ABOVE: f64 = 1e150;

/// Fills `out` with `J_n(x)/‖J(x)‖` for `n < out.len()` and returns
/// `1/‖J(x)‖²`. The recurrence is rescaled on the fly, so large `N` at `q ≈ 1`
/// (where `J_n` at the outer nodes exceeds the double range) only underflows
/// the weight instead of overflowing.
fn normalized_eigenvector(p: &DeformationParams, x: f64, out: &mut [f64]) -> f64 {
    let c = 2.0 * x / (1.0 + p.q_sq()).sqrt();
    let mut rescales = 0i32;
    out[0] = 1.0;
    let mut sqrt_prev = 0.0; // √[n]
    for n in 0..out.len() - 1 {
        let sqrt_next = q_number(n + 1, p).sqrt();
        let before = if n == 0 { 0.0 } else { sqrt_prev * out[n - 1] };
        let next = (c * out[n] - before) / sqrt_next;
        out[n + 1] = next;
        if next.abs() > RESCALE_ABOVE {
            for v in out[..=n + 1].iter_mut() {
                *v /= RESCALE_ABOVE;
            }
            rescales += 1;
        }
        sqrt_prev = sqrt_next;
    }
    let norm_sq: f64 = out.iter().map(|v| v * v).sum();
    let norm = norm_sq.sqrt();
    for v in out.iter_mut() {
        *v /= norm;
    }
    // w = 1 / (norm_sq · RESCALE_ABOVE^(2·rescales)); underflows gracefully.
    (0..2 * rescales).fold(1.0 / norm_sq, |w, _| w / RESCALE_ABOVE)
}

/// Nodes and weights read off a dense Hermitian eigendecomposition of an
/// arbitrary quadrature matrix (weights are `|first component|²`).
pub fn dense_spectral_data(op: &OperatorMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let (values, vectors) = op.dense_eigen()?;
    let weights = (0..values.len()).map(|k| vectors[(0, k)].norm_sqr()).collect();
    Ok((values, weights))
}

/// `ψ_n[k] = J_n(x_k) e^{−inθ} √w_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteWavefunction {
    pub n: usize,
    pub theta: f64,
    pub values: Vec<Complex64>,
}

impl DiscreteWavefunction {
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }
}

pub fn eval_psi(n: usize, theta: f64, m: &SpectralMeasure) -> Result<DiscreteWavefunction> {
    if n >= m.dim() {
        return Err(Error::IndexOutOfTruncation { n, dim: m.dim() });
    }
    let phase = fock_phase(n, theta);
    let values = (0..m.dim())
        .map(|k| phase * m.component(n, k))
        .collect();
    Ok(DiscreteWavefunction { n, theta, values })
}

/// Max over `a, b ≤ n_max` of `|Σ_k J_a(x_k) J_b(x_k) w_k − δ_ab|`.
///
/// Panics if `n_max ≥ N`.
pub fn orthonormality_residual(m: &SpectralMeasure, n_max: usize) -> f64 {
    assert!(n_max < m.dim(), "n_max must be below the truncation");
    let mut worst: f64 = 0.0;
    for a in 0..=n_max {
        for b in a..=n_max {
            let s: f64 = (0..m.dim())
                .map(|k| m.component(a, k) * m.component(b, k))
                .sum();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((s - target).abs());
        }
    }
    worst
}

/// `e^{−inθ}` with the angle reduced mod 2π so that `θ` and `θ + 2π` agree.
pub(crate) fn fock_phase(n: usize, theta: f64) -> Complex64 {
    let angle = (n as f64 * theta.rem_euclid(TAU)).rem_euclid(TAU);
    Complex64::from_polar(1.0, -angle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn params(q: f64) -> DeformationParams {
        DeformationParams::new(q).unwrap()
    }

    #[test]
    fn one_point_measure() {
        let m = compute_measure(1, &params(0.5)).unwrap();
        assert_eq!(m.nodes(), &[0.0]);
        assert_eq!(m.weights(), &[1.0]);
        assert_eq!(m.spacings(), vec![1.0]);
    }

    #[test]
    fn two_point_measure() {
        let m = compute_measure(2, &params(0.5)).unwrap();
        assert_abs_diff_eq!(m.nodes()[0], -0.559017, epsilon = 1e-6);
        assert_abs_diff_eq!(m.nodes()[1], 0.559017, epsilon = 1e-6);
        for w in m.weights() {
            assert_abs_diff_eq!(*w, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn classical_five_point_is_gauss_hermite() {
        let m = compute_measure(5, &params(1.0)).unwrap();
        let expected = [-2.020182870456086, -0.9585724646138185, 0.0, 0.9585724646138185, 2.020182870456086];
        for (x, e) in m.nodes().iter().zip(expected) {
            assert_abs_diff_eq!(*x, e, epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_truncation_rejected() {
        assert!(compute_measure(0, &params(0.5)).is_err());
    }

    #[test]
    fn measure_invariants() {
        for (n, q) in [(3, 0.5), (16, 0.3), (64, 0.5), (64, 0.9), (40, 1.0)] {
            let p = params(q);
            let m = compute_measure(n, &p).unwrap();
            let total: f64 = m.weights().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(m.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(m.weights().iter().all(|w| *w > 0.0));
            assert!(m.mirror_residual() < 1e-12, "n={n} q={q}");
            if q < 1.0 {
                let bound = p.spectral_bound();
                assert!(m.nodes().iter().all(|x| x.abs() <= bound));
            }
            for (a, b) in m.weights().iter().zip(m.eigensolver_weights()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn psi_examples() {
        let m = compute_measure(2, &params(0.5)).unwrap();
        let psi0 = eval_psi(0, 0.8, &m).unwrap();
        for (v, w) in psi0.values.iter().zip(m.weights()) {
            assert_abs_diff_eq!(v.re, w.sqrt(), epsilon = 1e-15);
            assert_eq!(v.im, 0.0);
        }
        let psi1 = eval_psi(1, 0.0, &m).unwrap();
        assert_abs_diff_eq!(psi1.values[0].re, -FRAC_1_SQRT_2, epsilon = 1e-6);
        assert_abs_diff_eq!(psi1.values[1].re, FRAC_1_SQRT_2, epsilon = 1e-6);
        assert!(matches!(
            eval_psi(2, 0.0, &m),
            Err(Error::IndexOutOfTruncation { n: 2, dim: 2 })
        ));
    }

    #[test]
    fn psi_periodic_in_theta() {
        let m = compute_measure(12, &params(0.7)).unwrap();
        for theta in [0.0, 1.3, PI, 5.9] {
            for n in [1, 4, 11] {
                let a = eval_psi(n, theta, &m).unwrap();
                let b = eval_psi(n, theta + TAU, &m).unwrap();
                for (u, v) in a.values.iter().zip(&b.values) {
                    assert!((u - v).norm() < 1e-12);
                }
            }
        }
        // 0 and 2π reduce to the same angle exactly.
        assert_eq!(eval_psi(5, 0.0, &m).unwrap().values, eval_psi(5, TAU, &m).unwrap().values);
    }

    #[test]
    fn psi_unit_norm() {
        let m = compute_measure(32, &params(0.6)).unwrap();
        for n in 0..32 {
            assert!((eval_psi(n, 0.4, &m).unwrap().norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn orthonormality_examples() {
        let m = compute_measure(2, &params(0.5)).unwrap();
        assert!(orthonormality_residual(&m, 1) <= 1e-14);
        let m = compute_measure(64, &params(0.5)).unwrap();
        assert!(orthonormality_residual(&m, 20) <= 1e-10);
        let m = compute_measure(8, &params(1.0)).unwrap();
        assert!(orthonormality_residual(&m, 7) <= 1e-12);
    }

    #[test]
    fn unitarity_and_eigenrelation() {
        for q in [0.5, 0.9] {
            let m = compute_measure(64, &params(q)).unwrap();
            for theta in [0.0, 1.1, PI / 2.0] {
                assert!(m.unitarity_residual(theta) < 1e-10);
                assert!(m.eigenrelation_residual(theta) < 1e-10);
            }
        }
    }

    #[test]
    fn measure_is_theta_independent() {
        let p = params(0.6);
        let m = compute_measure(20, &p).unwrap();
        for theta in [0.7, PI / 2.0, 3.0] {
            let (nodes, weights) = dense_spectral_data(&build_quadrature(20, &p, theta)).unwrap();
            for k in 0..20 {
                assert!((nodes[k] - m.nodes()[k]).abs() < 1e-12);
                assert!((weights[k] - m.weights()[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn density_uses_half_spacing() {
        let m = compute_measure(4, &params(0.5)).unwrap();
        let x = m.nodes();
        let d = m.spacings();
        assert_eq!(d[0], x[1] - x[0]);
        assert_eq!(d[1], (x[2] - x[0]) / 2.0);
        assert_eq!(d[3], x[3] - x[2]);
        let dens = m.density(m.weights());
        assert_eq!(dens[2], m.weights()[2] / d[2]);
    }

    #[test]
    fn csv_dump_format() {
        let m = compute_measure(2, &params(0.5)).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,x,w");
        assert_eq!(lines.len(), 3);
        let fields: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(fields[0], "1");
        assert_eq!(fields[1].parse::<f64>().unwrap(), m.nodes()[1]);
        assert_eq!(fields[2].parse::<f64>().unwrap(), m.weights()[1]);
    }
}

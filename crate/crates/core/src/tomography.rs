//! q-deformed coherent states and optical tomograms of Fock and coherent
//! states on the discrete spectral measure.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{q_exponential, q_number, DeformationParams};
use crate::quadrature_measure::{fock_phase, SpectralMeasure};

/// Tolerance used for the `E_q(|α|²)` normalization sum.
const NORMALIZATION_TOL: f64 = 1e-15;

/// `|Φ⟩_q = E_q(|α|²)^{-1/2} Σ_n α^n/√([n]!) |n⟩_q`, truncated to `N` Fock states.
#[derive(Debug, Clone, PartialEq)]
pub struct QCoherentState {
    pub alpha: Complex64,
    params: DeformationParams,
    coeffs: Vec<Complex64>,
    tail_bound: f64,
}

impl QCoherentState {
    pub fn q(&self) -> f64 {
        self.params.q()
    }

    pub fn params(&self) -> &DeformationParams {
        &self.params
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Certified upper bound on `Σ_{n≥N} |c_n|²`.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ_{n<N} |c_n|²`.
    pub fn retained_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Builds the truncated coherent state. Fails if `|α|²` is outside the
/// convergence disk or if the discarded probability could exceed `tol`.
pub fn make_coherent(
    alpha: Complex64,
    p: &DeformationParams,
    n: usize,
    tol: f64,
) -> Result<QCoherentState> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite amplitude {alpha}")));
    }
    let z = alpha.norm_sqr();
    if z >= p.conv_radius() {
        return Err(Error::OutsideConvergenceDisk {
            alpha_sq: z,
            radius: p.conv_radius(),
        });
    }
    let e_q = q_exponential(z, p, NORMALIZATION_TOL)?;
    let inv_sqrt_e = 1.0 / e_q.sqrt();

    // c_{k+1} = c_k α / √[k+1]; |c_k|² carries the factor z^k/[k]!.
    let mut coeffs = Vec::with_capacity(n);
    let mut c = Complex64::new(inv_sqrt_e, 0.0);
    for k in 0..n {
        coeffs.push(c);
        c = c * alpha / q_number(k + 1, p).sqrt();
    }

    // `c` now holds c_N. Ratios |c_{k+1}|²/|c_k|² = z/[k+1] decrease in k.
    let first_omitted = c.norm_sqr();
    let ratio = z / q_number(n + 1, p);
    let tail_bound = if first_omitted == 0.0 {
        0.0
    } else if ratio < 1.0 {
        first_omitted / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    if tail_bound > tol {
        return Err(Error::TruncationTooSmall { tail_bound, tol });
    }
    Ok(QCoherentState {
        alpha,
        params: *p,
        coeffs,
        tail_bound,
    })
}

/// Per-node quadrature probabilities of the Fock state `|n⟩_q`:
/// `p_k = J_n(x_k)² w_k` (independent of `θ`).
pub fn tomogram_fock(n: usize, _theta: f64, m: &SpectralMeasure) -> Result<Vec<f64>> {
    if n >= m.dim() {
        return Err(Error::IndexOutOfTruncation { n, dim: m.dim() });
    }
    Ok((0..m.dim())
        .map(|k| {
            let u = m.component(n, k);
            u * u
        })
        .collect())
}

/// Per-node quadrature probabilities of a coherent state:
/// `p_k = w_k |Σ_n c_n J_n(x_k) e^{−inθ}|²`, evaluated with the normalized
/// eigenvector components `J_n(x_k) √w_k`.
pub fn tomogram_coherent(
    state: &QCoherentState,
    theta: f64,
    m: &SpectralMeasure,
) -> Result<Vec<f64>> {
    if state.q() != m.q() {
        return Err(Error::MeasureMismatch(format!(
            "state has q = {}, measure has q = {}",
            state.q(),
            m.q()
        )));
    }
    if state.len() > m.dim() {
        return Err(Error::MeasureMismatch(format!(
            "state has {} coefficients, measure only {} nodes",
            state.len(),
            m.dim()
        )));
    }
    let rotated: Vec<Complex64> = state
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c * fock_phase(n, theta))
        .collect();
    Ok((0..m.dim())
        .map(|k| {
            let amp: Complex64 = rotated
                .iter()
                .enumerate()
                .map(|(n, c)| c * m.component(n, k))
                .sum();
            amp.norm_sqr()
        })
        .collect())
}

/// Tomogram density of the undeformed (Glauber) coherent state,
/// `π^{−1/2} exp(−(x − √2 Re(α e^{−iθ}))²)`.
pub fn gaussian_oracle(alpha: Complex64, theta: f64, x: f64) -> f64 {
    let center = 2f64.sqrt() * (alpha * Complex64::from_polar(1.0, -theta)).re;
    (-(x - center).powi(2)).exp() / PI.sqrt()
}

/// Tomogram sampled over a sweep of phases.
#[derive(Debug, Clone, PartialEq)]
pub struct TomogramGrid<'m> {
    pub theta_values: Vec<f64>,
    pub measure: &'m SpectralMeasure,
    /// `probabilities[i][k]`: mass at node `k` for phase `theta_values[i]`.
    pub probabilities: Vec<Vec<f64>>,
    /// `probabilities[i][k] / Δ_k`.
    pub densities: Vec<Vec<f64>>,
    /// Zero for Fock states.
    pub tail_bound: f64,
}

impl<'m> TomogramGrid<'m> {
    pub fn fock(n: usize, theta_values: Vec<f64>, measure: &'m SpectralMeasure) -> Result<Self> {
        let probabilities = theta_values
            .iter()
            .map(|&t| tomogram_fock(n, t, measure))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(theta_values, measure, probabilities, 0.0))
    }

    pub fn coherent(
        state: &QCoherentState,
        theta_values: Vec<f64>,
        measure: &'m SpectralMeasure,
    ) -> Result<Self> {
        let probabilities = theta_values
            .iter()
            .map(|&t| tomogram_coherent(state, t, measure))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(theta_values, measure, probabilities, state.tail_bound()))
    }

    fn assemble(
        theta_values: Vec<f64>,
        measure: &'m SpectralMeasure,
        probabilities: Vec<Vec<f64>>,
        tail_bound: f64,
    ) -> Self {
        let densities = probabilities.iter().map(|p| measure.density(p)).collect();
        Self {
            theta_values,
            measure,
            probabilities,
            densities,
            tail_bound,
        }
    }

    /// `Σ_k p[i][k]` for each phase.
    pub fn totals(&self) -> Vec<f64> {
        self.probabilities.iter().map(|p| p.iter().sum()).collect()
    }
}

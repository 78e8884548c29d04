//! The orthonormal polynomials `J_n(x; q)` of the quadrature operator and the
//! normalized Hermite functions they reduce to at `q = 1`.

use crate::error::{Error, Result};
use crate::qcore::{q_number, DeformationParams};

/// Magnitude above which a polynomial value is treated as overflowing.
pub const OVERFLOW_GUARD: f64 = 1e300;

/// `J_0(x) … J_{n_max}(x)` at a single real point.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySequence {
    pub q: f64,
    pub x: f64,
    pub values: Vec<f64>,
}

impl PolySequence {
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    /// Largest `|√[n+1] J_{n+1} − 2x/√(1+q²) J_n + √[n] J_{n−1}|` over the
    /// stored sequence, each relative to the sum of the three term magnitudes.
    pub fn recurrence_residual(&self, p: &DeformationParams) -> f64 {
        let c = 2.0 * self.x / (1.0 + p.q_sq()).sqrt();
        let v = &self.values;
        let mut worst: f64 = 0.0;
        for n in 0..v.len().saturating_sub(1) {
            let prev = if n == 0 { 0.0 } else { q_number(n, p).sqrt() * v[n - 1] };
            let next = q_number(n + 1, p).sqrt() * v[n + 1];
            let scale = next.abs() + (c * v[n]).abs() + prev.abs();
            if scale > 0.0 {
                worst = worst.max((next - c * v[n] + prev).abs() / scale);
            }
        }
        worst
    }
}

/// Evaluates `J_n(x)` for `n = 0..=n_max` by the forward three-term recurrence
///
/// ```text
/// J_{n+1} = (2x/√(1+q²) · J_n − √[n] · J_{n−1}) / √[n+1],   J_0 = 1.
/// ```
pub fn eval_j(n_max: usize, p: &DeformationParams, x: f64) -> Result<PolySequence> {
    let mut values = Vec::with_capacity(n_max + 1);
    fill_j(n_max, p, x, &mut values)?;
    Ok(PolySequence {
        q: p.q(),
        x,
        values,
    })
}

/// Recurrence core shared with the measure code; clears and fills `out`.
pub(crate) fn fill_j(
    n_max: usize,
    p: &DeformationParams,
    x: f64,
    out: &mut Vec<f64>,
) -> Result<()> {
    out.clear();
    let c = 2.0 * x / (1.0 + p.q_sq()).sqrt();
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut sqrt_qn = 0.0; // √[n]
    out.push(cur);
    for n in 0..n_max {
        let sqrt_next = q_number(n + 1, p).sqrt();
        let next = (c * cur - sqrt_qn * prev) / sqrt_next;
        if next.is_nan() || next.abs() > OVERFLOW_GUARD {
            return Err(Error::Overflow {
                what: "J_n polynomial",
            });
        }
        out.push(next);
        prev = cur;
        cur = next;
        sqrt_qn = sqrt_next;
    }
    Ok(())
}

/// Normalized Hermite functions without the Gaussian factor,
/// `h_n(x) = H_n(x)/√(2^n n!)`, for `n = 0..=n_max`.
///
/// `H_n` comes from the physicists' recurrence `H_{n+1} = 2x H_n − 2n H_{n−1}`
/// and is normalized afterwards.
pub fn hermite_reference(n_max: usize, x: f64) -> Result<Vec<f64>> {
    let mut raw = Vec::with_capacity(n_max + 1);
    raw.push(1.0);
    if n_max >= 1 {
        raw.push(2.0 * x);
    }
    for n in 1..n_max {
        let next = 2.0 * x * raw[n] - 2.0 * n as f64 * raw[n - 1];
        if next.is_nan() || next.abs() > OVERFLOW_GUARD {
            return Err(Error::Overflow {
                what: "Hermite polynomial",
            });
        }
        raw.push(next);
    }
    let mut norm = 1.0;
    Ok(raw
        .into_iter()
        .enumerate()
        .map(|(n, h)| {
            if n > 0 {
                norm *= (2.0 * n as f64).sqrt();
            }
            h / norm
        })
        .collect())
}

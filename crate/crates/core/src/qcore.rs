//! Scalar q-arithmetic: q-numbers, q-factorials and the q-exponential.

use crate::error::{Error, Result};

/// Deformation parameter `q ∈ (0, 1]` together with the constants derived from it.
///
/// `q = 1` is the undeformed oscillator and is handled by exact branches
/// (`[n] = n`, `[n]! = n!`, `E_q(z) = e^z`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParams {
    q: f64,
    q_sq: f64,
    quad_scale: f64,
    conv_radius: f64,
}

impl DeformationParams {
    pub fn new(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidDeformation(q));
        }
        let q_sq = q * q;
        let conv_radius = if q == 1.0 {
            f64::INFINITY
        } else {
            // 1 / (1 - q^2) without cancellation near q = 1.
            -1.0 / (2.0 * q.ln()).exp_m1()
        };
        Ok(Self {
            q,
            q_sq,
            quad_scale: (1.0 + q_sq).sqrt() / 2.0,
            conv_radius,
        })
    }

    /// The undeformed oscillator.
    pub fn classical() -> Self {
        Self::new(1.0).expect("q = 1 is admissible")
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn q_sq(&self) -> f64 {
        self.q_sq
    }

    /// `√(1+q²)/2`, the prefactor of the canonical variables and of `X̂_θ`.
    pub fn quad_scale(&self) -> f64 {
        self.quad_scale
    }

    /// `1/(1−q²)`: the supremum of `[n]` and the radius of convergence of `E_q`.
    pub fn conv_radius(&self) -> f64 {
        self.conv_radius
    }

    pub fn is_classical(&self) -> bool {
        self.q == 1.0
    }

    /// Bound `L = √(1+q²)/√(1−q²)` on the spectrum of the quadrature operator
    /// (`+∞` at `q = 1`).
    pub fn spectral_bound(&self) -> f64 {
        2.0 * self.quad_scale * self.conv_radius.sqrt()
    }
}

/// The q-number `[n] = (1 − q^{2n})/(1 − q²)`, or `n` when `q = 1`.
pub fn q_number(n: usize, p: &DeformationParams) -> f64 {
    if p.is_classical() {
        return n as f64;
    }
    if n == 0 {
        return 0.0;
    }
    // expm1 keeps both differences accurate when q^2 is close to 1.
    let two_ln_q = 2.0 * p.q.ln();
    (n as f64 * two_ln_q).exp_m1() / two_ln_q.exp_m1()
}

/// `[n]! = [1][2]…[n]`, with `[0]! = 1`.
pub fn q_factorial(n: usize, p: &DeformationParams) -> Result<f64> {
    let mut acc = 1.0;
    for k in 1..=n {
        acc *= q_number(k, p);
        if !acc.is_finite() {
            return Err(Error::Overflow { what: "q-factorial" });
        }
    }
    Ok(acc)
}

/// A truncated q-exponential series together with a certified bound on the
/// omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Upper bound on `Σ_{n ≥ terms} z^n/[n]!`; `+∞` if no geometric majorant applies yet.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Partial sum `Σ_{n<terms} z^n/[n]!` and its tail bound.
///
/// Term ratios `z/[n+1]` decrease monotonically in `n`, so once the ratio
/// `r = z/[terms]` drops below one the tail is majorised by the geometric
/// series `t_{terms} / (1 − r)`.
pub fn q_exponential_partial(z: f64, p: &DeformationParams, terms: usize) -> Result<SeriesSum> {
    check_argument(z, p)?;
    let mut value = 0.0;
    let mut term = 1.0;
    for n in 0..terms {
        value += term;
        term *= z / q_number(n + 1, p);
        if !term.is_finite() || !value.is_finite() {
            return Err(Error::Overflow { what: "q-exponential" });
        }
    }
    // `term` now holds t_terms, the first omitted term.
    let ratio = z / q_number(terms + 1, p);
    let tail_bound = if ratio < 1.0 {
        term / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    Ok(SeriesSum {
        value,
        tail_bound,
        terms,
    })
}

/// `E_q(z) = Σ z^n/[n]!` for `0 ≤ z < 1/(1−q²)`, summed until the tail bound
/// falls below `tol`. At `q = 1` returns `e^z`.
pub fn q_exponential(z: f64, p: &DeformationParams, tol: f64) -> Result<f64> {
    Ok(q_exponential_series(z, p, tol)?.value)
}

/// Like [`q_exponential`] but also reports the number of terms and the tail bound.
pub fn q_exponential_series(z: f64, p: &DeformationParams, tol: f64) -> Result<SeriesSum> {
    check_argument(z, p)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if p.is_classical() {
        return Ok(SeriesSum {
            value: z.exp(),
            tail_bound: 0.0,
            terms: usize::MAX,
        });
    }
    const MAX_TERMS: usize = 50_000_000;
    let mut value = 1.0;
    let mut term = 1.0;
    let mut n = 0usize;
    loop {
        // Invariant: value = Σ_{k≤n} t_k, term = t_n.
        let ratio = z / q_number(n + 1, p);
        if ratio < 1.0 {
            let tail = term * ratio / (1.0 - ratio);
            if tail < tol {
                return Ok(SeriesSum {
                    value,
                    tail_bound: tail,
                    terms: n + 1,
                });
            }
        }
        n += 1;
        if n > MAX_TERMS {
            return Err(Error::DivergentSeries {
                z,
                radius: p.conv_radius,
            });
        }
        term *= ratio;
        value += term;
        if !value.is_finite() {
            return Err(Error::Overflow { what: "q-exponential" });
        }
    }
}

fn check_argument(z: f64, p: &DeformationParams) -> Result<()> {
    if !z.is_finite() || z < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "q-exponential argument must be a finite nonnegative real, got {z}"
        )));
    }
    if z >= p.conv_radius {
        return Err(Error::DivergentSeries {
            z,
            radius: p.conv_radius,
        });
    }
    Ok(())
}

//! Symmetric tridiagonal eigensolver (implicit QL with Wilkinson shifts)
//! tracking only the first row of the eigenvector matrix, as needed for
//! Golub–Welsch quadrature rules.

use crate::error::{Error, Result};

const MAX_SWEEPS_PER_VALUE: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// First component of each normalized eigenvector, made nonnegative.
    pub first_components: Vec<f64>,
}

/// Diagonalizes the real symmetric tridiagonal matrix with diagonal `diag`
/// and off-diagonal `off` (`off[i]` couples rows `i` and `i+1`).
pub fn eigen_symmetric_tridiagonal(diag: &[f64], off: &[f64]) -> Result<TridiagEigen> {
    let n = diag.len();
    if n == 0 {
        return Ok(TridiagEigen {
            values: Vec::new(),
            first_components: Vec::new(),
        });
    }
    assert_eq!(off.len(), n - 1, "off-diagonal must have length n - 1");

    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS_PER_VALUE {
                return Err(Error::EigensolveFailure { iterations: iter });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut pairs: Vec<(f64, f64)> = d.into_iter().zip(z.into_iter().map(f64::abs)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (values, first_components) = pairs.into_iter().unzip();
    Ok(TridiagEigen {
        values,
        first_components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use crate::jacobi::hermitian_eigen;
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn trivial_sizes() {
        let r = eigen_symmetric_tridiagonal(&[], &[]).unwrap();
        assert!(r.values.is_empty());
        let r = eigen_symmetric_tridiagonal(&[3.0], &[]).unwrap();
        assert_eq!(r.values, vec![3.0]);
        assert_eq!(r.first_components, vec![1.0]);
    }

    #[test]
    fn two_by_two() {
        let r = eigen_symmetric_tridiagonal(&[0.0, 0.0], &[0.5]).unwrap();
        assert_abs_diff_eq!(r.values[0], -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.values[1], 0.5, epsilon = 1e-15);
        for c in r.first_components {
            assert_abs_diff_eq!(c * c, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn gauss_hermite_five_point() {
        // Jacobi matrix of the Hermite weight e^{-x^2}: off-diagonal sqrt(k/2).
        let off: Vec<f64> = (1..5).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let r = eigen_symmetric_tridiagonal(&[0.0; 5], &off).unwrap();
        let expected = [-2.020182870456086, -0.9585724646138185, 0.0, 0.9585724646138185, 2.020182870456086];
        for (v, e) in r.values.iter().zip(expected) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-13);
        }
        // Gauss-Hermite weights divided by sqrt(pi).
        let w0 = 0.01995324205904591 / std::f64::consts::PI.sqrt();
        assert_abs_diff_eq!(r.first_components[0].powi(2), w0, epsilon = 1e-14);
    }

    #[test]
    fn already_diagonal() {
        let r = eigen_symmetric_tridiagonal(&[2.0, -1.0, 5.0], &[0.0, 0.0]).unwrap();
        assert_eq!(r.values, vec![-1.0, 2.0, 5.0]);
        assert_eq!(r.first_components, vec![0.0, 1.0, 0.0]);
    }

    proptest! {
        #[test]
        fn agrees_with_dense_solver(
            diag in prop::collection::vec(-3.0f64..3.0, 2..24),
            seed in prop::collection::vec(0.05f64..2.0, 23),
        ) {
            let n = diag.len();
            let off = &seed[..n - 1];
            let r = eigen_symmetric_tridiagonal(&diag, off).unwrap();
            let dense = DMatrix::from_fn(n, n, |i, j| {
                let v = if i == j { diag[i] } else if i + 1 == j { off[i] } else if j + 1 == i { off[j] } else { 0.0 };
                Complex64::new(v, 0.0)
            });
            let (values, vectors) = hermitian_eigen(&dense).unwrap();
            for k in 0..n {
                prop_assert!((r.values[k] - values[k]).abs() < 1e-12);
                let gap = values
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, v)| (v - values[k]).abs())
                    .fold(f64::INFINITY, f64::min);
                let tol = 1e-14 / gap.min(1.0);
                let diff = (r.first_components[k] - vectors[(0, k)].norm()).abs();
                prop_assert!(diff < tol, "diff {diff:e} tol {tol:e}");
            }
            let total: f64 = r.first_components.iter().map(|c| c * c).sum();
            prop_assert!((total - 1.0).abs() < 1e-13);
        }
    }
}

//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.
//!
//! Slow (O(N³) per sweep) but accurate to a few ulps in eigenvectors, which
//! makes it the reference route for brute-force comparisons against the
//! tridiagonal pipeline.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns).
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    assert!(m.is_square(), "matrix must be square");
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);

    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut sweep = 0;
    loop {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * 1e-3 * scale || off == 0.0 {
            break;
        }
        sweep += 1;
        if sweep > MAX_SWEEPS {
            return Err(Error::EigensolveFailure { iterations: sweep });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

/// Annihilates `a[p][q]` with a phase followed by a real plane rotation.
fn rotate(a: &mut DMatrix<Complex64>, v: &mut DMatrix<Complex64>, p: usize, q: usize) {
    let n = a.nrows();
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    // Phase on index q makes a[p][q] real and positive.
    let phase = apq.conj() / mag;
    for k in 0..n {
        a[(k, q)] *= phase;
        v[(k, q)] *= phase;
    }
    for k in 0..n {
        a[(q, k)] *= phase.conj();
    }

    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    for k in 0..n {
        let (kp, kq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = kp * c - kq * s;
        a[(k, q)] = kp * s + kq * c;
    }
    for k in 0..n {
        let (pk, qk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = pk * c - qk * s;
        a[(q, k)] = pk * s + qk * c;
    }
    for k in 0..n {
        let (kp, kq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = kp * c - kq * s;
        v[(k, q)] = kp * s + kq * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

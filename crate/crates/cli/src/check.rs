//! Self-check: evaluates every library invariant and reports the measured
//! residual against its threshold.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use qtomo::qcore::q_exponential_series;
use qtomo::qoperators::covariance_residual;
use qtomo::quadrature_measure::dense_spectral_data;
use qtomo::{
    algebra_residual, build_quadrature, commutator_residual, compute_measure, eval_j, eval_psi,
    gaussian_oracle, hermite_reference, make_coherent, orthonormality_residual, q_exponential_partial,
    q_factorial, q_number, tomogram_coherent, tomogram_fock, DeformationParams, Result,
    SpectralMeasure,
};

use crate::config::RunConfig;
use crate::output::{write_json, Amplitude, Meta, Table, ThetaGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub module: &'static str,
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        self.measured.is_finite() && self.measured <= self.threshold
    }
}

#[derive(Debug, Default)]
struct Rows(Vec<CheckRow>);

impl Rows {
    fn push(&mut self, module: &'static str, name: impl Into<String>, measured: f64, threshold: f64) {
        self.0.push(CheckRow {
            module,
            name: name.into(),
            measured,
            threshold,
        });
    }

    /// Boolean properties are reported as 0 (holds) or 1 (violated).
    fn push_bool(&mut self, module: &'static str, name: impl Into<String>, holds: bool) {
        self.push(module, name, if holds { 0.0 } else { 1.0 }, 0.0);
    }
}

/// Runs the full suite for the configured `q`, truncation and amplitude.
pub fn run_checks(cfg: &RunConfig) -> Result<Vec<CheckRow>> {
    let mut rows = Rows::default();
    let p = cfg.params;
    let n = cfg.truncation;
    qcore_checks(&mut rows, &p)?;
    operator_checks(&mut rows, &p, n)?;
    let m = compute_measure(n, &p)?;
    polynomial_checks(&mut rows, &p, &m)?;
    measure_checks(&mut rows, &p, &m)?;
    tomography_checks(&mut rows, &p, &m, cfg.alpha, cfg.tol)?;
    Ok(rows.0)
}

fn qcore_checks(rows: &mut Rows, p: &DeformationParams) -> Result<()> {
    const M: &str = "qcore";
    let half = DeformationParams::new(0.5)?;
    rows.push(
        M,
        "[200] within 1e-10 of 1/(1-q^2), q=0.5",
        (q_number(200, &half) - half.conv_radius()).abs(),
        1e-10,
    );
    let monotone = (0..200).all(|k| {
        let (a, b) = (q_number(k, p), q_number(k + 1, p));
        a <= b && b <= p.conv_radius()
    });
    rows.push_bool(M, "[n] nondecreasing and below 1/(1-q^2)", monotone);
    let near = DeformationParams::new(1.0 - 1e-6)?;
    let classical = (0..=10)
        .map(|k| (q_number(k, &near) - k as f64).abs())
        .fold(0.0, f64::max);
    rows.push(M, "|[n] - n| at q=1-1e-6, n<=10", classical, 1e-4);
    rows.push(M, "[3]! at q=0.5 vs 1.640625", (q_factorial(3, &half)? - 1.640625).abs(), 1e-15);

    let z = if p.is_classical() { 2.0 } else { 0.9 * p.conv_radius() };
    let tol = 1e-12;
    let s = q_exponential_series(z, p, tol)?;
    // The classical branch returns e^z directly; compare with a long partial sum.
    let extended = if p.is_classical() { 80 } else { s.terms + 10 };
    let drift = (q_exponential_partial(z, p, extended)?.value - s.value).abs();
    rows.push(M, format!("E_q tail bound sound (+10 terms), z={z:.4}"), drift, tol);
    Ok(())
}

fn operator_checks(rows: &mut Rows, p: &DeformationParams, n: usize) -> Result<()> {
    const M: &str = "qoperators";
    rows.push(M, format!("AA^+ - q^2 A^+A - 1, N={n}"), algebra_residual(n, p), 1e-12);
    rows.push(M, format!("deformed [X,P] interior block, N={n}"), commutator_residual(n, p), 1e-12);
    let hermitian = [0.0, 0.7, FRAC_PI_2, 2.5, 5.0]
        .iter()
        .all(|&t| build_quadrature(n, p, t).is_hermitian());
    rows.push_bool(M, "X_theta Hermitian", hermitian);
    let cov = [0.7, FRAC_PI_2, 2.5]
        .iter()
        .map(|&t| covariance_residual(n, p, t))
        .fold(0.0, f64::max);
    rows.push(M, "X_theta = U X_0 U^+", cov, 1e-14);
    let canon = qtomo::qoperators::canonical_consistency_residual(n, p);
    rows.push(M, "X_0 = X and X_{pi/2} = P", canon, 1e-15);
    Ok(())
}

fn polynomial_checks(rows: &mut Rows, p: &DeformationParams, m: &SpectralMeasure) -> Result<()> {
    const M: &str = "qpolynomials";
    let n = m.dim();
    let mut recurrence: f64 = 0.0;
    let mut parity: f64 = 0.0;
    // At q≈1 and large N the outermost J_n exceed the double range; the
    // measure itself never forms them, so skip those nodes here.
    let mut covered = 0;
    for &x in m.nodes() {
        match eval_j(n - 1, p, x) {
            Ok(s) => {
                recurrence = recurrence.max(s.recurrence_residual(p));
                covered += 1;
            }
            Err(qtomo::Error::Overflow { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    for i in 0..=40 {
        let x = -2.0 + 0.1 * i as f64;
        let a = eval_j(64, p, x)?;
        let b = eval_j(64, p, -x)?;
        for k in 0..=64 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let scale = a.values[k].abs().max(f64::MIN_POSITIVE);
            parity = parity.max((b.values[k] - sign * a.values[k]).abs() / scale);
        }
    }
    rows.push(
        M,
        format!("recurrence residual at nodes ({covered}/{n} in range)"),
        recurrence,
        1e-10,
    );
    rows.push(M, "J_n(-x) = (-1)^n J_n(x), n<=64", parity, 1e-12);

    let hermite_gap = |q: f64| -> Result<f64> {
        let pq = DeformationParams::new(q)?;
        let mut worst: f64 = 0.0;
        for i in 0..=60 {
            let x = -3.0 + 0.1 * i as f64;
            let j = eval_j(10, &pq, x)?;
            let h = hermite_reference(10, x)?;
            for k in 0..=10 {
                worst = worst.max((j.values[k] - h[k]).abs());
            }
        }
        Ok(worst)
    };
    rows.push(M, "Hermite limit, exact branch q=1", hermite_gap(1.0)?, 1e-12);
    rows.push(M, "Hermite limit, q=1-1e-6, n<=10, |x|<=3", hermite_gap(1.0 - 1e-6)?, 1e-2);
    let gaps = [hermite_gap(0.999)?, hermite_gap(0.9999)?, hermite_gap(0.99999)?];
    rows.push_bool(
        M,
        format!(
            "Hermite gap decreasing as q->1 ({:.2e}, {:.2e}, {:.2e})",
            gaps[0], gaps[1], gaps[2]
        ),
        gaps[0] > gaps[1] && gaps[1] > gaps[2],
    );

    let x = 1e5;
    let s = eval_j(12, p, x)?;
    let mut lead_err: f64 = 0.0;
    for k in 0..=12 {
        let lead = (2.0 / (1.0 + p.q_sq()).sqrt()).powi(k as i32) / q_factorial(k, p)?.sqrt();
        lead_err = lead_err.max((s.values[k] / x.powi(k as i32) / lead - 1.0).abs());
    }
    rows.push(M, "J_n(x)/x^n -> leading coefficient (x=1e5)", lead_err, 1e-6);
    Ok(())
}

fn measure_checks(rows: &mut Rows, p: &DeformationParams, m: &SpectralMeasure) -> Result<()> {
    const M: &str = "quadrature_measure";
    let n = m.dim();
    let total: f64 = m.weights().iter().sum();
    rows.push(M, "sum of weights = 1", (total - 1.0).abs(), 1e-12);
    rows.push_bool(M, "nodes strictly increasing", m.nodes().windows(2).all(|w| w[0] < w[1]));
    // A weight may be 0 only where it is genuinely at the bottom of the double
    // range, i.e. where Σ J_n(x_k)² = 1/w_k itself overflows.
    let mut underflowed = 0;
    let mut positive = true;
    for (&x, &w) in m.nodes().iter().zip(m.weights()) {
        if w == 0.0 {
            underflowed += 1;
            positive &= match eval_j(n - 1, p, x) {
                Ok(s) => s.values.iter().map(|v| v * v).sum::<f64>().is_infinite(),
                Err(e) => matches!(e, qtomo::Error::Overflow { .. }),
            };
        } else {
            positive &= w > 0.0;
        }
    }
    rows.push_bool(
        M,
        format!("weights positive ({underflowed} below double range)"),
        positive,
    );
    rows.push(M, "node/weight mirror symmetry", m.mirror_residual(), 1e-12);
    if !p.is_classical() {
        let worst = m.nodes().iter().map(|x| x.abs()).fold(0.0, f64::max);
        rows.push(M, "|x_k| / L (spectral bound)", worst / p.spectral_bound(), 1.0);
    }
    let n_max = n.min(21) - 1;
    rows.push(M, format!("orthonormality, n<={n_max}"), orthonormality_residual(m, n_max), 1e-10);
    let unit = [0.0, 1.1, FRAC_PI_2]
        .iter()
        .map(|&t| m.unitarity_residual(t))
        .fold(0.0, f64::max);
    rows.push(M, "psi matrix unitary (theta in 0, 1.1, pi/2)", unit, 1e-10);
    let eig = [0.0, 1.1, FRAC_PI_2]
        .iter()
        .map(|&t| m.eigenrelation_residual(t))
        .fold(0.0, f64::max);
    rows.push(M, "X_theta eigenrelation on psi columns", eig, 1e-10);
    let norms = (0..n)
        .map(|k| eval_psi(k, 0.4, m).map(|w| (w.norm_sqr() - 1.0).abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    rows.push(M, "psi_n unit norm", norms, 1e-10);

    // Dense Jacobi diagonalization is O(N^3) per sweep; cap its size.
    let dense_n = n.min(64);
    let reference = compute_measure(dense_n, p)?;
    let mut drift: f64 = 0.0;
    for theta in [0.7, FRAC_PI_2, 3.0] {
        let (nodes, weights) = dense_spectral_data(&build_quadrature(dense_n, p, theta))?;
        for k in 0..dense_n {
            drift = drift
                .max((nodes[k] - reference.nodes()[k]).abs())
                .max((weights[k] - reference.weights()[k]).abs());
        }
    }
    rows.push(M, format!("measure theta-independent (dense, N={dense_n})"), drift, 1e-12);
    Ok(())
}

fn tomography_checks(
    rows: &mut Rows,
    p: &DeformationParams,
    m: &SpectralMeasure,
    alpha: Complex64,
    tol: f64,
) -> Result<()> {
    const M: &str = "tomography";
    let n = m.dim();
    let mut fock_norm: f64 = 0.0;
    for k in 0..n {
        let total: f64 = tomogram_fock(k, 0.3, m)?.iter().sum();
        fock_norm = fock_norm.max((total - 1.0).abs());
    }
    rows.push(M, "Fock tomograms sum to 1", fock_norm, 1e-10);

    let state = make_coherent(alpha, p, n, tol)?;
    let mut deviation: f64 = 0.0;
    for theta in [0.0, 1.0, FRAC_PI_2, 4.0] {
        let total: f64 = tomogram_coherent(&state, theta, m)?.iter().sum();
        deviation = deviation.max((1.0 - total).abs());
    }
    rows.push(
        M,
        format!("coherent tomogram |1 - sum| <= tail + 1e-10, alpha={alpha}"),
        deviation,
        state.tail_bound() + 1e-10,
    );

    let half = DeformationParams::new(0.5)?;
    let mut deficits = Vec::new();
    for size in [16, 32, 64] {
        let mm = compute_measure(size, &half)?;
        let s = make_coherent(Complex64::new(0.9, 0.0), &half, size, 1.0)?;
        let total: f64 = tomogram_coherent(&s, 0.0, &mm)?.iter().sum();
        deficits.push(1.0 - total);
    }
    rows.push_bool(
        M,
        format!(
            "deficit decreasing in N (q=0.5, alpha=0.9): {:.2e}, {:.2e}, {:.2e}",
            deficits[0], deficits[1], deficits[2]
        ),
        deficits[0] > deficits[1] && deficits[1] > deficits[2],
    );

    let mut periodic: f64 = 0.0;
    for theta in [0.0, 0.8, 2.0, 5.5] {
        let a = tomogram_coherent(&state, theta, m)?;
        let b = tomogram_coherent(&state, theta + TAU, m)?;
        periodic = a.iter().zip(&b).map(|(u, v)| (u - v).abs()).fold(periodic, f64::max);
    }
    rows.push(M, "theta-periodicity", periodic, 1e-12);

    let real_state = make_coherent(Complex64::new(alpha.norm(), 0.0), p, n, tol)?;
    let mut reflect: f64 = 0.0;
    for theta in [0.4, 1.3, 2.9] {
        let a = tomogram_coherent(&real_state, theta, m)?;
        let b = tomogram_coherent(&real_state, -theta, m)?;
        reflect = a.iter().zip(&b).map(|(u, v)| (u - v).abs()).fold(reflect, f64::max);
    }
    rows.push(M, "real alpha: omega(theta) = omega(-theta)", reflect, 1e-12);

    rows.push(M, "Glauber limit, q=1-1e-4, N=128", glauber_distance()?, 2e-2);
    rows.push(M, "brute-force dense eigenvectors, N<=6", brute_force_distance(p)?, 1e-10);
    rows.push_bool(M, "JSON output round-trips exactly", json_round_trip(p, m)?);
    Ok(())
}

/// Sup over interior nodes of |density − Gaussian tomogram|.
pub fn glauber_distance() -> Result<f64> {
    let p = DeformationParams::new(1.0 - 1e-4)?;
    let m = compute_measure(128, &p)?;
    let mut worst: f64 = 0.0;
    for alpha in [Complex64::new(0.3, 0.0), Complex64::new(0.8, 0.2)] {
        let s = make_coherent(alpha, &p, 128, 1e-10)?;
        for theta in [0.0, FRAC_PI_4, FRAC_PI_2] {
            let dens = m.density(&tomogram_coherent(&s, theta, &m)?);
            for k in 1..127 {
                worst = worst.max((dens[k] - gaussian_oracle(alpha, theta, m.nodes()[k])).abs());
            }
        }
    }
    Ok(worst)
}

/// Max deviation between the recurrence pipeline and `|⟨x_k|Φ⟩|²` from dense
/// eigenvectors, for q ∈ {0.5, 0.9, q_config} and N ≤ 6.
pub fn brute_force_distance(p: &DeformationParams) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for q in [0.5, 0.9, p.q()] {
        let pq = DeformationParams::new(q)?;
        for n in 1..=6 {
            let m = compute_measure(n, &pq)?;
            let s = make_coherent(Complex64::new(0.35, -0.25), &pq, n, 1.0)?;
            for theta in [0.0, 1.0, FRAC_PI_2, 3.7] {
                let fast = tomogram_coherent(&s, theta, &m)?;
                let (_, vecs) = build_quadrature(n, &pq, theta).dense_eigen()?;
                for k in 0..n {
                    let amp: Complex64 = (0..n).map(|j| vecs[(j, k)].conj() * s.coeffs()[j]).sum();
                    worst = worst.max((amp.norm_sqr() - fast[k]).abs());
                }
            }
        }
    }
    Ok(worst)
}

fn json_round_trip(p: &DeformationParams, m: &SpectralMeasure) -> Result<bool> {
    let mut table = Table::default();
    table.push_real("x", m.nodes().to_vec());
    table.push_real("w", m.weights().to_vec());
    let meta = Meta {
        mode: "check".into(),
        q: p.q(),
        alpha: Amplitude { re: 0.0, im: 0.0 },
        fock_n: None,
        truncation: m.dim(),
        theta: ThetaGrid { start: 0.0, end: 0.0, steps: 1, values: vec![0.0] },
        tol: 0.0,
        tail_bound: 0.0,
        version: crate::VERSION.into(),
    };
    let mut buf = Vec::new();
    write_json(&meta, &table, &mut buf).expect("in-memory write");
    let v: serde_json::Value = serde_json::from_slice(&buf).expect("valid JSON");
    let x: Vec<f64> = serde_json::from_value(v["data"]["x"].clone()).expect("x column");
    let w: Vec<f64> = serde_json::from_value(v["data"]["w"].clone()).expect("w column");
    Ok(x == m.nodes() && w == m.weights())
}

/// Fixed-width pass/fail table.
pub fn render(rows: &[CheckRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max(9);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:<18} {:<width$} {:>12} {:>10}",
        "status", "module", "invariant", "measured", "threshold"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<6} {:<18} {:<width$} {:>12.3e} {:>10.1e}",
            if r.passed() { "PASS" } else { "FAIL" },
            r.module,
            r.name,
            r.measured,
            r.threshold
        );
    }
    let failed = rows.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(out, "{} checks, {} failed", rows.len(), failed);
    out
}

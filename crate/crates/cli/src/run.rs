use std::fs::File;
use std::io::{self, BufWriter, Write};

use qtomo::{compute_measure, eval_psi, make_coherent, SpectralMeasure, TomogramGrid};

use crate::check::{render, run_checks};
use crate::config::{Format, Mode, RunConfig};
use crate::error::CliError;
use crate::output::{write_json, Amplitude, Meta, Table, ThetaGrid};

/// Executes one configured run, writing to `--output` or standard output.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            run_to(cfg, &mut out)?;
            out.flush()?;
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            run_to(cfg, &mut out)
        }
    }
}

/// Like [`run`] but writes into the given sink.
pub fn run_to<W: Write>(cfg: &RunConfig, out: &mut W) -> Result<(), CliError> {
    if cfg.mode == Mode::Check {
        let rows = run_checks(cfg)?;
        out.write_all(render(&rows).as_bytes())?;
        let failed = rows.iter().filter(|r| !r.passed()).count();
        if failed > 0 {
            return Err(CliError::CheckFailed {
                failed,
                total: rows.len(),
            });
        }
        return Ok(());
    }

    let measure = compute_measure(cfg.truncation, &cfg.params)?;
    let (table, tail_bound) = build_table(cfg, &measure)?;
    match cfg.format {
        Format::Csv => table.write_csv(out)?,
        Format::Json => write_json(&meta(cfg, tail_bound), &table, out)?,
    }
    Ok(())
}

fn build_table(cfg: &RunConfig, m: &SpectralMeasure) -> Result<(Table, f64), CliError> {
    let thetas = cfg.theta_grid();
    let mut table = Table::default();
    match cfg.mode {
        Mode::TomogramCoherent | Mode::TomogramFock => {
            let grid = if cfg.mode == Mode::TomogramCoherent {
                let state = make_coherent(cfg.alpha, &cfg.params, cfg.truncation, cfg.tol)?;
                TomogramGrid::coherent(&state, thetas, m)?
            } else {
                TomogramGrid::fock(cfg.fock_n.expect("validated"), thetas, m)?
            };
            let rows = grid.theta_values.len() * m.dim();
            let (mut theta, mut x, mut p, mut w, mut dens) = (
                Vec::with_capacity(rows),
                Vec::with_capacity(rows),
                Vec::with_capacity(rows),
                Vec::with_capacity(rows),
                Vec::with_capacity(rows),
            );
            for (i, &t) in grid.theta_values.iter().enumerate() {
                for k in 0..m.dim() {
                    theta.push(t);
                    x.push(m.nodes()[k]);
                    p.push(grid.probabilities[i][k]);
                    w.push(m.weights()[k]);
                    dens.push(grid.densities[i][k]);
                }
            }
            table.push_real("theta", theta);
            table.push_real("x", x);
            table.push_real("p", p);
            table.push_real("w", w);
            table.push_real("omega_density", dens);
            Ok((table, grid.tail_bound))
        }
        Mode::Wavefunction => {
            let n = cfg.fock_n.expect("validated");
            let (mut theta, mut x, mut w, mut re, mut im) =
                (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
            for t in thetas {
                let psi = eval_psi(n, t, m)?;
                for (k, v) in psi.values.iter().enumerate() {
                    theta.push(t);
                    x.push(m.nodes()[k]);
                    w.push(m.weights()[k]);
                    re.push(v.re);
                    im.push(v.im);
                }
            }
            table.push_real("theta", theta);
            table.push_real("x", x);
            table.push_real("w", w);
            table.push_real("psi_re", re);
            table.push_real("psi_im", im);
            Ok((table, 0.0))
        }
        Mode::MeasureDump => {
            table.push_index("k", (0..m.dim()).collect());
            table.push_real("x", m.nodes().to_vec());
            table.push_real("w", m.weights().to_vec());
            Ok((table, 0.0))
        }
        Mode::Check => unreachable!("check mode has no data table"),
    }
}

fn meta(cfg: &RunConfig, tail_bound: f64) -> Meta {
    Meta {
        mode: cfg.mode.as_str().to_string(),
        q: cfg.params.q(),
        alpha: Amplitude {
            re: cfg.alpha.re,
            im: cfg.alpha.im,
        },
        fock_n: cfg.fock_n,
        truncation: cfg.truncation,
        theta: ThetaGrid {
            start: cfg.theta_start,
            end: cfg.theta_end,
            steps: cfg.theta_steps,
            values: cfg.theta_grid(),
        },
        tol: cfg.tol,
        tail_bound,
        version: crate::VERSION.to_string(),
    }
}

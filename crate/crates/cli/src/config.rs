use std::f64::consts::TAU;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use qtomo::DeformationParams;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    TomogramCoherent,
    TomogramFock,
    Wavefunction,
    MeasureDump,
    Check,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::TomogramCoherent => "tomogram-coherent",
            Mode::TomogramFock => "tomogram-fock",
            Mode::Wavefunction => "wavefunction",
            Mode::MeasureDump => "measure-dump",
            Mode::Check => "check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Optical tomograms of q-deformed Fock and coherent states.
#[derive(Debug, Clone, Parser)]
#[command(name = "qtomo", version)]
pub struct Cli {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Deformation parameter in (0, 1].
    #[arg(long)]
    pub q: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_im: f64,
    /// Fock index for tomogram-fock and wavefunction modes.
    #[arg(long)]
    pub fock_n: Option<usize>,
    /// Number of Fock states kept (also the number of quadrature nodes).
    #[arg(long, default_value_t = 64)]
    pub truncation: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta_start: f64,
    #[arg(long, default_value_t = TAU, allow_hyphen_values = true)]
    pub theta_end: f64,
    /// Number of phases, endpoint-inclusive.
    #[arg(long, default_value_t = 64)]
    pub theta_steps: usize,
    /// Bound on the coherent-state probability discarded by truncation.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Validated run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: DeformationParams,
    pub alpha: Complex64,
    pub fock_n: Option<usize>,
    pub truncation: usize,
    pub theta_start: f64,
    pub theta_end: f64,
    pub theta_steps: usize,
    pub tol: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// Endpoint-inclusive phase grid.
    pub fn theta_grid(&self) -> Vec<f64> {
        if self.theta_steps == 1 {
            return vec![self.theta_start];
        }
        let step = (self.theta_end - self.theta_start) / (self.theta_steps - 1) as f64;
        (0..self.theta_steps)
            .map(|i| {
                if i == self.theta_steps - 1 {
                    self.theta_end
                } else {
                    self.theta_start + i as f64 * step
                }
            })
            .collect()
    }
}

impl TryFrom<Cli> for RunConfig {
    type Error = CliError;

    fn try_from(cli: Cli) -> Result<Self, CliError> {
        let invalid = |msg: String| Err(CliError::Validation(msg));
        let params = match DeformationParams::new(cli.q) {
            Ok(p) => p,
            Err(e) => return invalid(e.to_string()),
        };
        if cli.truncation < 1 {
            return invalid("--truncation must be at least 1".into());
        }
        if cli.theta_steps < 1 {
            return invalid("--theta-steps must be at least 1".into());
        }
        for (name, v) in [
            ("--alpha-re", cli.alpha_re),
            ("--alpha-im", cli.alpha_im),
            ("--theta-start", cli.theta_start),
            ("--theta-end", cli.theta_end),
        ] {
            if !v.is_finite() {
                return invalid(format!("{name} must be finite, got {v}"));
            }
        }
        if !(cli.tol > 0.0 && cli.tol.is_finite()) {
            return invalid(format!("--tol must be positive, got {}", cli.tol));
        }
        if matches!(cli.mode, Mode::TomogramFock | Mode::Wavefunction) {
            match cli.fock_n {
                None => return invalid(format!("--fock-n is required for --mode {}", cli.mode.as_str())),
                Some(n) if n >= cli.truncation => {
                    return invalid(format!(
                        "--fock-n {n} must be below --truncation {}",
                        cli.truncation
                    ))
                }
                Some(_) => {}
            }
        }
        if cli.mode == Mode::Check && cli.truncation < 4 {
            return invalid("--mode check needs --truncation of at least 4".into());
        }
        Ok(RunConfig {
            mode: cli.mode,
            params,
            alpha: Complex64::new(cli.alpha_re, cli.alpha_im),
            fock_n: cli.fock_n,
            truncation: cli.truncation,
            theta_start: cli.theta_start,
            theta_end: cli.theta_end,
            theta_steps: cli.theta_steps,
            tol: cli.tol,
            output: cli.output,
            format: cli.format,
        })
    }
}

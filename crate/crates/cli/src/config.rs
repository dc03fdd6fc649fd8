use std::f64::consts::PI;
use std::path::PathBuf;

use ozawa_lab_core::experiment::{default_beta_grid, default_chi_grid};
use ozawa_lab_core::{ExperimentConfig, Exposure, InterferometerConfig};
use serde::Serialize;

use crate::args::{CommonArgs, Format, Mode, PortChoice};
use crate::error::CliError;

pub const OUTPUT_DIR_ENV: &str = "OZAWA_LAB_OUTPUT_DIR";

const MAX_GRID_POINTS: usize = 100_000;

/// Fully resolved run settings, echoed into every output file. Angles are
/// in units of π. The output path is not part of it, so the same settings
/// give the same bytes wherever they are written.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub a1: f64,
    pub a2: f64,
    pub chi_start: f64,
    pub chi_stop: f64,
    pub chi_step: f64,
    pub alpha: f64,
    pub contrast: f64,
    pub exposure: Option<f64>,
    pub seed: u64,
    pub mode: Mode,
    pub format: Format,
    pub beta_points: usize,
    pub calibration_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub port: Option<PortChoice>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

impl RunConfig {
    pub fn resolve(command: &'static str, args: &CommonArgs) -> Result<Self, CliError> {
        let a1 = args.a1;
        if !(a1.is_finite() && (0.0..=1.0).contains(&a1)) {
            return Err(invalid(format!("--a1 must lie in [0, 1], got {a1}")));
        }
        if !(args.chi_step.is_finite() && args.chi_step > 0.0) {
            return Err(invalid(format!("--chi-step must be positive, got {}", args.chi_step)));
        }
        if !(args.chi_start.is_finite() && args.chi_stop.is_finite()) || args.chi_stop < args.chi_start {
            return Err(invalid(format!(
                "--chi-stop ({}) must not be below --chi-start ({})",
                args.chi_stop, args.chi_start
            )));
        }
        if (args.chi_stop - args.chi_start) / args.chi_step >= MAX_GRID_POINTS as f64 {
            return Err(invalid(format!("χ grid exceeds {MAX_GRID_POINTS} points")));
        }
        if !(args.alpha.is_finite() && args.alpha != 0.0) {
            return Err(invalid(format!("--alpha must be finite and nonzero, got {}", args.alpha)));
        }
        if !(args.contrast > 0.0 && args.contrast <= 1.0) {
            return Err(invalid(format!("--contrast must lie in (0, 1], got {}", args.contrast)));
        }
        let exposure = match args.mode {
            Mode::Analytic => None,
            Mode::Montecarlo => {
                if !(args.exposure.is_finite() && args.exposure > 0.0) {
                    return Err(invalid(format!("--exposure must be positive, got {}", args.exposure)));
                }
                Some(args.exposure)
            }
        };
        if args.beta_points < 3 || args.calibration_points < 3 {
            return Err(invalid("--beta-points and --calibration-points must be at least 3"));
        }
        Ok(Self {
            command,
            a1,
            a2: (1.0 - a1 * a1).sqrt(),
            chi_start: args.chi_start,
            chi_stop: args.chi_stop,
            chi_step: args.chi_step,
            alpha: args.alpha,
            contrast: args.contrast,
            exposure,
            seed: args.seed,
            mode: args.mode,
            format: args.format,
            beta_points: args.beta_points,
            calibration_points: args.calibration_points,
            chi: None,
            port: None,
            out: args.out.clone(),
        })
    }

    /// `start, start + step, …` up to and including `stop`, in radians.
    pub fn chi_grid(&self) -> Vec<f64> {
        let n = ((self.chi_stop - self.chi_start) / self.chi_step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|k| (self.chi_start + k as f64 * self.chi_step) * PI)
            .collect()
    }

    pub fn exposure(&self) -> Exposure {
        self.exposure.map_or(Exposure::Analytic, Exposure::Counts)
    }

    pub fn instrument(&self, chi: f64) -> Result<InterferometerConfig, CliError> {
        InterferometerConfig::from_amplitudes(self.a1, self.a2, chi, self.alpha * PI)
            .map(|c| c.with_contrast(self.contrast))
            .map_err(|e| invalid(e.to_string()))
    }

    pub fn experiment(&self) -> Result<ExperimentConfig, CliError> {
        Ok(ExperimentConfig {
            instrument: self.instrument(0.0)?,
            chi_grid: self.chi_grid(),
            beta_grid: default_beta_grid(self.beta_points),
            calibration_grid: default_chi_grid(self.calibration_points),
            exposure: self.exposure(),
            master_seed: self.seed,
        })
    }
}

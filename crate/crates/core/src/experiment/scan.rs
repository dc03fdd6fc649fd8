//! β scans in one exit port and their analysis.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::experiment::counts::{CountRecord, Exposure, SeedPath, Setting, SpinAnalysis};
use crate::experiment::fit::{extract_beta_opt, fit_sinusoid, FitSample, SinusoidFit};
use crate::interferometer::{
    measured_intensity, noninterfering_intensities, ExitPort, InterferometerConfig,
};

/// `n` evenly spaced compensation angles over one period starting at 0.
pub fn default_beta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 * TAU / n as f64).collect()
}

/// Spin-up-x counts versus `β` in one port. The Minus port is recorded in
/// the forward beam: its data are the Plus-port intensities at `χ + π`.
pub fn run_beta_scan(
    cfg: &InterferometerConfig,
    port: ExitPort,
    beta_grid: &[f64],
    exposure: Exposure,
    master_seed: u64,
    scan_id: u64,
) -> Result<Vec<CountRecord>> {
    cfg.validate()?;
    exposure.validate()?;
    if beta_grid.is_empty() {
        return Err(LabError::InvalidConfig("empty β grid".into()));
    }
    let source = match port {
        ExitPort::Plus => *cfg,
        ExitPort::Minus => cfg.with_chi(cfg.chi + PI),
    };
    beta_grid
        .iter()
        .enumerate()
        .map(|(i, &beta)| {
            let intensity = measured_intensity(&source.with_beta(ExitPort::Plus, beta), ExitPort::Plus).up_x;
            let setting = Setting {
                chi: cfg.chi,
                beta,
                port,
                spin: SpinAnalysis::UpX,
            };
            CountRecord::observe(setting, intensity, exposure, SeedPath::new(master_seed, scan_id, i as u64))
        })
        .collect()
}

fn samples(records: &[CountRecord]) -> Vec<FitSample> {
    records
        .iter()
        .map(|r| FitSample {
            x: r.setting.beta,
            value: r.intensity(),
            weight: r.weight(),
        })
        .collect()
}

/// Removes the non-interfering admixture: `(I − (1 − C)·I_n.i.) / C`,
/// using the instrument's calibrated contrast and amplitudes.
pub fn contrast_corrected_samples(
    records: &[CountRecord],
    instrument: &InterferometerConfig,
) -> Result<Vec<FitSample>> {
    let c = instrument.contrast;
    if !(c > 0.0) {
        return Err(LabError::OutOfRange {
            name: "contrast",
            value: c,
            range: "(0, 1]",
        });
    }
    Ok(records
        .iter()
        .map(|r| {
            let port = r.setting.port;
            let ni = noninterfering_intensities(&instrument.with_beta(port, r.setting.beta), port).up_x;
            FitSample {
                x: r.setting.beta,
                value: (r.intensity() - (1.0 - c) * ni) / c,
                weight: r.weight() * c * c,
            }
        })
        .collect())
}

/// Path-presence estimate from a fitted compensation angle at finite
/// coupling `α`, for an ideal fringe.
///
/// The maximum of the ideal spin-up-x fringe sits at `β` where
/// `(a2²/2)·sin β − (a1²/2)·sin(α − β) = c·sin(α/2 − β)` with
/// `c = ±a1a2 cos χ`, and the optimal estimate is `(a1² + c)/(1 + 2c)`.
/// When `β = α/2` pins nothing the weak-limit value `β/α` is returned.
pub fn estimate_from_beta(beta: f64, alpha: f64, a1: f64) -> f64 {
    let a1_sq = a1 * a1;
    let a2_sq = 1.0 - a1_sq;
    let denom = (alpha / 2.0 - beta).sin();
    if denom.abs() < 1e-9 {
        return beta / alpha;
    }
    let cross = (0.5 * a2_sq * beta.sin() - 0.5 * a1_sq * (alpha - beta).sin()) / denom;
    let weight = 1.0 + 2.0 * cross;
    if weight.abs() < 1e-12 {
        return beta / alpha;
    }
    (a1_sq + cross) / weight
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaScanAnalysis {
    pub port: ExitPort,
    /// Fit to the measured intensities.
    pub raw: SinusoidFit,
    /// Fit after the contrast correction.
    pub corrected: SinusoidFit,
    pub beta_opt: f64,
    pub beta_opt_err: f64,
    /// Finite-coupling inversion of `beta_opt`.
    pub estimate: f64,
    pub estimate_err: f64,
    /// `beta_opt / α`.
    pub weak_estimate: f64,
    pub weak_estimate_err: f64,
}

impl BetaScanAnalysis {
    pub fn raw_beta_opt(&self) -> Result<f64> {
        extract_beta_opt(&self.raw)
    }
}

/// Fits a β scan raw and contrast-corrected and converts the corrected
/// maximum into an estimate. Errors are zero in analytic mode.
pub fn analyze_beta_scan(
    records: &[CountRecord],
    instrument: &InterferometerConfig,
) -> Result<BetaScanAnalysis> {
    let first = records
        .first()
        .ok_or_else(|| LabError::InvalidConfig("empty β scan".into()))?;
    if instrument.alpha == 0.0 {
        return Err(LabError::InvalidConfig(
            "estimates need a nonzero coupling".into(),
        ));
    }
    let analytic = first.exposure.is_analytic();
    let scrub = |mut f: SinusoidFit| {
        if analytic {
            f.offset_stderr = 0.0;
            f.amplitude_stderr = 0.0;
            f.phase_stderr = 0.0;
            f.offset_amplitude_cov = 0.0;
        }
        f
    };
    let raw = scrub(fit_sinusoid(&samples(records))?);
    let corrected = scrub(fit_sinusoid(&contrast_corrected_samples(records, instrument)?)?);
    let beta_opt = extract_beta_opt(&corrected)?;
    let beta_err = corrected.phase_stderr;
    let alpha = instrument.alpha;
    let estimate = estimate_from_beta(beta_opt, alpha, instrument.a1);
    let h = 1e-6;
    let slope = (estimate_from_beta(beta_opt + h, alpha, instrument.a1)
        - estimate_from_beta(beta_opt - h, alpha, instrument.a1))
        / (2.0 * h);
    Ok(BetaScanAnalysis {
        port: first.setting.port,
        raw,
        corrected,
        beta_opt,
        beta_opt_err: beta_err,
        estimate,
        estimate_err: slope.abs() * beta_err,
        weak_estimate: beta_opt / alpha,
        weak_estimate_err: beta_err / alpha.abs(),
    })
}

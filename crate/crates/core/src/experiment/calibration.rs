//! Contrast calibration, which-way populations and the reconstructed
//! `p₊(χ)` fringe.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::experiment::counts::{Exposure, SeedPath};
use crate::experiment::fit::{fit_sinusoid, FitSample, SinusoidFit};
use crate::interferometer::{measured_port_probability, ExitPort, InterferometerConfig};

/// Forward (O) and deviated (H) beam counts at one phase. The forward beam
/// is the Plus port.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterferogramPoint {
    pub chi: f64,
    pub counts_o: f64,
    pub counts_h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Interferogram {
    pub exposure: Exposure,
    pub points: Vec<InterferogramPoint>,
}

/// `n` evenly spaced phases over one period starting at 0.
pub fn default_chi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 * TAU / n as f64).collect()
}

pub fn simulate_interferogram(
    cfg: &InterferometerConfig,
    chi_grid: &[f64],
    exposure: Exposure,
    master_seed: u64,
    scan_id: u64,
) -> Result<Interferogram> {
    cfg.validate()?;
    exposure.validate()?;
    let points = chi_grid
        .iter()
        .enumerate()
        .map(|(i, &chi)| {
            let c = cfg.with_chi(chi);
            let draw = |port: ExitPort, slot: u64| -> Result<f64> {
                let p = measured_port_probability(&c, port).clamp(0.0, 1.0);
                let seed = SeedPath::new(master_seed, scan_id, 2 * i as u64 + slot);
                Ok(exposure.observe(p, seed)?.map_or(exposure.scale() * p, |k| k as f64))
            };
            Ok(InterferogramPoint {
                chi,
                counts_o: draw(ExitPort::Plus, 0)?,
                counts_h: draw(ExitPort::Minus, 1)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Interferogram { exposure, points })
}

fn check_period(ig: &Interferogram) -> Result<()> {
    let n = ig.points.len();
    if n < 3 {
        return Err(LabError::DegenerateDesign(format!(
            "interferogram has {n} points, need at least 3"
        )));
    }
    let (lo, hi) = ig
        .points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.chi), hi.max(p.chi)));
    let span = (hi - lo) * n as f64 / (n - 1) as f64;
    if span < TAU - 1e-9 {
        return Err(LabError::DegenerateDesign(format!(
            "interferogram spans {span:.4} rad, less than one period"
        )));
    }
    Ok(())
}

/// Sinusoid fit of `O / (O + H)` in `χ`.
pub fn fit_normalized(ig: &Interferogram) -> Result<SinusoidFit> {
    check_period(ig)?;
    let analytic = ig.exposure.is_analytic();
    let samples = ig
        .points
        .iter()
        .map(|p| {
            let total = p.counts_o + p.counts_h;
            if !(total > 0.0) {
                return Err(LabError::DegenerateDesign(format!(
                    "no counts at χ = {}",
                    p.chi
                )));
            }
            let n = p.counts_o / total;
            let weight = if analytic {
                1.0
            } else {
                total / (n * (1.0 - n)).max(1.0 / total)
            };
            Ok(FitSample {
                x: p.chi,
                value: n,
                weight,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut fit = fit_sinusoid(&samples)?;
    if analytic {
        fit.offset_stderr = 0.0;
        fit.amplitude_stderr = 0.0;
        fit.phase_stderr = 0.0;
        fit.offset_amplitude_cov = 0.0;
    }
    Ok(fit)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WhichWay {
    pub p1: f64,
    pub p2: f64,
    pub p1_err: f64,
}

/// Path populations from a detector placed directly behind the first
/// plate.
pub fn which_way(
    cfg: &InterferometerConfig,
    exposure: Exposure,
    master_seed: u64,
    scan_id: u64,
) -> Result<WhichWay> {
    cfg.validate()?;
    exposure.validate()?;
    let pops = [cfg.a1 * cfg.a1, cfg.a2 * cfg.a2];
    let draw = |slot: usize| -> Result<f64> {
        let seed = SeedPath::new(master_seed, scan_id, slot as u64);
        Ok(exposure
            .observe(pops[slot], seed)?
            .map_or(pops[slot], |k| k as f64))
    };
    let (n1, n2) = (draw(0)?, draw(1)?);
    let total = n1 + n2;
    if !(total > 0.0) {
        return Err(LabError::DegenerateDesign("which-way run recorded no counts".into()));
    }
    let p1 = n1 / total;
    let p1_err = if exposure.is_analytic() {
        0.0
    } else {
        (p1 * (1.0 - p1) / total).sqrt()
    };
    Ok(WhichWay {
        p1,
        p2: n2 / total,
        p1_err,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CalibrationResult {
    /// Fringe visibility of the symmetric (1:1) interferometer.
    pub contrast_symmetric: f64,
    /// Fringe visibility with the 2:1 absorber inserted.
    pub contrast_absorber: f64,
    pub ratio: f64,
    pub p1: f64,
    pub p2: f64,
    pub contrast_symmetric_err: f64,
    pub contrast_absorber_err: f64,
    pub ratio_err: f64,
    pub p1_err: f64,
}

/// Visibilities `c1/c0` of the normalized interferograms, clamped to
/// `[0, 1]`. A perfect symmetric instrument gives 1.
pub fn calibrate_contrast(
    symmetric: &Interferogram,
    absorber: &Interferogram,
    which: WhichWay,
) -> Result<CalibrationResult> {
    let sym = fit_normalized(symmetric)?;
    let abs = fit_normalized(absorber)?;
    let c11 = sym.visibility().clamp(0.0, 1.0);
    let c21 = abs.visibility().clamp(0.0, 1.0);
    let (e11, e21) = (sym.visibility_stderr(), abs.visibility_stderr());
    let ratio = if c11 > 0.0 { c21 / c11 } else { 0.0 };
    let ratio_err = if c11 > 0.0 && c21 > 0.0 {
        ratio * (e11 / c11).hypot(e21 / c21)
    } else {
        0.0
    };
    Ok(CalibrationResult {
        contrast_symmetric: c11,
        contrast_absorber: c21,
        ratio: ratio.min(1.0),
        p1: which.p1,
        p2: which.p2,
        contrast_symmetric_err: e11,
        contrast_absorber_err: e21,
        ratio_err,
        p1_err: which.p1_err,
    })
}

/// `p₊(χ) = ½ + g·cos(χ − χ₀)` with the half range `g` fixed by the
/// contrast ratio, so that `max p₊ − min p₊` equals the ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FringeEstimate {
    pub half_range: f64,
    pub phase: f64,
    pub half_range_err: f64,
    pub phase_err: f64,
}

impl FringeEstimate {
    pub fn p_plus(&self, chi: f64) -> f64 {
        0.5 + self.half_range * (chi - self.phase).cos()
    }

    pub fn p_plus_err(&self, chi: f64) -> f64 {
        let d = chi - self.phase;
        (d.cos() * self.half_range_err).hypot(self.half_range * d.sin() * self.phase_err)
    }

    /// Pure path state `(a1, a2)` with `a1·a2 = g`. The branch `a1 ≥ a2`
    /// is taken when the which-way population of path 1 is at least ½.
    pub fn amplitudes(&self, p1: f64) -> (f64, f64) {
        let g = self.half_range.clamp(0.0, 0.5);
        let root = (1.0 - 4.0 * g * g).max(0.0).sqrt();
        let big = ((1.0 + root) / 2.0).sqrt();
        let small = ((1.0 - root) / 2.0).sqrt();
        if p1 >= 0.5 {
            (big, small)
        } else {
            (small, big)
        }
    }
}

pub fn reconstruct_fringe(absorber: &Interferogram, calibration: &CalibrationResult) -> Result<FringeEstimate> {
    if !(calibration.contrast_symmetric > 0.0) {
        return Err(LabError::OutOfRange {
            name: "contrast_symmetric",
            value: calibration.contrast_symmetric,
            range: "(0, 1]",
        });
    }
    let fit = fit_normalized(absorber)?;
    Ok(FringeEstimate {
        half_range: (calibration.ratio / 2.0).min(0.5),
        phase: fit.phase,
        half_range_err: calibration.ratio_err / 2.0,
        phase_err: fit.phase_stderr,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReconstructedPoint {
    pub chi: f64,
    pub p_plus: f64,
    pub stderr: f64,
}

/// Contrast-corrected `p₊` at the phases of the absorber interferogram.
pub fn reconstruct_p_plus(
    absorber: &Interferogram,
    calibration: &CalibrationResult,
) -> Result<Vec<ReconstructedPoint>> {
    let fringe = reconstruct_fringe(absorber, calibration)?;
    Ok(absorber
        .points
        .iter()
        .map(|p| ReconstructedPoint {
            chi: p.chi,
            p_plus: fringe.p_plus(p.chi),
            stderr: fringe.p_plus_err(p.chi),
        })
        .collect())
}

/// The symmetric 1:1 instrument matching `cfg` in everything but the
/// amplitudes.
pub fn symmetric_counterpart(cfg: &InterferometerConfig) -> InterferometerConfig {
    InterferometerConfig {
        a1: FRAC_1_SQRT_2,
        a2: FRAC_1_SQRT_2,
        ..*cfg
    }
}

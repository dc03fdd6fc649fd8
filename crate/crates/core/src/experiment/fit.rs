//! Weighted least-squares fit of `c0 + c1·cos(x − φ)`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{LabError, Result};

/// Below this the phase of a fit is undefined.
pub const MIN_AMPLITUDE: f64 = 1e-12;

/// Smallest accepted ratio of normal-matrix eigenvalues.
const MIN_CONDITION: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitSample {
    pub x: f64,
    pub value: f64,
    /// Inverse variance.
    pub weight: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SinusoidFit {
    pub offset: f64,
    pub amplitude: f64,
    /// In `(−π, π]`.
    pub phase: f64,
    pub residual_rms: f64,
    pub offset_stderr: f64,
    pub amplitude_stderr: f64,
    pub phase_stderr: f64,
    /// Correlation of offset and amplitude errors.
    pub offset_amplitude_cov: f64,
}

impl SinusoidFit {
    pub fn at(&self, x: f64) -> f64 {
        self.offset + self.amplitude * (x - self.phase).cos()
    }

    /// `c1 / c0`.
    pub fn visibility(&self) -> f64 {
        self.amplitude / self.offset
    }

    /// Standard error of [`Self::visibility`] by linear propagation.
    pub fn visibility_stderr(&self) -> f64 {
        let v = self.visibility();
        let (c0, c1) = (self.offset, self.amplitude);
        let (ea, eo) = (self.amplitude_stderr / c0, v * self.offset_stderr / c0);
        let var = ea * ea + eo * eo - 2.0 * c1 / (c0 * c0 * c0) * self.offset_amplitude_cov;
        var.max(0.0).sqrt()
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

fn distinct_phases(samples: &[FitSample]) -> usize {
    let mut xs: Vec<f64> = samples.iter().map(|s| s.x.rem_euclid(TAU)).collect();
    xs.sort_by(f64::total_cmp);
    let mut count = 0;
    let mut last: Option<f64> = None;
    for &x in &xs {
        if last.is_none_or(|l| x - l > 1e-9) {
            count += 1;
            last = Some(x);
        }
    }
    if count > 1 && xs[0] + TAU - xs[xs.len() - 1] <= 1e-9 {
        count -= 1;
    }
    count
}

pub fn fit_sinusoid(samples: &[FitSample]) -> Result<SinusoidFit> {
    if samples.len() < 3 {
        return Err(LabError::DegenerateDesign(format!(
            "{} samples, need at least 3",
            samples.len()
        )));
    }
    if let Some(s) = samples
        .iter()
        .find(|s| !(s.weight.is_finite() && s.weight > 0.0 && s.x.is_finite() && s.value.is_finite()))
    {
        return Err(LabError::DegenerateDesign(format!(
            "sample at x = {} has weight {} and value {}",
            s.x, s.weight, s.value
        )));
    }
    let distinct = distinct_phases(samples);
    if distinct < 3 {
        return Err(LabError::DegenerateDesign(format!(
            "{distinct} distinct phases, need at least 3"
        )));
    }

    let mut normal = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    for s in samples {
        let row = Vector3::new(1.0, s.x.cos(), s.x.sin());
        normal += s.weight * row * row.transpose();
        rhs += s.weight * s.value * row;
    }
    let eig = normal.symmetric_eigen().eigenvalues;
    let (lo, hi) = (eig.min(), eig.max());
    if !(hi > 0.0) || lo / hi < MIN_CONDITION {
        return Err(LabError::DegenerateDesign(format!(
            "normal matrix condition ratio {:e}",
            lo / hi
        )));
    }
    let cov = normal
        .try_inverse()
        .ok_or_else(|| LabError::DegenerateDesign("normal matrix is singular".into()))?;
    let coef = cov * rhs;
    let (c0, a, b) = (coef[0], coef[1], coef[2]);
    let amplitude = a.hypot(b);
    if amplitude < MIN_AMPLITUDE {
        return Err(LabError::AmplitudeZero { amplitude });
    }
    let phase = wrap_angle(b.atan2(a));

    let r2 = amplitude * amplitude;
    let j_amp = Vector3::new(0.0, a / amplitude, b / amplitude);
    let j_phase = Vector3::new(0.0, -b / r2, a / r2);
    let e0 = Vector3::new(1.0, 0.0, 0.0);
    let quad = |u: &Vector3<f64>, v: &Vector3<f64>| (u.transpose() * cov * v)[0];

    let residual_rms = (samples
        .iter()
        .map(|s| {
            let r = s.value - (c0 + a * s.x.cos() + b * s.x.sin());
            r * r
        })
        .sum::<f64>()
        / samples.len() as f64)
        .sqrt();

    Ok(SinusoidFit {
        offset: c0,
        amplitude,
        phase,
        residual_rms,
        offset_stderr: quad(&e0, &e0).max(0.0).sqrt(),
        amplitude_stderr: quad(&j_amp, &j_amp).max(0.0).sqrt(),
        phase_stderr: quad(&j_phase, &j_phase).max(0.0).sqrt(),
        offset_amplitude_cov: quad(&e0, &j_amp),
    })
}

/// Argmax of the fitted sinusoid, in `(−π, π]`.
pub fn extract_beta_opt(fit: &SinusoidFit) -> Result<f64> {
    if !(fit.amplitude >= MIN_AMPLITUDE) {
        return Err(LabError::AmplitudeZero {
            amplitude: fit.amplitude,
        });
    }
    Ok(wrap_angle(fit.phase))
}

//! Full χ scan: calibration, which-way run, β scans in both ports and the
//! reconstructed error-disturbance budget at each phase.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::experiment::calibration::{
    calibrate_contrast, reconstruct_fringe, simulate_interferogram, symmetric_counterpart,
    which_way, CalibrationResult, FringeEstimate, WhichWay,
};
use crate::experiment::counts::Exposure;
use crate::experiment::scan::{analyze_beta_scan, run_beta_scan, BetaScanAnalysis};
use crate::interferometer::{
    output_probabilities, port_probability, ExitPort, InterferometerConfig,
};
use crate::qubit::EPS;
use crate::uncertainty::{
    commutator_bound_direct, delta_sigma_x, epsilon_closed_form, epsilon_pi1,
    optimal_estimates_pi1,
};

const SCAN_WHICH_WAY: u64 = 1;
const SCAN_SYMMETRIC: u64 = 2;
const SCAN_ABSORBER: u64 = 3;
const SCAN_BETA_BASE: u64 = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    /// Amplitudes, coupling and contrast; `χ` and `β` are overwritten.
    pub instrument: InterferometerConfig,
    pub chi_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    pub calibration_grid: Vec<f64>,
    pub exposure: Exposure,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.instrument.validate()?;
        self.exposure.validate()?;
        if self.chi_grid.is_empty() {
            return Err(LabError::InvalidConfig("empty χ grid".into()));
        }
        if self.instrument.alpha == 0.0 {
            return Err(LabError::InvalidConfig("coupling α must be nonzero".into()));
        }
        if self.instrument.contrast == 0.0 {
            return Err(LabError::InvalidConfig("contrast must be positive".into()));
        }
        let grids = [&self.chi_grid, &self.beta_grid, &self.calibration_grid];
        if grids.iter().any(|g| g.iter().any(|x| !x.is_finite())) {
            return Err(LabError::InvalidConfig("grid values must be finite".into()));
        }
        Ok(())
    }
}

/// Closed-form values at one phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TheoryPoint {
    pub p_plus: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub delta_b: f64,
    pub epsilon: f64,
    pub bound: f64,
}

impl TheoryPoint {
    pub fn at(cfg: &InterferometerConfig) -> Result<Self> {
        let (p_plus, _) = output_probabilities(cfg);
        let (a_plus, a_minus) = optimal_estimates_pi1(cfg);
        Ok(Self {
            p_plus,
            a_plus,
            a_minus,
            delta_b: delta_sigma_x(p_plus.clamp(0.0, 1.0))?,
            epsilon: epsilon_closed_form(cfg),
            bound: commutator_bound_direct(cfg),
        })
    }
}

/// Ports whose reconstructed probability is below this are treated as dark.
pub const DARK_PORT: f64 = 1e-9;

/// Per-port outcome of a β scan. `estimate` is `None` when the port is
/// dark or its fringe is flat.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PortResult {
    pub beta_opt: Option<f64>,
    pub beta_opt_err: f64,
    pub estimate: Option<f64>,
    pub estimate_err: f64,
    pub weak_estimate: Option<f64>,
}

impl PortResult {
    fn from_analysis(a: Result<BetaScanAnalysis>) -> Result<Self> {
        match a {
            Ok(a) => Ok(Self {
                beta_opt: Some(a.beta_opt),
                beta_opt_err: a.beta_opt_err,
                estimate: Some(a.estimate),
                estimate_err: a.estimate_err,
                weak_estimate: Some(a.weak_estimate),
            }),
            Err(LabError::AmplitudeZero { .. }) => Ok(Self::dark()),
            Err(e) => Err(e),
        }
    }

    fn dark() -> Self {
        Self {
            beta_opt: None,
            beta_opt_err: 0.0,
            estimate: None,
            estimate_err: 0.0,
            weak_estimate: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiPoint {
    pub chi: f64,
    pub p_plus: f64,
    pub p_plus_err: f64,
    pub plus: PortResult,
    pub minus: PortResult,
    pub delta_b: f64,
    pub delta_b_err: f64,
    pub epsilon: f64,
    pub epsilon_err: f64,
    /// `ε·Δ(σx)`
    pub lhs: f64,
    /// `½|⟨[Π₁, σx]⟩|` of the reconstructed state.
    pub rhs: f64,
    /// Combined standard error of `lhs − rhs`.
    pub sigma: f64,
    pub theory: TheoryPoint,
}

impl ChiPoint {
    pub fn epsilon_sq(&self) -> f64 {
        self.epsilon * self.epsilon
    }

    pub fn gap(&self) -> f64 {
        self.lhs - self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiScanResult {
    pub which_way: WhichWay,
    pub calibration: CalibrationResult,
    pub fringe: FringeEstimate,
    pub points: Vec<ChiPoint>,
}

impl ChiScanResult {
    /// Fraction of points with `lhs ≥ rhs − tol`.
    pub fn fraction_on_or_above(&self, tol: f64) -> f64 {
        let n = self.points.iter().filter(|p| p.lhs >= p.rhs - tol).count();
        n as f64 / self.points.len() as f64
    }
}

/// Calibration and which-way steps shared by every phase of a scan.
pub fn calibrate_instrument(
    config: &ExperimentConfig,
) -> Result<(WhichWay, CalibrationResult, FringeEstimate)> {
    let inst = &config.instrument;
    let seed = config.master_seed;
    let ww = which_way(inst, config.exposure, seed, SCAN_WHICH_WAY)?;
    let sym = simulate_interferogram(
        &symmetric_counterpart(inst),
        &config.calibration_grid,
        config.exposure,
        seed,
        SCAN_SYMMETRIC,
    )?;
    let abs = simulate_interferogram(inst, &config.calibration_grid, config.exposure, seed, SCAN_ABSORBER)?;
    let cal = calibrate_contrast(&sym, &abs, ww)?;
    let fringe = reconstruct_fringe(&abs, &cal)?;
    Ok((ww, cal, fringe))
}

fn evaluate_point(
    config: &ExperimentConfig,
    index: usize,
    chi: f64,
    ww: &WhichWay,
    cal: &CalibrationResult,
    fringe: &FringeEstimate,
) -> Result<ChiPoint> {
    let truth = config.instrument.with_chi(chi);
    let (a1, a2) = fringe.amplitudes(ww.p1);
    let known = InterferometerConfig::from_amplitudes(a1, a2, chi, truth.alpha)?
        .with_contrast(cal.contrast_symmetric);
    let reconstructed = known.with_chi(chi - fringe.phase).with_contrast(1.0);

    let port_result = |port: ExitPort| -> Result<PortResult> {
        if port_probability(&reconstructed, port) < DARK_PORT {
            return Ok(PortResult::dark());
        }
        let scan_id = SCAN_BETA_BASE + 2 * index as u64 + port.index() as u64;
        let records = run_beta_scan(&truth, port, &config.beta_grid, config.exposure, config.master_seed, scan_id)?;
        PortResult::from_analysis(analyze_beta_scan(&records, &known))
    };
    let plus = port_result(ExitPort::Plus)?;
    let minus = port_result(ExitPort::Minus)?;

    let optimal = optimal_estimates_pi1(&reconstructed);
    let estimates = (plus.estimate.unwrap_or(optimal.0), minus.estimate.unwrap_or(optimal.1));
    let epsilon = epsilon_pi1(&reconstructed, estimates)?;
    let (p_hat, _) = output_probabilities(&reconstructed);
    let p_hat = p_hat.clamp(0.0, 1.0);
    let p_err = fringe.p_plus_err(chi);
    let delta = delta_sigma_x(p_hat)?;
    let delta_err = if p_hat * (1.0 - p_hat) > EPS {
        (1.0 - 2.0 * p_hat).abs() / (p_hat * (1.0 - p_hat)).sqrt() * p_err
    } else {
        0.0
    };
    let epsilon_err = if epsilon > EPS {
        let term = |p: f64, opt: f64, est: f64, err: f64| p * (opt - est) * err;
        term(p_hat, optimal.0, estimates.0, plus.estimate_err)
            .hypot(term(1.0 - p_hat, optimal.1, estimates.1, minus.estimate_err))
            / epsilon
    } else {
        0.0
    };
    let phi = chi - fringe.phase;
    let g = fringe.half_range;
    let rhs_err = (phi.sin() * fringe.half_range_err).hypot(g * phi.cos() * fringe.phase_err);
    let lhs_err = (delta * epsilon_err).hypot(epsilon * delta_err);

    Ok(ChiPoint {
        chi,
        p_plus: p_hat,
        p_plus_err: p_err,
        plus,
        minus,
        delta_b: delta,
        delta_b_err: delta_err,
        epsilon,
        epsilon_err,
        lhs: epsilon * delta,
        rhs: commutator_bound_direct(&reconstructed),
        sigma: lhs_err.hypot(rhs_err),
        theory: TheoryPoint::at(&truth)?,
    })
}

/// Runs the whole experiment. Phases are evaluated in parallel and
/// gathered in grid order; every random draw is addressed by its seed
/// path, so the result does not depend on scheduling.
pub fn run_chi_scan(config: &ExperimentConfig) -> Result<ChiScanResult> {
    config.validate()?;
    let (ww, cal, fringe) = calibrate_instrument(config)?;
    let points = config
        .chi_grid
        .par_iter()
        .enumerate()
        .map(|(i, &chi)| evaluate_point(config, i, chi, &ww, &cal, &fringe))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChiScanResult {
        which_way: ww,
        calibration: cal,
        fringe,
        points,
    })
}

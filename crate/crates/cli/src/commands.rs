use std::f64::consts::PI;

use ozawa_lab_core::experiment::{
    analyze_beta_scan, calibrate_instrument, default_beta_grid, run_beta_scan, run_chi_scan,
    ChiPoint,
};
use ozawa_lab_core::interferometer::{optimal_beta, path_weak_value};
use ozawa_lab_core::uncertainty::verify_tightness;
use ozawa_lab_core::{ExitPort, TightnessReport};
use serde::Serialize;

use crate::args::{Mode, PortChoice, ScanBetaArgs};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{emit, render_bundle, render_table, Cell, Table};

pub const ANALYTIC_GAP_TOL: f64 = 1e-10;
pub const MONTE_CARLO_SIGMAS: f64 = 3.0;

const SCAN_CHI_COLUMNS: [&str; 26] = [
    "chi",
    "chi_over_pi",
    "p_plus",
    "p_plus_err",
    "A_opt_plus",
    "A_opt_plus_err",
    "A_opt_minus",
    "A_opt_minus_err",
    "A_weak_plus",
    "A_weak_minus",
    "delta_B",
    "delta_B_err",
    "epsilon",
    "epsilon_err",
    "epsilon_sq",
    "lhs",
    "rhs",
    "sigma",
    "theory_p_plus",
    "theory_A_opt_plus",
    "theory_A_opt_minus",
    "theory_delta_B",
    "theory_epsilon",
    "theory_epsilon_sq",
    "theory_bound",
    "theory_gap",
];

fn chi_row(p: &ChiPoint) -> Vec<Cell> {
    let t = p.theory;
    vec![
        p.chi.into(),
        (p.chi / PI).into(),
        p.p_plus.into(),
        p.p_plus_err.into(),
        p.plus.estimate.into(),
        p.plus.estimate_err.into(),
        p.minus.estimate.into(),
        p.minus.estimate_err.into(),
        p.plus.weak_estimate.into(),
        p.minus.weak_estimate.into(),
        p.delta_b.into(),
        p.delta_b_err.into(),
        p.epsilon.into(),
        p.epsilon_err.into(),
        p.epsilon_sq().into(),
        p.lhs.into(),
        p.rhs.into(),
        p.sigma.into(),
        t.p_plus.into(),
        t.a_plus.into(),
        t.a_minus.into(),
        t.delta_b.into(),
        t.epsilon.into(),
        (t.epsilon * t.epsilon).into(),
        t.bound.into(),
        (t.epsilon * t.delta_b - t.bound).into(),
    ]
}

pub fn scan_chi(config: &RunConfig) -> Result<(), CliError> {
    let result = run_chi_scan(&config.experiment()?)?;
    let mut table = Table::new(&SCAN_CHI_COLUMNS);
    for p in &result.points {
        table.push(chi_row(p));
    }
    emit(config, &render_table(config, &table)?)
}

const SCAN_BETA_COLUMNS: [&str; 22] = [
    "port",
    "beta",
    "beta_over_pi",
    "intensity_up_x",
    "expected_intensity",
    "counts",
    "fit_offset",
    "fit_amplitude",
    "fit_phase",
    "fit_residual_rms",
    "beta_opt",
    "beta_opt_err",
    "beta_opt_over_pi",
    "beta_opt_exact",
    "beta_opt_corrected",
    "beta_opt_corrected_err",
    "beta_opt_ideal_exact",
    "A_opt",
    "A_opt_err",
    "A_weak",
    "A_weak_err",
    "re_omega",
];

pub fn scan_beta(config: &RunConfig, args: &ScanBetaArgs) -> Result<(), CliError> {
    let cfg = config.instrument(args.chi * PI)?;
    let ports: &[ExitPort] = match args.port {
        PortChoice::Plus => &[ExitPort::Plus],
        PortChoice::Minus => &[ExitPort::Minus],
        PortChoice::Both => &ExitPort::BOTH,
    };
    let grid = default_beta_grid(config.beta_points);
    let mut table = Table::new(&SCAN_BETA_COLUMNS);
    for &port in ports {
        let records = run_beta_scan(&cfg, port, &grid, config.exposure(), config.seed, port.index() as u64)?;
        let a = analyze_beta_scan(&records, &cfg)?;
        let raw_opt = a.raw_beta_opt()?;
        let exact = optimal_beta(&cfg, port)?.exact;
        let ideal = optimal_beta(&cfg.with_contrast(1.0), port)?.exact;
        let re_omega = path_weak_value(&cfg, port)?.re;
        let name = match port {
            ExitPort::Plus => "plus",
            ExitPort::Minus => "minus",
        };
        for r in &records {
            table.push(vec![
                name.into(),
                r.setting.beta.into(),
                (r.setting.beta / PI).into(),
                r.intensity().into(),
                (r.mean / r.exposure.scale()).into(),
                r.counts.into(),
                a.raw.offset.into(),
                a.raw.amplitude.into(),
                a.raw.phase.into(),
                a.raw.residual_rms.into(),
                raw_opt.into(),
                a.raw.phase_stderr.into(),
                (raw_opt / PI).into(),
                exact.into(),
                a.beta_opt.into(),
                a.beta_opt_err.into(),
                ideal.into(),
                a.estimate.into(),
                a.estimate_err.into(),
                a.weak_estimate.into(),
                a.weak_estimate_err.into(),
                re_omega.into(),
            ]);
        }
    }
    emit(config, &render_table(config, &table)?)
}

/// Pass/fail of a tightness table: analytic gaps below
/// [`ANALYTIC_GAP_TOL`], simulated points no more than
/// [`MONTE_CARLO_SIGMAS`] standard errors below the bound.
pub fn verify_verdict(mode: Mode, rows: &[(f64, f64, f64)]) -> Result<String, String> {
    match mode {
        Mode::Analytic => {
            let max_gap = rows.iter().map(|r| (r.0 - r.1).abs()).fold(0.0, f64::max);
            let msg = format!("max|lhs − rhs| = {max_gap:e} over {} points", rows.len());
            if max_gap < ANALYTIC_GAP_TOL {
                Ok(msg)
            } else {
                Err(msg)
            }
        }
        Mode::Montecarlo => {
            let below = rows
                .iter()
                .filter(|(lhs, rhs, sigma)| *lhs < rhs - MONTE_CARLO_SIGMAS * sigma - ANALYTIC_GAP_TOL)
                .count();
            let msg = format!("{below} of {} points below rhs − 3σ", rows.len());
            if below == 0 {
                Ok(msg)
            } else {
                Err(msg)
            }
        }
    }
}

pub fn verify(config: &RunConfig) -> Result<(), CliError> {
    let mut table;
    let rows: Vec<(f64, f64, f64)>;
    match config.mode {
        Mode::Analytic => {
            let reports: Vec<TightnessReport> = verify_tightness(&config.instrument(0.0)?, &config.chi_grid())?;
            table = Table::new(&["chi", "chi_over_pi", "lhs", "rhs", "gap"]);
            for r in &reports {
                table.push(vec![r.chi.into(), (r.chi / PI).into(), r.lhs.into(), r.rhs.into(), r.gap.into()]);
            }
            rows = reports.iter().map(|r| (r.lhs, r.rhs, 0.0)).collect();
        }
        Mode::Montecarlo => {
            let result = run_chi_scan(&config.experiment()?)?;
            table = Table::new(&["chi", "chi_over_pi", "lhs", "rhs", "gap", "sigma", "theory_lhs", "theory_rhs"]);
            for p in &result.points {
                table.push(vec![
                    p.chi.into(),
                    (p.chi / PI).into(),
                    p.lhs.into(),
                    p.rhs.into(),
                    p.gap().into(),
                    p.sigma.into(),
                    (p.theory.epsilon * p.theory.delta_b).into(),
                    p.theory.bound.into(),
                ]);
            }
            rows = result.points.iter().map(|p| (p.lhs, p.rhs, p.sigma)).collect();
        }
    }
    emit(config, &render_table(config, &table)?)?;
    match verify_verdict(config.mode, &rows) {
        Ok(msg) => {
            eprintln!("verify: {msg}");
            Ok(())
        }
        Err(msg) => Err(CliError::Verification(msg)),
    }
}

#[derive(Serialize)]
struct CalibrationBundle {
    contrast_symmetric: f64,
    contrast_absorber: f64,
    ratio: f64,
    p1: f64,
    p2: f64,
    contrast_symmetric_err: f64,
    contrast_absorber_err: f64,
    ratio_err: f64,
    p1_err: f64,
    /// `max p₊ − min p₊` of the reconstructed fringe
    p_plus_range: f64,
    fringe_phase: f64,
}

pub fn calibrate(config: &RunConfig) -> Result<(), CliError> {
    let (_, cal, fringe) = calibrate_instrument(&config.experiment()?)?;
    let bundle = CalibrationBundle {
        contrast_symmetric: cal.contrast_symmetric,
        contrast_absorber: cal.contrast_absorber,
        ratio: cal.ratio,
        p1: cal.p1,
        p2: cal.p2,
        contrast_symmetric_err: cal.contrast_symmetric_err,
        contrast_absorber_err: cal.contrast_absorber_err,
        ratio_err: cal.ratio_err,
        p1_err: cal.p1_err,
        p_plus_range: 2.0 * fringe.half_range,
        fringe_phase: fringe.phase,
    };
    emit(config, &render_bundle(config, &bundle)?)
}

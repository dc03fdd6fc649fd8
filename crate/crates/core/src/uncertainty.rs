//! Error, spread and commutator bound for path presence `Π₁` measured
//! through the exit-port observable `σx = |+⟩⟨+| − |−⟩⟨−|`.
//!
//! The exit-port projectors commute with `σx`, so the disturbance term
//! drops out and the relation reduces to `ε(Π₁)·Δ(σx) ≥ ½|⟨[Π₁, σx]⟩|`,
//! which pure states saturate when the estimates are optimal.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::interferometer::{
    initial_state, output_probabilities, path_weak_value, port_probability, ExitPort, InterferometerConfig,
};
use crate::measurement::BOUND_TOL;
use crate::qubit::{apply, commutator, inner_product, path_one_projector, pauli, Axis, EPS};

/// `Δ(σx) = 2√(p₊p₋)`.
pub fn delta_sigma_x(p_plus: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_plus) {
        return Err(LabError::OutOfRange {
            name: "p_plus",
            value: p_plus,
            range: "[0, 1]",
        });
    }
    Ok(2.0 * (p_plus * (1.0 - p_plus)).sqrt())
}

/// `ε(Π₁)` for estimates `(A₊, A₋)`: `ε² = Σ± p± |ω₁± − A±|²`. A dark
/// port contributes nothing.
pub fn epsilon_pi1(cfg: &InterferometerConfig, estimates: (f64, f64)) -> Result<f64> {
    let mut sq = 0.0;
    for (port, estimate) in [(ExitPort::Plus, estimates.0), (ExitPort::Minus, estimates.1)] {
        let p = port_probability(cfg, port);
        if p <= EPS {
            continue;
        }
        sq += p * (path_weak_value(cfg, port)? - estimate).norm_sqr();
    }
    Ok(sq.sqrt())
}

/// `(Re ω₁₊, Re ω₁₋)`, with `a1²` for a dark port.
pub fn optimal_estimates_pi1(cfg: &InterferometerConfig) -> (f64, f64) {
    let estimate =
        |port| path_weak_value(cfg, port).map_or(cfg.a1 * cfg.a1, |w: Complex64| w.re);
    (estimate(ExitPort::Plus), estimate(ExitPort::Minus))
}

/// `ε² = sin²χ (a1a2)² / (1 − (2a1a2 cos χ)²)` with optimal estimates.
///
/// When the denominator vanishes (`a1 = a2`, `χ ∈ {0, π}`) one port is
/// dark, the other has a real weak value, and the error is 0 there.
pub fn epsilon_closed_form(cfg: &InterferometerConfig) -> f64 {
    let g = cfg.amplitude_product();
    let c = 2.0 * g * cfg.chi.cos();
    let denom = 1.0 - c * c;
    if denom <= EPS {
        return 0.0;
    }
    cfg.chi.sin().abs() * g / denom.sqrt()
}

/// `½|⟨ψ|[Π₁, σx]|ψ⟩|` by 2×2 matrix evaluation.
pub fn commutator_bound_direct(cfg: &InterferometerConfig) -> f64 {
    let psi = initial_state(cfg);
    let com = commutator(&path_one_projector(), &pauli(Axis::X)).expect("2x2");
    let value = inner_product(&psi, &apply(&com, &psi).expect("2x2")).expect("2-dim");
    0.5 * value.norm()
}

/// `½|p₊(χ − π/2) − p₊(χ + π/2)|`.
pub fn commutator_bound_phase_shift(p_plus_fn: impl Fn(f64) -> f64, chi: f64) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    0.5 * (p_plus_fn(chi - half_pi) - p_plus_fn(chi + half_pi)).abs()
}

/// `½|d(p₊ − p₋)/dχ|` by central differences.
pub fn fringe_gradient_bound(p_plus_fn: impl Fn(f64) -> f64, chi: f64, step: f64) -> Result<f64> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(LabError::OutOfRange {
            name: "step",
            value: step,
            range: "(0, 0.1]",
        });
    }
    let fringe = |x: f64| 2.0 * p_plus_fn(x) - 1.0;
    Ok(0.5 * ((fringe(chi + step) - fringe(chi - step)) / (2.0 * step)).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TightnessReport {
    pub chi: f64,
    /// `ε·Δ(σx)`
    pub lhs: f64,
    /// `½|⟨[Π₁, σx]⟩|`
    pub rhs: f64,
    pub gap: f64,
}

impl TightnessReport {
    pub fn satisfied(&self) -> bool {
        self.gap >= -BOUND_TOL
    }
}

/// Both sides at one phase. `estimates = None` uses the closed-form optimal
/// error; explicit estimates go through the weak-value sum.
pub fn tightness_at(
    cfg: &InterferometerConfig,
    estimates: Option<(f64, f64)>,
) -> Result<TightnessReport> {
    let eps = match estimates {
        None => epsilon_closed_form(cfg),
        Some(est) => epsilon_pi1(cfg, est)?,
    };
    let (p_plus, _) = output_probabilities(cfg);
    let lhs = eps * delta_sigma_x(p_plus.clamp(0.0, 1.0))?;
    let rhs = commutator_bound_direct(cfg);
    Ok(TightnessReport {
        chi: cfg.chi,
        lhs,
        rhs,
        gap: lhs - rhs,
    })
}

/// Tightness check over a phase grid, ordered as `chi_grid`.
pub fn verify_tightness(
    template: &InterferometerConfig,
    chi_grid: &[f64],
) -> Result<Vec<TightnessReport>> {
    if chi_grid.is_empty() {
        return Err(LabError::InvalidConfig("empty phase grid".into()));
    }
    chi_grid
        .iter()
        .map(|&chi| tightness_at(&template.with_chi(chi), None))
        .collect()
}

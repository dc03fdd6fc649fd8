use std::f64::consts::PI;

use ozawa_lab_core::experiment::{default_beta_grid, default_chi_grid, run_chi_scan};
use ozawa_lab_core::uncertainty::{
    commutator_bound_direct, epsilon_closed_form, epsilon_pi1, optimal_estimates_pi1, tightness_at,
    verify_tightness,
};
use ozawa_lab_core::{ExperimentConfig, Exposure, InterferometerConfig};
use proptest::prelude::*;

fn config(exposure: Exposure, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        instrument: InterferometerConfig::new(0.8f64.sqrt(), 0.0, PI / 8.0).unwrap(),
        chi_grid: default_chi_grid(12),
        beta_grid: default_beta_grid(16),
        calibration_grid: default_chi_grid(32),
        exposure,
        master_seed: seed,
    }
}

#[test]
fn analytic_scan_reproduces_theory() {
    let result = run_chi_scan(&config(Exposure::Analytic, 0)).unwrap();
    assert!((result.calibration.ratio - 0.8).abs() < 1e-9);
    for p in &result.points {
        assert!((p.p_plus - p.theory.p_plus).abs() < 1e-9);
        assert!((p.epsilon - p.theory.epsilon).abs() < 1e-6, "chi {}", p.chi);
        assert!((p.rhs - p.theory.bound).abs() < 1e-9);
        assert!(p.gap().abs() < 1e-6);
        if let Some(a) = p.plus.estimate {
            assert!((a - p.theory.a_plus).abs() < 1e-6);
        }
    }
}

#[test]
fn montecarlo_scan_is_seed_deterministic() {
    let a = run_chi_scan(&config(Exposure::Counts(1e4), 5)).unwrap();
    let b = run_chi_scan(&config(Exposure::Counts(1e4), 5)).unwrap();
    let c = run_chi_scan(&config(Exposure::Counts(1e4), 6)).unwrap();
    let lhs = |r: &ozawa_lab_core::ChiScanResult| r.points.iter().map(|p| p.lhs).collect::<Vec<_>>();
    assert_eq!(lhs(&a), lhs(&b));
    assert_ne!(lhs(&a), lhs(&c));
    assert!(a.fraction_on_or_above(3.0) >= 0.9);
}

#[test]
fn empty_grid_rejected() {
    let cfg = InterferometerConfig::new(0.6, 0.0, 0.1).unwrap();
    assert!(verify_tightness(&cfg, &[]).is_err());
}

proptest! {
    #[test]
    fn optimal_estimates_saturate_the_bound(a1 in 0.05f64..0.999, chi in -PI..PI) {
        let cfg = InterferometerConfig::new(a1, chi, 0.2).unwrap();
        let r = tightness_at(&cfg, None).unwrap();
        prop_assert!(r.gap.abs() < 1e-10);
        let direct = epsilon_pi1(&cfg, optimal_estimates_pi1(&cfg)).unwrap();
        prop_assert!((direct - epsilon_closed_form(&cfg)).abs() < 1e-9);
    }

    #[test]
    fn any_estimates_respect_the_bound(
        a1 in 0.05f64..0.999,
        chi in -PI..PI,
        ap in -3.0f64..3.0,
        am in -3.0f64..3.0,
    ) {
        let cfg = InterferometerConfig::new(a1, chi, 0.2).unwrap();
        let r = tightness_at(&cfg, Some((ap, am))).unwrap();
        prop_assert!(r.lhs >= commutator_bound_direct(&cfg) - 1e-10);
    }
}

//! Monte-Carlo reproduction of the counting experiment.

pub mod calibration;
pub mod counts;
pub mod fit;
pub mod pipeline;
pub mod scan;

pub use calibration::{
    calibrate_contrast, default_chi_grid, reconstruct_fringe, reconstruct_p_plus,
    simulate_interferogram, symmetric_counterpart, which_way, CalibrationResult, FringeEstimate,
    Interferogram, InterferogramPoint, ReconstructedPoint, WhichWay,
};
pub use counts::{simulate_counts, CountRecord, Exposure, SeedPath, Setting, SpinAnalysis};
pub use fit::{extract_beta_opt, fit_sinusoid, wrap_angle, FitSample, SinusoidFit};
pub use pipeline::{
    calibrate_instrument, run_chi_scan, ChiPoint, ChiScanResult, ExperimentConfig, PortResult,
    TheoryPoint,
};
pub use scan::{
    analyze_beta_scan, contrast_corrected_samples, default_beta_grid, estimate_from_beta,
    run_beta_scan, BetaScanAnalysis,
};

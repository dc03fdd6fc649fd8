use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "ozawa-lab", version, about = "Error-disturbance interferometry: scans, calibration and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// p₊, optimal estimates, Δ(σx) and ε over a χ grid
    ScanChi(CommonArgs),
    /// Spin-up-x intensity versus β at one χ, with fitted optimum
    ScanBeta(ScanBetaArgs),
    /// Tightness table; nonzero exit status if the check fails
    Verify(CommonArgs),
    /// Contrast calibration and which-way populations
    Calibrate(CommonArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Montecarlo,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PortChoice {
    Plus,
    Minus,
    Both,
}

/// Angles are in units of π.
#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Path-1 amplitude; a2 = √(1 − a1²)
    #[arg(long, default_value_t = 0.894_427_190_999_915_9)]
    pub a1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub chi_start: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub chi_stop: f64,
    #[arg(long, default_value_t = 0.02, allow_negative_numbers = true)]
    pub chi_step: f64,
    /// Coupling rotation
    #[arg(long, default_value_t = 0.125, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Fraction of coherently interfering intensity
    #[arg(long, default_value_t = 1.0)]
    pub contrast: f64,
    /// Expected counts per point at unit intensity (montecarlo mode)
    #[arg(long, default_value_t = 1e4, allow_negative_numbers = true)]
    pub exposure: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Mode::Analytic)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file. Defaults to $OZAWA_LAB_OUTPUT_DIR/<command>.<ext>,
    /// or stdout when the variable is unset.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Points per β scan, evenly spaced over one period
    #[arg(long, default_value_t = 16)]
    pub beta_points: usize,
    /// Points per calibration interferogram, evenly spaced over one period
    #[arg(long, default_value_t = 32)]
    pub calibration_points: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ScanBetaArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Phase of the scan
    #[arg(long, default_value_t = 0.04, allow_negative_numbers = true)]
    pub chi: f64,
    #[arg(long, value_enum, default_value_t = PortChoice::Both)]
    pub port: PortChoice,
}

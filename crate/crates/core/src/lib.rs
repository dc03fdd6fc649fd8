//! Qubit measurement-uncertainty laboratory.
//!
//! The crate covers operator-based error and disturbance for indirect
//! measurement models, weak values and optimal estimates, a closed-form
//! Mach-Zehnder interferometer with a spin probe and feedback
//! compensation, the tight error-disturbance check for path presence
//! against the exit-port observable, and a Monte-Carlo reproduction of
//! the counting experiment.

pub mod error;
pub mod experiment;
pub mod interferometer;
pub mod measurement;
pub mod qubit;
pub mod report;
pub mod uncertainty;

pub use error::{LabError, Result};
pub use qubit::{Basis, ComplexScalar, LinearMap, StateVector, EPS};
pub use experiment::{ChiScanResult, ExperimentConfig, Exposure};
pub use interferometer::{ExitPort, InterferometerConfig};
pub use measurement::{ApparatusModel, UncertaintyBudget};
pub use uncertainty::TightnessReport;

//! Mach-Zehnder interferometer with a spin probe.
//!
//! Path 1 carries a spin rotation `α` about z, each exit port a
//! counter-rotation `β±`. The spin starts in `|↑x⟩`; the exit spin is
//! analysed along ±x. Intensities are dimensionless probabilities
//! normalized over both ports.
//!
//! Sign convention: `β` counter-rotates, so the combined action on the spin
//! in a port is `exp[−(iα/2)σz(Π₁ − β/α)]` and the optimal compensation is
//! `β_opt ≈ α·Re ω₁±`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::measurement::ApparatusModel;
use crate::qubit::{
    apply, inner_product, path_one_projector, path_two_projector, pauli, projector, rotation_z,
    tensor_product, Axis, Basis, LinearMap, StateVector, EPS,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterferometerConfig {
    pub a1: f64,
    pub a2: f64,
    /// Phase-shifter setting, radians.
    pub chi: f64,
    /// Coupling rotation in path 1, radians.
    pub alpha: f64,
    pub beta_plus: f64,
    pub beta_minus: f64,
    /// Fraction of coherently interfering intensity.
    pub contrast: f64,
}

impl InterferometerConfig {
    /// Config with `a2 = √(1 − a1²)`, no compensation and unit contrast.
    pub fn new(a1: f64, chi: f64, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a1) {
            return Err(LabError::OutOfRange {
                name: "a1",
                value: a1,
                range: "[0, 1]",
            });
        }
        Self::from_amplitudes(a1, (1.0 - a1 * a1).sqrt(), chi, alpha)
    }

    pub fn from_amplitudes(a1: f64, a2: f64, chi: f64, alpha: f64) -> Result<Self> {
        let cfg = Self {
            a1,
            a2,
            chi,
            alpha,
            beta_plus: 0.0,
            beta_minus: 0.0,
            contrast: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The 2:1 absorber setting, `a1 = 2/√5`, with `α = π/8`.
    pub fn absorber_2_to_1(chi: f64) -> Self {
        Self::new(2.0 / 5f64.sqrt(), chi, std::f64::consts::PI / 8.0).expect("valid amplitudes")
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a1", self.a1), ("a2", self.a2)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(LabError::OutOfRange {
                    name,
                    value: v,
                    range: "[0, 1]",
                });
            }
        }
        let norm = self.a1 * self.a1 + self.a2 * self.a2;
        if (norm - 1.0).abs() > EPS {
            return Err(LabError::InvalidConfig(format!(
                "a1² + a2² = {norm}, expected 1"
            )));
        }
        if !(0.0..=1.0).contains(&self.contrast) {
            return Err(LabError::OutOfRange {
                name: "contrast",
                value: self.contrast,
                range: "[0, 1]",
            });
        }
        let angles = [self.chi, self.alpha, self.beta_plus, self.beta_minus];
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(LabError::InvalidConfig("angles must be finite".into()));
        }
        Ok(())
    }

    pub fn with_chi(mut self, chi: f64) -> Self {
        self.chi = chi;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_contrast(mut self, contrast: f64) -> Self {
        self.contrast = contrast;
        self
    }

    pub fn with_beta(mut self, port: ExitPort, beta: f64) -> Self {
        match port {
            ExitPort::Plus => self.beta_plus = beta,
            ExitPort::Minus => self.beta_minus = beta,
        }
        self
    }

    pub fn beta(&self, port: ExitPort) -> f64 {
        match port {
            ExitPort::Plus => self.beta_plus,
            ExitPort::Minus => self.beta_minus,
        }
    }

    /// `a1·a2`, half the ideal fringe range.
    pub fn amplitude_product(&self) -> f64 {
        self.a1 * self.a2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExitPort {
    Plus,
    Minus,
}

impl ExitPort {
    pub const BOTH: [ExitPort; 2] = [ExitPort::Plus, ExitPort::Minus];

    pub fn sign(self) -> f64 {
        match self {
            ExitPort::Plus => 1.0,
            ExitPort::Minus => -1.0,
        }
    }

    pub fn state(self) -> StateVector {
        match self {
            ExitPort::Plus => StateVector::plus(),
            ExitPort::Minus => StateVector::minus(),
        }
    }

    pub fn other(self) -> ExitPort {
        match self {
            ExitPort::Plus => ExitPort::Minus,
            ExitPort::Minus => ExitPort::Plus,
        }
    }

    pub fn index(self) -> usize {
        match self {
            ExitPort::Plus => 0,
            ExitPort::Minus => 1,
        }
    }
}

/// Spin-analysed intensity in one exit port.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntensityRecord {
    pub up_x: f64,
    pub down_x: f64,
}

impl IntensityRecord {
    pub fn total(&self) -> f64 {
        self.up_x + self.down_x
    }

    fn mix(self, other: IntensityRecord, weight: f64) -> IntensityRecord {
        IntensityRecord {
            up_x: weight * self.up_x + (1.0 - weight) * other.up_x,
            down_x: weight * self.down_x + (1.0 - weight) * other.down_x,
        }
    }
}

/// `a1|1⟩ + a2 e^{iχ}|2⟩`.
pub fn initial_state(cfg: &InterferometerConfig) -> StateVector {
    StateVector::from_array(
        [Complex64::from(cfg.a1), Complex64::from_polar(cfg.a2, cfg.chi)],
        Basis::Path,
    )
}

/// `p± = ½ ± a1·a2·cos χ`.
pub fn output_probabilities(cfg: &InterferometerConfig) -> (f64, f64) {
    let g = cfg.amplitude_product() * cfg.chi.cos();
    (0.5 + g, 0.5 - g)
}

/// Probability of one port under the ideal model.
pub fn port_probability(cfg: &InterferometerConfig, port: ExitPort) -> f64 {
    let (plus, minus) = output_probabilities(cfg);
    match port {
        ExitPort::Plus => plus,
        ExitPort::Minus => minus,
    }
}

/// Spin rotation by `alpha` in path 1 only: `Π₁⊗R_z(α) + Π₂⊗𝟙`.
pub fn coupling_unitary(alpha: f64) -> LinearMap {
    let m = &path_one_projector().kron(&rotation_z(alpha)).expect("2x2")
        + &path_two_projector().kron(&LinearMap::identity(2)).expect("2x2");
    m.into_unitary().expect("block-diagonal rotation")
}

/// Counter-rotation `R_z(−β)` on the spin of the `port` branch, identity on
/// the other branch.
pub fn compensation_unitary(beta: f64, port: ExitPort) -> LinearMap {
    let here = projector(&port.state()).expect("normalized port");
    let there = projector(&port.other().state()).expect("normalized port");
    let m = &here.kron(&rotation_z(-beta)).expect("2x2")
        + &there.kron(&LinearMap::identity(2)).expect("2x2");
    m.into_unitary().expect("block-diagonal rotation")
}

/// Unnormalized spin state leaving `port`; its squared norm is the
/// probability of that port.
pub fn exit_branch_state(cfg: &InterferometerConfig, port: ExitPort) -> StateVector {
    let input = tensor_product(&initial_state(cfg), &StateVector::up_x()).expect("path ⊗ spin");
    let evolved = [
        coupling_unitary(cfg.alpha),
        compensation_unitary(cfg.beta_plus, ExitPort::Plus),
        compensation_unitary(cfg.beta_minus, ExitPort::Minus),
    ]
    .iter()
    .fold(input, |state, u| apply(u, &state).expect("4x4 on 4"));

    let port_state = port.state();
    let bra = port_state.amplitudes();
    let amps = evolved.amplitudes();
    let spin = (0..2)
        .map(|k| (0..2).map(|i| bra[i].conj() * amps[2 * i + k]).sum())
        .collect();
    StateVector::unnormalized(spin, Basis::Spin).expect("two spin amplitudes")
}

/// Perfect-interferometer intensities `|⟨↑x|Ψ⟩|²`, `|⟨↓x|Ψ⟩|²`.
pub fn ideal_intensities(cfg: &InterferometerConfig, port: ExitPort) -> IntensityRecord {
    let branch = exit_branch_state(cfg, port);
    let project = |s: StateVector| inner_product(&s, &branch).expect("spin").norm_sqr();
    IntensityRecord {
        up_x: project(StateVector::up_x()),
        down_x: project(StateVector::down_x()),
    }
}

/// Intensities of neutrons that do not interfere: path 1 sees the coupling
/// and the compensation, path 2 only the compensation, and each path
/// splits evenly over the ports. Independent of `χ`.
pub fn noninterfering_intensities(cfg: &InterferometerConfig, port: ExitPort) -> IntensityRecord {
    let beta = cfg.beta(port);
    let spin_path_one = apply(
        &(&rotation_z(-beta) * &rotation_z(cfg.alpha)),
        &StateVector::up_x(),
    )
    .expect("spin");
    let spin_path_two = apply(&rotation_z(-beta), &StateVector::up_x()).expect("spin");
    let weights = [cfg.a1 * cfg.a1 / 2.0, cfg.a2 * cfg.a2 / 2.0];
    let project = |analyser: &StateVector| {
        [&spin_path_one, &spin_path_two]
            .iter()
            .zip(weights)
            .map(|(s, w)| w * inner_product(analyser, s).expect("spin").norm_sqr())
            .sum::<f64>()
    };
    IntensityRecord {
        up_x: project(&StateVector::up_x()),
        down_x: project(&StateVector::down_x()),
    }
}

/// `C·I_ideal + (1 − C)·I_n.i.`
pub fn measured_intensity(cfg: &InterferometerConfig, port: ExitPort) -> IntensityRecord {
    ideal_intensities(cfg, port).mix(noninterfering_intensities(cfg, port), cfg.contrast)
}

/// Spin-integrated port probability including the contrast loss.
pub fn measured_port_probability(cfg: &InterferometerConfig, port: ExitPort) -> f64 {
    cfg.contrast * port_probability(cfg, port) + (1.0 - cfg.contrast) * 0.5
}

/// `ω₁± = a1 / (a1 ± a2 e^{iχ})`, the weak value of `Π₁` post-selected on
/// the port.
pub fn path_weak_value(cfg: &InterferometerConfig, port: ExitPort) -> Result<Complex64> {
    let denom = Complex64::from(cfg.a1) + Complex64::from_polar(port.sign() * cfg.a2, cfg.chi);
    let overlap = denom.norm() * FRAC_1_SQRT_2;
    if overlap <= EPS {
        return Err(LabError::OrthogonalPostselection { overlap });
    }
    Ok(Complex64::from(cfg.a1) / denom)
}

/// `I(β) = offset + amplitude·cos(β − phase)` for the spin-up-x measured
/// intensity in one port, all other settings fixed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaFringe {
    pub offset: f64,
    pub amplitude: f64,
    pub phase: f64,
}

impl BetaFringe {
    pub fn at(&self, beta: f64) -> f64 {
        self.offset + self.amplitude * (beta - self.phase).cos()
    }
}

/// Closed form of the β scan. The intensity is the phasor sum of three
/// cosines: path 1 peaks at `β = α`, path 2 at `β = 0`, and the
/// interference term (scaled by the contrast) at `β = α/2`.
pub fn beta_fringe(cfg: &InterferometerConfig, port: ExitPort) -> BetaFringe {
    let cross = port.sign() * cfg.contrast * cfg.amplitude_product() * cfg.chi.cos();
    let phasor = Complex64::from_polar(cfg.a1 * cfg.a1 / 4.0, cfg.alpha)
        + Complex64::from(cfg.a2 * cfg.a2 / 4.0)
        + Complex64::from_polar(cross / 2.0, cfg.alpha / 2.0);
    BetaFringe {
        offset: 0.25 + 0.5 * cross * (cfg.alpha / 2.0).cos(),
        amplitude: phasor.norm(),
        phase: phasor.arg(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimalBeta {
    /// Argmax of the measured spin-up-x intensity.
    pub exact: f64,
    /// `α·Re ω₁±`.
    pub weak_limit: f64,
}

pub fn optimal_beta(cfg: &InterferometerConfig, port: ExitPort) -> Result<OptimalBeta> {
    if cfg.alpha == 0.0 {
        return Err(LabError::InvalidConfig(
            "optimal compensation needs a nonzero coupling".into(),
        ));
    }
    let weak = path_weak_value(cfg, port)?;
    let fringe = beta_fringe(cfg, port);
    if fringe.amplitude < EPS {
        return Err(LabError::AmplitudeZero {
            amplitude: fringe.amplitude,
        });
    }
    Ok(OptimalBeta {
        exact: fringe.phase,
        weak_limit: cfg.alpha * weak.re,
    })
}

/// Projective `|±⟩` measurement written as an indirect model: a controlled
/// flip copies the exit port onto a z-polarized probe, and the meter reads
/// `estimates[port]`.
pub fn port_measurement_model(estimates: [f64; 2]) -> ApparatusModel {
    let plus = projector(&StateVector::plus()).expect("normalized");
    let minus = projector(&StateVector::minus()).expect("normalized");
    let u = &plus.kron(&LinearMap::identity(2)).expect("2x2")
        + &minus.kron(&pauli(Axis::X)).expect("2x2");
    ApparatusModel::new_estimated(
        StateVector::up_z(),
        u,
        [StateVector::up_z(), StateVector::down_z()],
        estimates,
    )
    .expect("controlled flip is unitary")
}

/// Exit-port measurement with optimal estimates `Re ω₁±`. A port that can
/// never fire gets the estimate `⟨Π₁⟩ = a1²`; its value does not enter any
/// error.
pub fn as_apparatus_model(cfg: &InterferometerConfig) -> ApparatusModel {
    let estimate =
        |port| path_weak_value(cfg, port).map_or(cfg.a1 * cfg.a1, |w: Complex64| w.re);
    port_measurement_model([estimate(ExitPort::Plus), estimate(ExitPort::Minus)])
}

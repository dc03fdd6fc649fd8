//! Indirect measurement models and the operator-based error/disturbance
//! machinery.
//!
//! An [`ApparatusModel`] couples a two-level object (path qubit) to a
//! two-level probe (spin). From it we get the measurement operators
//! `M_m = ⟨m|U|ξ⟩`, rms error and disturbance both by brute-force 4×4
//! algebra and through the measurement operators, and the Hall-style
//! estimate errors built from weak values.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{LabError, Result};
use crate::qubit::{
    apply, commutator, expectation, inner_product, outer, projector, std_dev, tensor_product,
    Basis, LinearMap, StateVector, EPS,
};

/// Tolerance for the uncertainty inequality itself.
pub const BOUND_TOL: f64 = 1e-10;

/// The quadruple (probe space, `|ξ⟩`, `U`, `M`) with a two-outcome meter.
#[derive(Clone, Debug, PartialEq)]
pub struct ApparatusModel {
    probe_state: StateVector,
    interaction: LinearMap,
    meter_basis: [StateVector; 2],
    meter_values: [f64; 2],
}

impl ApparatusModel {
    /// Validated model. The meter must be non-degenerate.
    pub fn new(
        probe_state: StateVector,
        interaction: LinearMap,
        meter_basis: [StateVector; 2],
        meter_values: [f64; 2],
    ) -> Result<Self> {
        if (meter_values[0] - meter_values[1]).abs() <= EPS {
            return Err(LabError::InvalidModel(format!(
                "meter eigenvalues {meter_values:?} are degenerate"
            )));
        }
        Self::new_estimated(probe_state, interaction, meter_basis, meter_values)
    }

    /// Model whose meter readings are estimate values rather than meter
    /// eigenvalues. Estimates may coincide; the outcome basis stays explicit.
    pub fn new_estimated(
        probe_state: StateVector,
        interaction: LinearMap,
        meter_basis: [StateVector; 2],
        meter_values: [f64; 2],
    ) -> Result<Self> {
        let model = Self {
            probe_state,
            interaction,
            meter_basis,
            meter_values,
        };
        model.validate()?;
        Ok(model)
    }

    /// Same apparatus with the meter readings replaced by `estimates`.
    pub fn with_estimates(&self, estimates: [f64; 2]) -> Result<Self> {
        Self::new_estimated(
            self.probe_state.clone(),
            self.interaction.clone(),
            self.meter_basis.clone(),
            estimates,
        )
    }

    fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(LabError::InvalidModel(msg));
        if self.probe_state.dim() != 2 || !self.probe_state.is_normalized() {
            return invalid("probe state must be a normalized qubit".into());
        }
        if self.interaction.dim() != 4 {
            return invalid("interaction must be 4x4".into());
        }
        let defect = self.interaction.unitarity_defect();
        if defect >= EPS {
            return invalid(format!("interaction is not unitary (defect {defect:e})"));
        }
        if !is_orthonormal_basis(&self.meter_basis) {
            return invalid("meter basis is not orthonormal".into());
        }
        if self.meter_values.iter().any(|v| !v.is_finite()) {
            return invalid("meter values must be finite".into());
        }
        Ok(())
    }

    pub fn probe_state(&self) -> &StateVector {
        &self.probe_state
    }

    pub fn interaction(&self) -> &LinearMap {
        &self.interaction
    }

    pub fn meter_basis(&self) -> &[StateVector; 2] {
        &self.meter_basis
    }

    pub fn meter_values(&self) -> [f64; 2] {
        self.meter_values
    }

    /// `M = Σ m |m⟩⟨m|` on the probe.
    pub fn meter_observable(&self) -> LinearMap {
        let mut meter = LinearMap::zero(2);
        for (m, value) in self.meter_basis.iter().zip(self.meter_values) {
            meter = &meter + &outer(m, m).scale(Complex64::from(value));
        }
        meter.into_hermitian().expect("real spectral sum is Hermitian")
    }

    fn joint_input(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != 2 {
            return Err(LabError::BadDimension {
                expected: "object qubit".into(),
                found: psi.dim().to_string(),
            });
        }
        psi.require_normalized()?;
        let psi = psi.clone().with_basis(Basis::Path)?;
        let xi = self.probe_state.clone().with_basis(Basis::Spin)?;
        tensor_product(&psi, &xi)
    }
}

pub fn is_orthonormal_basis(basis: &[StateVector]) -> bool {
    basis.iter().enumerate().all(|(i, a)| {
        basis.iter().enumerate().all(|(j, b)| {
            let want = if i == j { 1.0 } else { 0.0 };
            inner_product(a, b).is_ok_and(|v| (v - want).norm() < EPS)
        })
    }) && basis.len() == basis.first().map_or(0, StateVector::dim)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOperatorFamily {
    operators: Vec<LinearMap>,
    outcome_values: Vec<f64>,
}

impl MeasurementOperatorFamily {
    pub fn new(operators: Vec<LinearMap>, outcome_values: Vec<f64>) -> Result<Self> {
        if operators.len() != outcome_values.len() || operators.is_empty() {
            return Err(LabError::BadDimension {
                expected: format!("{} outcome values", operators.len()),
                found: outcome_values.len().to_string(),
            });
        }
        let family = Self {
            operators,
            outcome_values,
        };
        let deviation = family.completeness_defect();
        if deviation >= EPS {
            return Err(LabError::IncompleteFamily { deviation });
        }
        Ok(family)
    }

    /// Projectors onto an orthonormal basis, labelled by `values`.
    pub fn projective(basis: &[StateVector], values: &[f64]) -> Result<Self> {
        if !is_orthonormal_basis(basis) {
            return Err(LabError::InvalidModel("basis is not orthonormal".into()));
        }
        let ops = basis.iter().map(projector).collect::<Result<Vec<_>>>()?;
        Self::new(ops, values.to_vec())
    }

    pub fn operators(&self) -> &[LinearMap] {
        &self.operators
    }

    pub fn outcome_values(&self) -> &[f64] {
        &self.outcome_values
    }

    /// `max |Σ M†M − 𝟙|`.
    pub fn completeness_defect(&self) -> f64 {
        let n = self.operators[0].dim();
        let sum = self
            .operators
            .iter()
            .fold(LinearMap::zero(n), |acc, m| &acc + &(&m.adjoint() * m));
        sum.max_abs_diff(&LinearMap::identity(n))
    }
}

/// `M_m = ⟨m|U|ξ⟩` as 2×2 maps on the object.
pub fn measurement_operators(model: &ApparatusModel) -> Result<MeasurementOperatorFamily> {
    model.validate()?;
    let u = model.interaction();
    let xi = model.probe_state().amplitudes();
    let ops = model
        .meter_basis()
        .iter()
        .map(|m| {
            let m = m.amplitudes();
            let entries = (0..4)
                .map(|k| {
                    let (i, j) = (k / 2, k % 2);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (p, mp) in m.iter().enumerate() {
                        for (q, xq) in xi.iter().enumerate() {
                            acc += mp.conj() * u.get(2 * i + p, 2 * j + q) * xq;
                        }
                    }
                    acc
                })
                .collect();
            LinearMap::from_rows(2, entries)
        })
        .collect::<Result<Vec<_>>>()?;
    MeasurementOperatorFamily::new(ops, model.meter_values().to_vec())
}

/// `ε(A) = ‖(U†(𝟙⊗M)U − A⊗𝟙)|ψ⟩|ξ⟩‖`.
pub fn rms_error(model: &ApparatusModel, a: &LinearMap, psi: &StateVector) -> Result<f64> {
    model.validate()?;
    a.require_hermitian()?;
    let input = model.joint_input(psi)?;
    let u = model.interaction();
    let meter = LinearMap::identity(2).kron(&model.meter_observable())?;
    let heisenberg = &(&u.adjoint() * &meter) * u;
    let target = a.kron(&LinearMap::identity(2))?;
    Ok(apply(&(&heisenberg - &target), &input)?.norm())
}

/// `η(B) = ‖(U†(B⊗𝟙)U − B⊗𝟙)|ψ⟩|ξ⟩‖`.
pub fn rms_disturbance(model: &ApparatusModel, b: &LinearMap, psi: &StateVector) -> Result<f64> {
    model.validate()?;
    b.require_hermitian()?;
    let input = model.joint_input(psi)?;
    let u = model.interaction();
    let lifted = b.kron(&LinearMap::identity(2))?;
    let evolved = &(&u.adjoint() * &lifted) * u;
    Ok(apply(&(&evolved - &lifted), &input)?.norm())
}

fn require_complete(fam: &MeasurementOperatorFamily) -> Result<()> {
    let deviation = fam.completeness_defect();
    if deviation >= EPS {
        Err(LabError::IncompleteFamily { deviation })
    } else {
        Ok(())
    }
}

/// `ε² = Σ_m ‖M_m (m − A)|ψ⟩‖²`.
pub fn kraus_error(fam: &MeasurementOperatorFamily, a: &LinearMap, psi: &StateVector) -> Result<f64> {
    require_complete(fam)?;
    a.require_hermitian()?;
    psi.require_normalized()?;
    let a_psi = apply(a, psi)?;
    let mut total = 0.0;
    for (m_op, &m) in fam.operators().iter().zip(fam.outcome_values()) {
        let shifted: Vec<Complex64> = psi
            .amplitudes()
            .iter()
            .zip(a_psi.amplitudes())
            .map(|(p, ap)| p * m - ap)
            .collect();
        let shifted = StateVector::unnormalized(shifted, psi.basis())?;
        total += apply(m_op, &shifted)?.norm_sqr();
    }
    Ok(total.sqrt())
}

/// `η² = Σ_m ‖[M_m, B]|ψ⟩‖²`.
pub fn kraus_disturbance(
    fam: &MeasurementOperatorFamily,
    b: &LinearMap,
    psi: &StateVector,
) -> Result<f64> {
    require_complete(fam)?;
    b.require_hermitian()?;
    psi.require_normalized()?;
    let mut total = 0.0;
    for m_op in fam.operators() {
        total += apply(&commutator(m_op, b)?, psi)?.norm_sqr();
    }
    Ok(total.sqrt())
}

/// `ω_m = ⟨m|A|ψ⟩ / ⟨m|ψ⟩`.
pub fn weak_value(a: &LinearMap, psi: &StateVector, m: &StateVector) -> Result<Complex64> {
    let overlap = inner_product(m, psi)?;
    if overlap.norm() <= EPS {
        return Err(LabError::OrthogonalPostselection {
            overlap: overlap.norm(),
        });
    }
    Ok(inner_product(m, &apply(a, psi)?)? / overlap)
}

/// Real estimate per outcome of a projective measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateAssignment {
    values: Vec<f64>,
    optimal: bool,
}

impl EstimateAssignment {
    /// Arbitrary estimates, not flagged optimal.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LabError::InvalidConfig("estimates must be finite".into()));
        }
        Ok(Self {
            values,
            optimal: false,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_optimal(&self) -> bool {
        self.optimal
    }
}

/// `A_m = Re ω_m` for every outcome of `basis`.
pub fn optimal_estimates(
    a: &LinearMap,
    psi: &StateVector,
    basis: &[StateVector],
) -> Result<EstimateAssignment> {
    if !is_orthonormal_basis(basis) {
        return Err(LabError::InvalidModel("basis is not orthonormal".into()));
    }
    let values = basis
        .iter()
        .map(|m| weak_value(a, psi, m).map(|w| w.re))
        .collect::<Result<Vec<_>>>()?;
    Ok(EstimateAssignment {
        values,
        optimal: true,
    })
}

/// The estimate error of a projective measurement evaluated four ways.
///
/// `operator_form` and `weak_value_form` hold for any estimates; the
/// moment and variance forms assume `A_m = Re ω_m` and are only filled in
/// for optimal assignments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HallErrorForms {
    /// `⟨ψ|(A − Σ A_m|m⟩⟨m|)²|ψ⟩`
    pub operator_form: f64,
    /// `⟨A²⟩ − Σ p_m A_m²`
    pub second_moment_form: Option<f64>,
    /// `Δ²(A) − Σ p_m (A_m − ⟨A⟩)²`
    pub variance_form: Option<f64>,
    /// `Σ p_m |ω_m − A_m|²`
    pub weak_value_form: f64,
}

/// All values are squared errors `ε²`.
pub fn projective_error_forms(
    a: &LinearMap,
    psi: &StateVector,
    basis: &[StateVector],
    estimates: &EstimateAssignment,
) -> Result<HallErrorForms> {
    a.require_hermitian()?;
    psi.require_normalized()?;
    if !is_orthonormal_basis(basis) || estimates.values().len() != basis.len() {
        return Err(LabError::InvalidModel(
            "basis must be orthonormal with one estimate per outcome".into(),
        ));
    }

    let mut reading = LinearMap::zero(a.dim());
    for (m, &est) in basis.iter().zip(estimates.values()) {
        reading = &reading + &projector(m)?.scale(Complex64::from(est));
    }
    let deviation = (a - &reading).into_hermitian()?;
    let operator_form = apply(&deviation, psi)?.norm_sqr();

    let mut weak_value_form = 0.0;
    let mut weighted_sq = 0.0;
    let mut weighted_centered = 0.0;
    let mean = expectation(a, psi)?;
    for (m, &est) in basis.iter().zip(estimates.values()) {
        let p = inner_product(m, psi)?.norm_sqr();
        let w = weak_value(a, psi, m)?;
        weak_value_form += p * (w - est).norm_sqr();
        weighted_sq += p * est * est;
        let centered = est - mean;
        weighted_centered += p * centered * centered;
    }

    let (second_moment_form, variance_form) = if estimates.is_optimal() {
        let second = apply(a, psi)?.norm_sqr();
        let sd = std_dev(a, psi)?;
        let variance = sd * sd;
        (
            Some(second - weighted_sq),
            Some(variance - weighted_centered),
        )
    } else {
        (None, None)
    };

    Ok(HallErrorForms {
        operator_form,
        second_moment_form,
        variance_form,
        weak_value_form,
    })
}

/// Every term of the general error-disturbance relation
/// `εη + εΔ_B + Δ_A η ≥ ½|⟨[A,B]⟩|`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct UncertaintyBudget {
    pub epsilon_a: f64,
    pub eta_b: f64,
    pub delta_a: f64,
    pub delta_b: f64,
    pub bound: f64,
}

impl UncertaintyBudget {
    pub fn lhs(&self) -> f64 {
        self.epsilon_a * self.eta_b + self.epsilon_a * self.delta_b + self.delta_a * self.eta_b
    }

    pub fn slack(&self) -> f64 {
        self.lhs() - self.bound
    }
}

/// Evaluates the relation; fails with [`LabError::BoundViolated`] if the
/// inequality does not hold to [`BOUND_TOL`].
pub fn ozawa_budget(
    model: &ApparatusModel,
    a: &LinearMap,
    b: &LinearMap,
    psi: &StateVector,
) -> Result<UncertaintyBudget> {
    let budget = UncertaintyBudget {
        epsilon_a: rms_error(model, a, psi)?,
        eta_b: rms_disturbance(model, b, psi)?,
        delta_a: std_dev(a, psi)?,
        delta_b: std_dev(b, psi)?,
        bound: 0.5 * inner_product(psi, &apply(&commutator(a, b)?, psi)?)?.norm(),
    };
    if budget.lhs() < budget.bound - BOUND_TOL {
        return Err(LabError::BoundViolated {
            lhs: budget.lhs(),
            bound: budget.bound,
        });
    }
    Ok(budget)
}

fn gaussian_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Normalized state with complex Gaussian amplitudes.
pub fn random_state(basis: Basis, rng: &mut impl Rng) -> StateVector {
    loop {
        let amps = (0..basis.dim()).map(|_| gaussian_complex(rng)).collect();
        if let Ok(s) = StateVector::new(amps, basis) {
            return s;
        }
    }
}

/// Unitary from Gram-Schmidt on the columns of a complex Gaussian matrix.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> LinearMap {
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while columns.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        for _ in 0..2 {
            for q in &columns {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            columns.push(v.into_iter().map(|c| c / norm).collect());
        }
    }
    LinearMap::from_fn(dim, |i, j| columns[j][i])
        .into_unitary()
        .expect("Gram-Schmidt output is unitary")
}

pub fn random_hermitian(rng: &mut impl Rng) -> LinearMap {
    let d0: f64 = rng.sample(StandardNormal);
    let d1: f64 = rng.sample(StandardNormal);
    let off = gaussian_complex(rng);
    LinearMap::from_rows(
        2,
        vec![Complex64::from(d0), off, off.conj(), Complex64::from(d1)],
    )
    .and_then(LinearMap::into_hermitian)
    .expect("constructed Hermitian")
}

/// Orthonormal qubit basis from the columns of a random unitary.
pub fn random_basis(basis: Basis, rng: &mut impl Rng) -> [StateVector; 2] {
    let u = random_unitary(2, rng);
    let col = |j: usize| {
        StateVector::unnormalized(vec![u.get(0, j), u.get(1, j)], basis).expect("dimension 2")
    };
    [col(0), col(1)]
}

/// Deterministic random apparatus. Even seeds use meter values `{−1, +1}`,
/// odd seeds a random distinct real pair.
pub fn random_apparatus(seed: u64) -> ApparatusModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let interaction = random_unitary(4, &mut rng);
    let probe = random_state(Basis::Spin, &mut rng);
    let basis = random_basis(Basis::Spin, &mut rng);
    let values = if seed % 2 == 0 {
        [-1.0, 1.0]
    } else {
        let lo: f64 = rng.random_range(-2.0..1.0);
        let gap: f64 = rng.random_range(0.05..2.0);
        [lo, lo + gap]
    };
    ApparatusModel::new(probe, interaction, basis, values).expect("random model is valid")
}

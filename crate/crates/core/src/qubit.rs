//! Dense complex linear algebra for path and spin qubits.
//!
//! Everything here works on dimension 2 (one qubit) or 4 (path ⊗ spin).
//! Composite states and operators always use the ordering
//! `(|1↑z⟩, |1↓z⟩, |2↑z⟩, |2↓z⟩)`, i.e. the path index is the slow one.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub type ComplexScalar = Complex64;

/// Shared tolerance for exact-arithmetic checks.
pub const EPS: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which degree of freedom a state vector describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Path,
    Spin,
    PathSpin,
}

impl Basis {
    pub fn dim(self) -> usize {
        match self {
            Basis::Path | Basis::Spin => 2,
            Basis::PathSpin => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    basis: Basis,
}

/// Normalizes `amplitudes` into a state of the given basis.
pub fn make_state(amplitudes: &[Complex64], basis: Basis) -> Result<StateVector> {
    StateVector::new(amplitudes.to_vec(), basis)
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>, basis: Basis) -> Result<Self> {
        let state = Self::unnormalized(amplitudes, basis)?;
        let norm = state.norm();
        if norm <= EPS {
            return Err(LabError::ZeroVector { norm });
        }
        Ok(state.scale(Complex64::from(1.0 / norm)))
    }

    /// Builds a vector without normalizing it. Used for exit-branch states
    /// whose squared norm is the probability of reaching that branch.
    pub fn unnormalized(amplitudes: Vec<Complex64>, basis: Basis) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(LabError::BadDimension {
                expected: format!("{} amplitudes for {basis:?}", basis.dim()),
                found: amplitudes.len().to_string(),
            });
        }
        Ok(Self { amplitudes, basis })
    }

    pub(crate) fn from_array<const N: usize>(amplitudes: [Complex64; N], basis: Basis) -> Self {
        debug_assert_eq!(N, basis.dim());
        Self {
            amplitudes: amplitudes.to_vec(),
            basis,
        }
    }

    pub fn up_z() -> Self {
        Self::from_array([ONE, ZERO], Basis::Spin)
    }

    pub fn down_z() -> Self {
        Self::from_array([ZERO, ONE], Basis::Spin)
    }

    pub fn up_x() -> Self {
        let h = Complex64::from(FRAC_1_SQRT_2);
        Self::from_array([h, h], Basis::Spin)
    }

    pub fn down_x() -> Self {
        let h = Complex64::from(FRAC_1_SQRT_2);
        Self::from_array([h, -h], Basis::Spin)
    }

    /// Neutron in path 1.
    pub fn path_one() -> Self {
        Self::from_array([ONE, ZERO], Basis::Path)
    }

    pub fn path_two() -> Self {
        Self::from_array([ZERO, ONE], Basis::Path)
    }

    /// Forward exit port, `(|1⟩ + |2⟩)/√2`.
    pub fn plus() -> Self {
        let h = Complex64::from(FRAC_1_SQRT_2);
        Self::from_array([h, h], Basis::Path)
    }

    /// `(|1⟩ − |2⟩)/√2`.
    pub fn minus() -> Self {
        let h = Complex64::from(FRAC_1_SQRT_2);
        Self::from_array([h, -h], Basis::Path)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < EPS
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(LabError::NotNormalized {
                norm_sq: self.norm_sqr(),
            })
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|c| c * factor).collect(),
            basis: self.basis,
        }
    }

    /// Relabels the vector. Dimension must match.
    pub fn with_basis(mut self, basis: Basis) -> Result<Self> {
        if basis.dim() != self.dim() {
            return Err(LabError::BadDimension {
                expected: format!("dimension {}", basis.dim()),
                found: self.dim().to_string(),
            });
        }
        self.basis = basis;
        Ok(self)
    }

    /// `|⟨self|other⟩| ≥ 1 − tol` for two normalized states.
    pub fn equal_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        match inner_product(self, other) {
            Ok(overlap) => (overlap.norm() - 1.0).abs() < tol,
            Err(_) => false,
        }
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Structural properties a map is known to have.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MapTags {
    pub unitary: bool,
    pub hermitian: bool,
    pub projector: bool,
}

/// Dense row-major square complex matrix of dimension 2 or 4.
#[derive(Clone, PartialEq)]
pub struct LinearMap {
    dim: usize,
    entries: Vec<Complex64>,
    tags: MapTags,
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LinearMap({}x{}, {:?})", self.dim, self.dim, self.tags)?;
        for row in self.entries.chunks(self.dim) {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl LinearMap {
    /// Untagged map from row-major entries.
    pub fn from_rows(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if !(dim == 2 || dim == 4) || entries.len() != dim * dim {
            return Err(LabError::BadDimension {
                expected: "2x2 or 4x4 entries".into(),
                found: format!("{} entries for dimension {dim}", entries.len()),
            });
        }
        Ok(Self {
            dim,
            entries,
            tags: MapTags::default(),
        })
    }

    pub(crate) fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self {
            dim,
            entries,
            tags: MapTags::default(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO });
        m.tags = MapTags {
            unitary: true,
            hermitian: true,
            projector: true,
        };
        m
    }

    pub fn zero(dim: usize) -> Self {
        let mut m = Self::from_fn(dim, |_, _| ZERO);
        m.tags.hermitian = true;
        m.tags.projector = true;
        m
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let dim = values.len();
        Self::from_fn(dim, |i, j| if i == j { values[i] } else { ZERO })
    }

    /// Real diagonal observable, tagged Hermitian.
    pub fn real_diagonal(values: &[f64]) -> Self {
        let c: Vec<Complex64> = values.iter().map(|&v| Complex64::from(v)).collect();
        let mut m = Self::diagonal(&c);
        m.tags.hermitian = true;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tags(&self) -> MapTags {
        self.tags
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::from_fn(self.dim, |i, j| self.get(j, i).conj());
        m.tags = self.tags;
        m
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|c| c * factor).collect(),
            tags: MapTags::default(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &LinearMap) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() < EPS
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() < EPS
    }

    pub fn is_projector(&self) -> bool {
        self.is_hermitian() && (self * self).max_abs_diff(self) < EPS
    }

    /// Verifies unitarity and tags the map.
    pub fn into_unitary(mut self) -> Result<Self> {
        let defect = self.unitarity_defect();
        if defect >= EPS {
            return Err(LabError::InvalidModel(format!(
                "map is not unitary (defect {defect:e})"
            )));
        }
        self.tags.unitary = true;
        Ok(self)
    }

    /// Verifies hermiticity and tags the map.
    pub fn into_hermitian(mut self) -> Result<Self> {
        let deviation = self.hermiticity_defect();
        if deviation >= EPS {
            return Err(LabError::NotHermitian { deviation });
        }
        self.tags.hermitian = true;
        Ok(self)
    }

    pub(crate) fn require_hermitian(&self) -> Result<()> {
        if self.tags.hermitian {
            return Ok(());
        }
        let deviation = self.hermiticity_defect();
        if deviation < EPS {
            Ok(())
        } else {
            Err(LabError::NotHermitian { deviation })
        }
    }

    fn require_dim(&self, dim: usize) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(LabError::BadDimension {
                expected: format!("{dim}x{dim} map"),
                found: format!("{0}x{0} map", self.dim),
            })
        }
    }

    /// Kronecker product `self ⊗ other` of two 2×2 maps.
    pub fn kron(&self, other: &LinearMap) -> Result<Self> {
        self.require_dim(2)?;
        other.require_dim(2)?;
        let mut m = Self::from_fn(4, |r, c| self.get(r / 2, c / 2) * other.get(r % 2, c % 2));
        m.tags = MapTags {
            unitary: self.tags.unitary && other.tags.unitary,
            hermitian: self.tags.hermitian && other.tags.hermitian,
            projector: self.tags.projector && other.tags.projector,
        };
        Ok(m)
    }

    fn apply_raw(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.get(i, j) * amplitudes[j])
                    .sum()
            })
            .collect()
    }
}

/// Entrywise helpers. These panic on dimension mismatch, like nalgebra's
/// operators; the fallible public operations check dimensions first.
impl Mul for &LinearMap {
    type Output = LinearMap;

    fn mul(self, rhs: &LinearMap) -> LinearMap {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        LinearMap::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum())
    }
}

impl Add for &LinearMap {
    type Output = LinearMap;

    fn add(self, rhs: &LinearMap) -> LinearMap {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        LinearMap::from_fn(self.dim, |i, j| self.get(i, j) + rhs.get(i, j))
    }
}

impl Sub for &LinearMap {
    type Output = LinearMap;

    fn sub(self, rhs: &LinearMap) -> LinearMap {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        LinearMap::from_fn(self.dim, |i, j| self.get(i, j) - rhs.get(i, j))
    }
}

/// `a ⊗ b` for a path state and a spin state.
pub fn tensor_product(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    if a.basis != Basis::Path || b.basis != Basis::Spin {
        return Err(LabError::BadDimension {
            expected: "Path ⊗ Spin".into(),
            found: format!("{:?} ⊗ {:?}", a.basis, b.basis),
        });
    }
    let amps = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    StateVector::unnormalized(amps, Basis::PathSpin)
}

pub fn apply(m: &LinearMap, s: &StateVector) -> Result<StateVector> {
    m.require_dim(s.dim())?;
    Ok(StateVector {
        amplitudes: m.apply_raw(&s.amplitudes),
        basis: s.basis,
    })
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(LabError::BadDimension {
            expected: format!("dimension {}", a.dim()),
            found: b.dim().to_string(),
        });
    }
    Ok(a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// `⟨s|h|s⟩` for a Hermitian `h`.
pub fn expectation(h: &LinearMap, s: &StateVector) -> Result<f64> {
    h.require_hermitian()?;
    let value = inner_product(s, &apply(h, s)?)?;
    debug_assert!(value.im.abs() < 1e-10, "imaginary residue {}", value.im);
    Ok(value.re)
}

/// Standard deviation `√(⟨h²⟩ − ⟨h⟩²)`.
pub fn std_dev(h: &LinearMap, s: &StateVector) -> Result<f64> {
    let mean = expectation(h, s)?;
    let mut sq = h * h;
    sq.tags.hermitian = true;
    let second = expectation(&sq, s)?;
    Ok((second - mean * mean).max(0.0).sqrt())
}

pub fn commutator(a: &LinearMap, b: &LinearMap) -> Result<LinearMap> {
    b.require_dim(a.dim)?;
    Ok(&(a * b) - &(b * a))
}

/// `exp(−i·angle·σz/2) = cos(angle/2)·𝟙 − i·sin(angle/2)·σz`.
pub fn rotation_z(angle: f64) -> LinearMap {
    let half = angle / 2.0;
    let mut m = LinearMap::diagonal(&[
        Complex64::from_polar(1.0, -half),
        Complex64::from_polar(1.0, half),
    ]);
    m.tags.unitary = true;
    m
}

/// `|s⟩⟨s|` for a normalized state.
pub fn projector(s: &StateVector) -> Result<LinearMap> {
    s.require_normalized()?;
    let mut m = outer(s, s);
    m.tags.hermitian = true;
    m.tags.projector = true;
    Ok(m)
}

/// `|a⟩⟨b|`.
pub fn outer(a: &StateVector, b: &StateVector) -> LinearMap {
    assert_eq!(a.dim(), b.dim(), "outer product dimension mismatch");
    LinearMap::from_fn(a.dim(), |i, j| a.amplitudes[i] * b.amplitudes[j].conj())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

pub fn pauli(axis: Axis) -> LinearMap {
    let entries = match axis {
        Axis::X => [ZERO, ONE, ONE, ZERO],
        Axis::Y => [ZERO, -I, I, ZERO],
        Axis::Z => [ONE, ZERO, ZERO, -ONE],
    };
    let mut m = LinearMap::from_fn(2, |i, j| entries[2 * i + j]);
    m.tags = MapTags {
        unitary: true,
        hermitian: true,
        projector: false,
    };
    m
}

/// Path-1 projector `Π̂₁ = |1⟩⟨1|`.
pub fn path_one_projector() -> LinearMap {
    let mut m = LinearMap::real_diagonal(&[1.0, 0.0]);
    m.tags.projector = true;
    m
}

/// Path-2 projector `Π̂₂ = |2⟩⟨2|`.
pub fn path_two_projector() -> LinearMap {
    let mut m = LinearMap::real_diagonal(&[0.0, 1.0]);
    m.tags.projector = true;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() < tol, "{a} != {b}");
    }

    #[test]
    fn make_state_normalizes() {
        let s = make_state(&[c(1.0, 0.0), c(0.0, 0.0)], Basis::Path).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);

        let s = make_state(&[c(1.0, 0.0), c(1.0, 0.0)], Basis::Spin).unwrap();
        assert_close(s.amplitudes()[0], c(FRAC_1_SQRT_2, 0.0), 1e-15);
        assert_close(s.amplitudes()[1], c(FRAC_1_SQRT_2, 0.0), 1e-15);

        let s = make_state(&[c(2.0, 0.0), c(0.0, 1.0)], Basis::Path).unwrap();
        let r5 = 5f64.sqrt();
        assert_close(s.amplitudes()[0], c(2.0 / r5, 0.0), 1e-15);
        assert_close(s.amplitudes()[1], c(0.0, 1.0 / r5), 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < EPS);
    }

    #[test]
    fn make_state_errors() {
        assert!(matches!(
            make_state(&[c(0.0, 0.0), c(1e-13, 0.0)], Basis::Path),
            Err(LabError::ZeroVector { .. })
        ));
        assert!(matches!(
            make_state(&[c(1.0, 0.0); 3], Basis::Path),
            Err(LabError::BadDimension { .. })
        ));
        assert!(matches!(
            make_state(&[c(1.0, 0.0); 2], Basis::PathSpin),
            Err(LabError::BadDimension { .. })
        ));
    }

    #[test]
    fn tensor_product_basis_elements() {
        let s = tensor_product(&StateVector::path_one(), &StateVector::up_z()).unwrap();
        assert_eq!(s.amplitudes(), &[ONE, ZERO, ZERO, ZERO]);
        let s = tensor_product(&StateVector::path_two(), &StateVector::down_z()).unwrap();
        assert_eq!(s.amplitudes(), &[ZERO, ZERO, ZERO, ONE]);
    }

    #[test]
    fn tensor_product_with_up_x() {
        let psi = make_state(&[c(2.0, 0.0), c(1.0, 0.0)], Basis::Path).unwrap();
        let s = tensor_product(&psi, &StateVector::up_x()).unwrap();
        let r10 = 10f64.sqrt();
        for (got, want) in s.amplitudes().iter().zip([2.0, 2.0, 1.0, 1.0]) {
            assert_close(*got, c(want / r10, 0.0), 1e-15);
        }
        assert!(matches!(
            tensor_product(&StateVector::up_x(), &psi),
            Err(LabError::BadDimension { .. })
        ));
    }

    #[test]
    fn apply_examples() {
        let s = StateVector::plus();
        assert_eq!(apply(&LinearMap::identity(2), &s).unwrap(), s);
        let flipped = apply(&pauli(Axis::X), &StateVector::up_z()).unwrap();
        assert_eq!(flipped.amplitudes(), &[ZERO, ONE]);
        let rotated = apply(&rotation_z(PI), &StateVector::up_z()).unwrap();
        assert_close(rotated.amplitudes()[0], c(0.0, -1.0), 1e-15);
        assert_close(rotated.amplitudes()[1], ZERO, 1e-15);
        assert!(apply(&LinearMap::identity(4), &s).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let s = StateVector::minus();
        assert_close(inner_product(&s, &s).unwrap(), ONE, 1e-15);
        assert_close(
            inner_product(&StateVector::up_z(), &StateVector::down_z()).unwrap(),
            ZERO,
            EPS,
        );
        let r5 = 5f64.sqrt();
        let psi = make_state(&[c(2.0 / r5, 0.0), c(1.0 / r5, 0.0)], Basis::Path).unwrap();
        let overlap = inner_product(&StateVector::plus(), &psi).unwrap();
        assert_close(overlap, c(3.0 / 10f64.sqrt(), 0.0), 1e-15);
        assert!((overlap.norm_sqr() - 0.9).abs() < 1e-15);
        // conjugate-linear in the first slot
        let a = StateVector::up_x().scale(I);
        let b = StateVector::up_x();
        assert_close(inner_product(&a, &b).unwrap(), -I, 1e-15);
    }

    #[test]
    fn expectation_examples() {
        assert!((expectation(&pauli(Axis::X), &StateVector::up_x()).unwrap() - 1.0).abs() < EPS);
        let r5 = 5f64.sqrt();
        for chi in [0.0, 0.7, 2.0] {
            let psi = make_state(
                &[c(2.0 / r5, 0.0), Complex64::from_polar(1.0 / r5, chi)],
                Basis::Path,
            )
            .unwrap();
            let p1 = expectation(&path_one_projector(), &psi).unwrap();
            assert!((p1 - 0.8).abs() < EPS);
        }
        let psi = make_state(&[c(2.0, 0.0), c(1.0, 0.0)], Basis::Path).unwrap();
        assert!((expectation(&pauli(Axis::X), &psi).unwrap() - 0.8).abs() < EPS);
        let not_hermitian = LinearMap::from_rows(2, vec![ZERO, ONE, ZERO, ZERO]).unwrap();
        assert!(matches!(
            expectation(&not_hermitian, &psi),
            Err(LabError::NotHermitian { .. })
        ));
    }

    #[test]
    fn commutator_examples() {
        let p1 = path_one_projector();
        assert!(commutator(&p1, &p1).unwrap().max_abs() < EPS);
        let com = commutator(&p1, &pauli(Axis::X)).unwrap();
        let want = LinearMap::from_rows(2, vec![ZERO, ONE, -ONE, ZERO]).unwrap();
        assert!(com.max_abs_diff(&want) < EPS);
        assert!(com.max_abs_diff(&pauli(Axis::Y).scale(I)) < EPS);
        for s in [StateVector::plus(), StateVector::minus()] {
            let com = commutator(&projector(&s).unwrap(), &pauli(Axis::X)).unwrap();
            assert!(com.max_abs() < EPS);
        }
        assert!(commutator(&p1, &LinearMap::identity(4)).is_err());
    }

    #[test]
    fn rotation_z_examples() {
        assert!(rotation_z(0.0).max_abs_diff(&LinearMap::identity(2)) < EPS);
        let minus_one = LinearMap::identity(2).scale(-ONE);
        assert!(rotation_z(2.0 * PI).max_abs_diff(&minus_one) < EPS);
        let want = LinearMap::diagonal(&[
            Complex64::from_polar(1.0, -PI / 16.0),
            Complex64::from_polar(1.0, PI / 16.0),
        ]);
        assert!(rotation_z(PI / 8.0).max_abs_diff(&want) < EPS);
        // matches cos(a/2)·𝟙 − i·sin(a/2)·σz
        let a: f64 = 0.83;
        let series = &LinearMap::identity(2).scale(c((a / 2.0).cos(), 0.0))
            - &pauli(Axis::Z).scale(c(0.0, (a / 2.0).sin()));
        assert!(rotation_z(a).max_abs_diff(&series) < EPS);
        assert!(rotation_z(a).is_unitary());
    }

    #[test]
    fn projector_examples() {
        let p = projector(&StateVector::path_one()).unwrap();
        assert!(p.max_abs_diff(&path_one_projector()) < EPS);
        let half = LinearMap::from_rows(2, vec![c(0.5, 0.0); 4]).unwrap();
        let p = projector(&StateVector::plus()).unwrap();
        assert!(p.max_abs_diff(&half) < EPS);
        assert!(p.is_projector());
        assert_close(p.trace(), ONE, EPS);
        let p = projector(&StateVector::up_x()).unwrap();
        assert!(p.max_abs_diff(&half) < EPS);
        let unnormalized = StateVector::unnormalized(vec![ONE, ONE], Basis::Path).unwrap();
        assert!(matches!(
            projector(&unnormalized),
            Err(LabError::NotNormalized { .. })
        ));
    }

    #[test]
    fn pauli_properties() {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let p = pauli(axis);
            assert!(p.is_hermitian());
            assert!(p.is_unitary());
            assert_close(p.trace(), ZERO, EPS);
            assert!((&p * &p).max_abs_diff(&LinearMap::identity(2)) < EPS);
        }
        assert_eq!(pauli(Axis::X).entries(), &[ZERO, ONE, ONE, ZERO]);
        assert_eq!(pauli(Axis::Z).entries(), &[ONE, ZERO, ZERO, -ONE]);
        assert_eq!(pauli(Axis::Y).entries(), &[ZERO, -I, I, ZERO]);
    }

    #[test]
    fn kron_follows_path_spin_order() {
        let m = path_one_projector().kron(&pauli(Axis::X)).unwrap();
        let s = tensor_product(&StateVector::path_one(), &StateVector::up_z()).unwrap();
        let out = apply(&m, &s).unwrap();
        assert_eq!(out.amplitudes(), &[ZERO, ONE, ZERO, ZERO]);
    }

    #[test]
    fn rotation_group_law_many_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a: f64 = rng.random_range(-10.0..10.0);
            let b: f64 = rng.random_range(-10.0..10.0);
            let lhs = &rotation_z(a) * &rotation_z(b);
            assert!(lhs.max_abs_diff(&rotation_z(a + b)) < EPS);
        }
    }

    fn arb_c() -> impl Strategy<Value = Complex64> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| c(re, im))
    }

    fn arb_state(basis: Basis) -> impl Strategy<Value = StateVector> {
        proptest::collection::vec(arb_c(), basis.dim())
            .prop_filter_map("zero vector", move |v| StateVector::new(v, basis).ok())
    }

    fn arb_hermitian() -> impl Strategy<Value = LinearMap> {
        (-1.0f64..1.0, -1.0f64..1.0, arb_c()).prop_map(|(d0, d1, off)| {
            LinearMap::from_rows(2, vec![c(d0, 0.0), off, off.conj(), c(d1, 0.0)])
                .unwrap()
                .into_hermitian()
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn unitaries_preserve_norm(s in arb_state(Basis::Spin), angle in -20.0f64..20.0) {
            for u in [rotation_z(angle), pauli(Axis::X), pauli(Axis::Y)] {
                let out = apply(&u, &s).unwrap();
                prop_assert!((out.norm() - 1.0).abs() < EPS);
            }
        }

        #[test]
        fn tensor_is_linear_in_first_factor(
            a in arb_state(Basis::Path),
            b in arb_state(Basis::Spin),
            k in arb_c(),
        ) {
            let lhs = tensor_product(&a.scale(k), &b).unwrap();
            let rhs = tensor_product(&a, &b).unwrap().scale(k);
            prop_assert!(lhs.max_abs_diff(&rhs) < EPS);
        }

        #[test]
        fn commutator_is_antisymmetric(a in arb_hermitian(), b in arb_hermitian()) {
            let ab = commutator(&a, &b).unwrap();
            let ba = commutator(&b, &a).unwrap();
            prop_assert!(ab.max_abs_diff(&ba.scale(-ONE)) < EPS);
            // anti-Hermitian
            prop_assert!(ab.max_abs_diff(&ab.adjoint().scale(-ONE)) < EPS);
        }
    }
}

//! Rank-4 invariant tensors as quantum tetrahedra.
//!
//! The invariant subspace of four qubits is two dimensional and is spanned
//! by the logical basis `|0_L⟩`, `|1_L⟩`. A point `(θ, φ)` on its Bloch
//! sphere is the tensor `cos(θ/2)|0_L⟩ + e^{iφ} sin(θ/2)|1_L⟩`.
//!
//! Face areas are measured in units of `8πℓ_P²`; face `k` carries the flux
//! operator `J^(k)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spin::{angular_momentum, Axis, DenseOperator, HalfInt, SpinError, StateVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TetraError {
    #[error("Bloch point out of range: theta={theta} (want [0, π]), phi={phi} (want [0, 2π))")]
    InvalidPoint { theta: f64, phi: f64 },
    #[error("invalid dihedral pair ({k}, {m}): faces must be distinct and in 1..=4")]
    InvalidPair { k: usize, m: usize },
    #[error("area spectrum only implemented for spin 1/2, got {0}")]
    UnsupportedSpin(HalfInt),
    #[error(transparent)]
    Spin(#[from] SpinError),
}

/// Which cosine a dihedral operator measures.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DihedralConvention {
    /// Cosine of the angle between outward face normals, `(4/3) J^(k)·J^(m)`.
    Normals,
    /// Cosine of the interior dihedral angle, the negative of [`Normals`](Self::Normals).
    #[default]
    Interior,
}

impl DihedralConvention {
    pub fn sign(self) -> f64 {
        match self {
            DihedralConvention::Normals => 1.0,
            DihedralConvention::Interior => -1.0,
        }
    }
}

impl fmt::Display for DihedralConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DihedralConvention::Normals => "normals",
            DihedralConvention::Interior => "interior",
        })
    }
}

impl std::str::FromStr for DihedralConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "normals" => Ok(DihedralConvention::Normals),
            "interior" => Ok(DihedralConvention::Interior),
            other => Err(format!("unknown convention {other:?} (expected interior or normals)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    theta: f64,
    phi: f64,
}

impl BlochPoint {
    pub fn new(theta: f64, phi: f64) -> Result<Self, TetraError> {
        let ok = (0.0..=PI).contains(&theta) && (0.0..2.0 * PI).contains(&phi);
        if !ok {
            return Err(TetraError::InvalidPoint { theta, phi });
        }
        Ok(Self { theta, phi })
    }

    /// Wraps `phi` into `[0, 2π)`; `theta` must still lie in `[0, π]`.
    pub fn wrapped(theta: f64, phi: f64) -> Result<Self, TetraError> {
        let mut phi = phi.rem_euclid(2.0 * PI);
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Self::new(theta, phi)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `(cos(θ/2), e^{iφ} sin(θ/2))`.
    pub fn coefficients(&self) -> [C64; 2] {
        let (s, c) = (self.theta / 2.0).sin_cos();
        [C64::new(c, 0.0), C64::from_polar(s, self.phi)]
    }
}

/// Face pair `(k, m)` of a quantum tetrahedron, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DihedralPair {
    k: usize,
    m: usize,
}

impl DihedralPair {
    pub const P12: DihedralPair = DihedralPair { k: 1, m: 2 };
    pub const P13: DihedralPair = DihedralPair { k: 1, m: 3 };
    pub const P14: DihedralPair = DihedralPair { k: 1, m: 4 };
    pub const P23: DihedralPair = DihedralPair { k: 2, m: 3 };
    pub const P24: DihedralPair = DihedralPair { k: 2, m: 4 };
    pub const P34: DihedralPair = DihedralPair { k: 3, m: 4 };
    pub const ALL: [DihedralPair; 6] =
        [Self::P12, Self::P13, Self::P14, Self::P23, Self::P24, Self::P34];
    /// The three pairs sharing face 1; the others follow by closure.
    pub const INDEPENDENT: [DihedralPair; 3] = [Self::P12, Self::P13, Self::P14];

    pub fn new(k: usize, m: usize) -> Result<Self, TetraError> {
        if k == m || !(1..=4).contains(&k) || !(1..=4).contains(&m) {
            return Err(TetraError::InvalidPair { k, m });
        }
        Ok(Self { k: k.min(m), m: k.max(m) })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The pair made of the two remaining faces.
    pub fn complement(&self) -> DihedralPair {
        let mut rest = (1..=4).filter(|f| *f != self.k && *f != self.m);
        let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
        DihedralPair { k: a, m: b }
    }

    fn index(&self) -> usize {
        Self::ALL.iter().position(|p| p == self).expect("pairs are normalised")
    }
}

impl fmt::Display for DihedralPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.k, self.m)
    }
}

/// `|0_L⟩ = ½(|01⟩−|10⟩)(|01⟩−|10⟩)` and
/// `|1_L⟩ = (1/√3)[|1100⟩+|0011⟩ − ½(|01⟩+|10⟩)(|01⟩+|10⟩)]`.
pub fn logical_basis() -> (StateVector, StateVector) {
    static BASIS: OnceLock<(StateVector, StateVector)> = OnceLock::new();
    BASIS
        .get_or_init(|| {
            let mut zero = [0.0; 16];
            let mut one = [0.0; 16];
            let idx = |bits: &str| usize::from_str_radix(bits, 2).unwrap();
            for (bits, sign) in [("0101", 1.0), ("0110", -1.0), ("1001", -1.0), ("1010", 1.0)] {
                zero[idx(bits)] = 0.5 * sign;
                one[idx(bits)] = -0.5 / 3f64.sqrt();
            }
            one[idx("1100")] = 1.0 / 3f64.sqrt();
            one[idx("0011")] = 1.0 / 3f64.sqrt();
            (
                StateVector::from_real(4, &zero).unwrap(),
                StateVector::from_real(4, &one).unwrap(),
            )
        })
        .clone()
}

/// A normalized rank-4 invariant tensor labelled by its Bloch point.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantTensor {
    point: BlochPoint,
    embedded: StateVector,
}

impl InvariantTensor {
    pub fn point(&self) -> BlochPoint {
        self.point
    }

    pub fn embedded(&self) -> &StateVector {
        &self.embedded
    }

    pub fn coefficients(&self) -> [C64; 2] {
        self.point.coefficients()
    }
}

/// `cos(θ/2)|0_L⟩ + e^{iφ} sin(θ/2)|1_L⟩`, with no extra global phase.
pub fn bloch_state(point: BlochPoint) -> InvariantTensor {
    let (zero, one) = logical_basis();
    let [a, b] = point.coefficients();
    InvariantTensor { point, embedded: zero.combine(a, &one, b) }
}

/// Sharp area of a face of spin `j`, in units of `8πℓ_P²`.
pub fn area_eigenvalue(spin: HalfInt) -> Result<f64, TetraError> {
    if spin != HalfInt::HALF {
        return Err(TetraError::UnsupportedSpin(spin));
    }
    let j = spin.value();
    Ok((j * (j + 1.0)).sqrt())
}

/// `J^(k)·J^(m)` on four qubits.
pub fn flux_dot(k: usize, m: usize) -> Result<DenseOperator, SpinError> {
    let mut out = DenseOperator::zeros(4);
    for axis in Axis::ALL {
        let a = angular_momentum(axis, k, 4)?;
        let b = angular_momentum(axis, m, 4)?;
        out = &out + &(&a * &b);
    }
    DenseOperator::new(4, out.into_entries(), true)
}

/// `√(E^(k)·E^(k))` for face `k`, in units of `8πℓ_P²`.
pub fn area_operator(k: usize) -> Result<DenseOperator, TetraError> {
    let squared = flux_dot(k, k)?;
    Ok(squared.map_spectrum(|x| x.max(0.0).sqrt()))
}

fn interior_operators() -> &'static [DenseOperator; 6] {
    static OPS: OnceLock<[DenseOperator; 6]> = OnceLock::new();
    OPS.get_or_init(|| {
        DihedralPair::ALL.map(|p| {
            flux_dot(p.k, p.m).expect("valid pair").scale_real(-4.0 / 3.0)
        })
    })
}

/// Dihedral cosine operator for `pair`.
///
/// `Normals` gives `(4/3) J^(k)·J^(m)`; `Interior` gives its negative.
pub fn dihedral_operator(pair: DihedralPair, convention: DihedralConvention) -> DenseOperator {
    let interior = &interior_operators()[pair.index()];
    match convention {
        DihedralConvention::Interior => interior.clone(),
        DihedralConvention::Normals => interior.scale_real(-1.0),
    }
}

fn real_expectation(op: &DenseOperator, state: &StateVector) -> f64 {
    op.expectation(state).expect("four-qubit operands").re
}

/// `⟨ψ|cos θ_km|ψ⟩` (interior convention) for `ψ = bloch_state(point)`.
pub fn dihedral_expectation(point: BlochPoint, pair: DihedralPair) -> f64 {
    let psi = bloch_state(point);
    real_expectation(&interior_operators()[pair.index()], psi.embedded())
}

/// Interior-convention expectation in an arbitrary four-qubit state.
pub fn dihedral_expectation_in(state: &StateVector, pair: DihedralPair) -> Result<f64, SpinError> {
    Ok(interior_operators()[pair.index()].expectation(state)?.re)
}

/// Variance `⟨M²⟩ − ⟨M⟩²` of the interior dihedral operator in `state`.
pub fn dihedral_variance_in(state: &StateVector, pair: DihedralPair) -> Result<f64, SpinError> {
    let op = &interior_operators()[pair.index()];
    let image = op.apply(state)?;
    let mean = state.inner(&image).re;
    Ok(image.norm_sqr() - mean * mean)
}

/// Analytic mean values on the Bloch sphere.
///
/// `⟨cos θ12⟩ = cos²(θ/2) − ⅓ sin²(θ/2)` and
/// `⟨cos θ13⟩ = ⅔ sin²(θ/2) + (2√3/3) cos(θ/2) sin(θ/2) cos φ`;
/// `⟨cos θ14⟩` flips the sign of the interference term, and the opposite
/// pairs repeat these values.
pub fn dihedral_closed_form(point: BlochPoint, pair: DihedralPair) -> f64 {
    let (s, c) = (point.theta / 2.0).sin_cos();
    let interference = 2.0 * 3f64.sqrt() / 3.0 * c * s * point.phi.cos();
    let pair = if pair.k == 1 { pair } else { pair.complement() };
    match pair.m {
        2 => c * c - s * s / 3.0,
        3 => 2.0 / 3.0 * s * s + interference,
        _ => 2.0 / 3.0 * s * s - interference,
    }
}

/// Total fluctuation `Δ = 2/3 + (8/3) cos²(θ/2) sin²(θ/2) (1 − cos²φ)`.
pub fn fluctuation(point: BlochPoint) -> f64 {
    let (s, c) = (point.theta / 2.0).sin_cos();
    let cos_phi = point.phi.cos();
    2.0 / 3.0 + 8.0 / 3.0 * c * c * s * s * (1.0 - cos_phi * cos_phi)
}

/// `Δ12 + Δ13 + Δ14` evaluated from operator variances.
pub fn fluctuation_from_operators(point: BlochPoint) -> f64 {
    fluctuation_in(bloch_state(point).embedded()).expect("four-qubit state")
}

pub fn fluctuation_in(state: &StateVector) -> Result<f64, SpinError> {
    DihedralPair::INDEPENDENT
        .iter()
        .map(|&p| dihedral_variance_in(state, p))
        .sum()
}

/// Bloch points whose interior expectations `⟨cos θ12⟩`, `⟨cos θ13⟩` equal
/// the given targets.
///
/// When the interference term vanishes identically (poles) only `φ = 0` is
/// returned.
pub fn points_with_expectations(cos12: f64, cos13: f64) -> Vec<BlochPoint> {
    const TOL: f64 = 1e-12;
    // cos12 = c² − (1 − c²)/3  ⇒  c² = (3 cos12 + 1) / 4
    let c2 = (3.0 * cos12 + 1.0) / 4.0;
    if !(-TOL..=1.0 + TOL).contains(&c2) {
        return Vec::new();
    }
    let c2 = c2.clamp(0.0, 1.0);
    let theta = 2.0 * c2.sqrt().acos();
    let (s, c) = (theta / 2.0).sin_cos();
    let residual = cos13 - 2.0 / 3.0 * s * s;
    let amplitude = 2.0 * 3f64.sqrt() / 3.0 * c * s;
    if amplitude.abs() < TOL {
        return if residual.abs() < TOL {
            BlochPoint::new(theta, 0.0).into_iter().collect()
        } else {
            Vec::new()
        };
    }
    let cos_phi = residual / amplitude;
    if cos_phi.abs() > 1.0 + TOL {
        return Vec::new();
    }
    let phi = cos_phi.clamp(-1.0, 1.0).acos();
    let mut out = vec![BlochPoint::new(theta, phi).expect("acos lies in [0, π]")];
    if phi > TOL && phi < PI - TOL {
        out.push(BlochPoint::new(theta, 2.0 * PI - phi).expect("in range"));
    }
    out
}

/// Points where all three independent interior expectations equal 1/3.
pub fn regular_points() -> Vec<BlochPoint> {
    let mut pts = points_with_expectations(1.0 / 3.0, 1.0 / 3.0);
    // snap the analytic roots θ = π/2, φ ∈ {π/2, 3π/2}
    for p in &mut pts {
        if (p.theta - FRAC_PI_2).abs() < 1e-12 {
            p.theta = FRAC_PI_2;
        }
        for exact in [FRAC_PI_2, 3.0 * FRAC_PI_2] {
            if (p.phi - exact).abs() < 1e-12 {
                p.phi = exact;
            }
        }
    }
    pts
}

use std::fmt;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::{DensityMatrix, TomographyError, DIM, QUBITS};
use crate::spin::DenseOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Phase picked up by `|bit⟩`: `P|b⟩ = phase · |b ⊕ flips⟩`.
    fn phase(self, bit: usize) -> C64 {
        match (self, bit) {
            (Pauli::I | Pauli::X, _) => C64::new(1.0, 0.0),
            (Pauli::Y, 0) => C64::new(0.0, 1.0),
            (Pauli::Y, _) => C64::new(0.0, -1.0),
            (Pauli::Z, 0) => C64::new(1.0, 0.0),
            (Pauli::Z, _) => C64::new(-1.0, 0.0),
        }
    }
}

/// Tensor product of four single-qubit Paulis, qubit 1 first.
///
/// Index is `Σ p_k 4^(4-k)` with I=0, X=1, Y=2, Z=3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString(pub [Pauli; QUBITS]);

pub const PAULI_STRINGS: usize = 256;

impl PauliString {
    pub fn from_index(index: usize) -> Self {
        assert!(index < PAULI_STRINGS, "pauli index {index} out of range");
        let mut ops = [Pauli::I; QUBITS];
        for (k, op) in ops.iter_mut().enumerate() {
            *op = Pauli::ALL[(index >> (2 * (QUBITS - 1 - k))) & 3];
        }
        Self(ops)
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, p| acc * 4 + *p as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|p| *p == Pauli::I)
    }

    fn flip_mask(&self) -> usize {
        self.0.iter().enumerate().filter(|(_, p)| p.flips()).map(|(k, _)| 1 << (QUBITS - 1 - k)).sum()
    }

    fn phase(&self, col: usize) -> C64 {
        self.0.iter().enumerate().map(|(k, p)| p.phase((col >> (QUBITS - 1 - k)) & 1)).product()
    }

    pub fn matrix(&self) -> DenseOperator {
        let mask = self.flip_mask();
        let mut m = DMatrix::zeros(DIM, DIM);
        for col in 0..DIM {
            m[(col ^ mask, col)] = self.phase(col);
        }
        DenseOperator::from_parts(QUBITS, m, true)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.0 {
            write!(f, "{p:?}")?;
        }
        Ok(())
    }
}

fn pauli_matrices() -> &'static [DenseOperator] {
    static CELL: OnceLock<Vec<DenseOperator>> = OnceLock::new();
    CELL.get_or_init(|| (0..PAULI_STRINGS).map(|i| PauliString::from_index(i).matrix()).collect())
}

/// `tr(ρ P)` for all 256 strings, indexed as in [`PauliString::index`].
pub fn pauli_expectations(rho: &DensityMatrix) -> Vec<f64> {
    let r = rho.entries();
    (0..PAULI_STRINGS)
        .map(|i| {
            let p = PauliString::from_index(i);
            let mask = p.flip_mask();
            (0..DIM).map(|c| r[(c, c ^ mask)] * p.phase(c)).sum::<C64>().re
        })
        .collect()
}

fn weighted_sum(expectations: &[f64], weight: f64) -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::identity(DIM, DIM) / C64::new(DIM as f64, 0.0);
    for (i, op) in pauli_matrices().iter().enumerate().skip(1) {
        m += op.entries() * C64::new(weight * expectations[i], 0.0);
    }
    m
}

fn check_len(expectations: &[f64]) -> Result<(), TomographyError> {
    if expectations.len() != PAULI_STRINGS {
        return Err(TomographyError::InvalidParams(format!(
            "expected {PAULI_STRINGS} pauli expectations, got {}",
            expectations.len()
        )));
    }
    Ok(())
}

/// `ρ = (1/16) Σ_P ⟨P⟩ P` with the identity term fixed to unit trace.
pub fn state_from_pauli(expectations: &[f64]) -> Result<DensityMatrix, TomographyError> {
    check_len(expectations)?;
    DensityMatrix::new(weighted_sum(expectations, 1.0 / DIM as f64))
}

/// Recovers the deviation part of a pseudo-pure signal with polarization ε,
/// rescaled to a unit-trace state.
pub fn deviation_from_pauli(expectations: &[f64], epsilon: f64) -> Result<DensityMatrix, TomographyError> {
    check_len(expectations)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(TomographyError::Polarization { epsilon, min: 0.0, max: 1.0 });
    }
    DensityMatrix::new(weighted_sum(expectations, 1.0 / (DIM as f64 * epsilon)))
}

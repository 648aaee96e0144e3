use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::{TomographyError, DIM, QUBITS};
use crate::spin::{DenseOperator, StateVector};

/// A 16×16 Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
}

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const EIGEN_FLOOR: f64 = -1e-10;

impl DensityMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self, TomographyError> {
        if entries.nrows() != DIM || entries.ncols() != DIM {
            return Err(TomographyError::Shape { rows: entries.nrows(), cols: entries.ncols() });
        }
        let dev = entries.iter().zip(entries.adjoint().iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if dev >= HERMITIAN_TOL {
            return Err(TomographyError::NotHermitian(dev));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() >= TRACE_TOL || trace.im.abs() >= TRACE_TOL {
            return Err(TomographyError::Trace(trace.re));
        }
        let rho = Self { entries };
        let lowest = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if lowest < EIGEN_FLOOR {
            return Err(TomographyError::NotPositive(lowest));
        }
        Ok(rho)
    }

    #[cfg(test)]
    pub(crate) fn from_unchecked(entries: DMatrix<C64>) -> Self {
        Self { entries }
    }

    pub fn maximally_mixed() -> Self {
        Self { entries: DMatrix::identity(DIM, DIM) / C64::new(DIM as f64, 0.0) }
    }

    /// `|ψ⟩⟨ψ|` for a normalized four-qubit state.
    pub fn from_pure(state: &StateVector) -> Result<Self, TomographyError> {
        if state.n_qubits() != QUBITS {
            return Err(TomographyError::Shape { rows: state.dim(), cols: state.dim() });
        }
        let a = state.amplitudes();
        Self::new(DMatrix::from_fn(DIM, DIM, |r, c| a[r] * a[c].conj()))
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    /// `tr(ρ M)`, real part.
    pub fn expectation(&self, op: &DenseOperator) -> f64 {
        (&self.entries * op.entries()).trace().re
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, unitary: &DenseOperator) -> Self {
        let u = unitary.entries();
        Self { entries: u * &self.entries * u.adjoint() }
    }

    /// `(1 − p) ρ + p I/16`.
    pub fn depolarized(&self, p: f64) -> Self {
        let mixed = DMatrix::<C64>::identity(DIM, DIM) * C64::new(p / DIM as f64, 0.0);
        Self { entries: &self.entries * C64::new(1.0 - p, 0.0) + mixed }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.entries.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Dominant eigenvector of `ρ`, the pure state maximising `⟨ψ|ρ|ψ⟩`.
///
/// The global phase makes the largest-magnitude component real positive.
pub fn ml_purify(rho: &DensityMatrix) -> Result<StateVector, TomographyError> {
    let eig = rho.entries.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..DIM).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let gap = eig.eigenvalues[order[0]] - eig.eigenvalues[order[1]];
    if gap < 1e-10 {
        return Err(TomographyError::DegenerateTop { gap });
    }
    let v = eig.eigenvectors.column(order[0]);
    let mut pivot = 0;
    for i in 1..DIM {
        if v[i].norm() > v[pivot].norm() {
            pivot = i;
        }
    }
    let phase = v[pivot].conj() / v[pivot].norm();
    let mut amplitudes: Vec<C64> = v.iter().map(|z| z * phase).collect();
    amplitudes[pivot] = C64::new(v[pivot].norm(), 0.0);
    let state = StateVector::new(QUBITS, amplitudes)?;
    Ok(state.normalized()?)
}

/// `tr(ab) / √(tr(a²) tr(b²))`.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, TomographyError> {
    let pa = a.purity();
    let pb = b.purity();
    if !(pa > 0.0 && pb > 0.0) {
        return Err(TomographyError::ZeroPurity);
    }
    Ok((a.entries() * b.entries()).trace().re / (pa * pb).sqrt())
}

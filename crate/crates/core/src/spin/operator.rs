use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, Dyn, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::{SpinError, StateVector};

const HERMITIAN_TOL: f64 = 1e-12;

/// A `2^n × 2^n` complex matrix acting on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    n_qubits: usize,
    entries: DMatrix<C64>,
    hermitian: bool,
}

impl DenseOperator {
    /// Wraps a matrix. When `hermitian` is set the matrix is checked against
    /// its adjoint.
    pub fn new(n_qubits: usize, entries: DMatrix<C64>, hermitian: bool) -> Result<Self, SpinError> {
        let dim = 1usize << n_qubits;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(SpinError::LengthMismatch { len: entries.nrows(), expected: dim });
        }
        let op = Self { n_qubits, entries, hermitian };
        if hermitian {
            let deviation = op.hermiticity_defect();
            if deviation >= HERMITIAN_TOL {
                return Err(SpinError::NotHermitian { deviation });
            }
        }
        Ok(op)
    }

    pub(crate) fn from_parts(n_qubits: usize, entries: DMatrix<C64>, hermitian: bool) -> Self {
        Self { n_qubits, entries, hermitian }
    }

    pub fn identity(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        Self::from_parts(n_qubits, DMatrix::identity(dim, dim), true)
    }

    pub fn zeros(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        Self::from_parts(n_qubits, DMatrix::zeros(dim, dim), true)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    /// Largest entrywise modulus of `M - M†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.entries.adjoint();
        max_abs(&(&self.entries - adj))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.n_qubits, self.entries.adjoint(), self.hermitian)
    }

    pub fn scale(&self, factor: C64) -> Self {
        let hermitian = self.hermitian && factor.im == 0.0;
        Self::from_parts(self.n_qubits, &self.entries * factor, hermitian)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &DenseOperator) -> Self {
        let ab = &self.entries * &other.entries;
        let ba = &other.entries * &self.entries;
        Self::from_parts(self.n_qubits, ab - ba, false)
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector, SpinError> {
        if state.n_qubits() != self.n_qubits {
            return Err(SpinError::QubitCountMismatch { op: self.n_qubits, state: state.n_qubits() });
        }
        let dim = self.dim();
        let amps = state.amplitudes();
        let out = (0..dim)
            .map(|r| (0..dim).map(|c| self.entries[(r, c)] * amps[c]).sum())
            .collect();
        StateVector::new(self.n_qubits, out)
    }

    /// `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<C64, SpinError> {
        Ok(state.inner(&self.apply(state)?))
    }

    /// Matrix of `⟨b_i|M|b_j⟩` over the given vectors.
    pub fn compress(&self, basis: &[&StateVector]) -> Result<DMatrix<C64>, SpinError> {
        let images = basis.iter().map(|b| self.apply(b)).collect::<Result<Vec<_>, _>>()?;
        Ok(DMatrix::from_fn(basis.len(), basis.len(), |i, j| basis[i].inner(&images[j])))
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        max_abs(&(&self.entries - &other.entries))
    }

    /// Applies `f` to the spectrum of a Hermitian operator:
    /// `Σ f(λ_i) |v_i⟩⟨v_i|`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> DenseOperator {
        let eig = self.eigh();
        let dim = self.dim();
        let mut out = DMatrix::<C64>::zeros(dim, dim);
        for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(i);
            out += (&v * v.adjoint()) * C64::new(f(lambda), 0.0);
        }
        DenseOperator::from_parts(self.n_qubits, out, true)
    }

    /// Hermitian eigendecomposition (eigenvalues unsorted).
    pub fn eigh(&self) -> SymmetricEigen<C64, Dyn> {
        SymmetricEigen::new(self.entries.clone())
    }

    /// Diagonal of the matrix; meaningful for operators known to be diagonal.
    pub fn diagonal(&self) -> Vec<C64> {
        self.entries.diagonal().iter().copied().collect()
    }

    /// Largest modulus of an off-diagonal entry.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                if r != c {
                    worst = worst.max(self.entries[(r, c)].norm());
                }
            }
        }
        worst
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.n_qubits, rhs.n_qubits, "operator size mismatch");
        DenseOperator::from_parts(
            self.n_qubits,
            &self.entries + &rhs.entries,
            self.hermitian && rhs.hermitian,
        )
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.n_qubits, rhs.n_qubits, "operator size mismatch");
        DenseOperator::from_parts(
            self.n_qubits,
            &self.entries - &rhs.entries,
            self.hermitian && rhs.hermitian,
        )
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    /// The product of two Hermitian operators is only Hermitian when they
    /// commute, so the flag is dropped.
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.n_qubits, rhs.n_qubits, "operator size mismatch");
        DenseOperator::from_parts(self.n_qubits, &self.entries * &rhs.entries, false)
    }
}

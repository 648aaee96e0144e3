use num_complex::Complex64 as C64;

use super::SpinError;

/// Amplitudes over the `2^n` computational basis states of `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self, SpinError> {
        let expected = 1usize << n_qubits;
        if n_qubits == 0 || amplitudes.len() != expected {
            return Err(SpinError::LengthMismatch { len: amplitudes.len(), expected });
        }
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn from_real(n_qubits: usize, amplitudes: &[f64]) -> Result<Self, SpinError> {
        Self::new(n_qubits, amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(n_qubits: usize) -> Self {
        Self { n_qubits, amplitudes: vec![C64::new(0.0, 0.0); 1 << n_qubits] }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut s = Self::zeros(n_qubits);
        s.amplitudes[index] = C64::new(1.0, 0.0);
        s
    }

    /// Basis state from a bit string, qubit 1 first: `"0110"`.
    ///
    /// Panics on characters other than `0`/`1`.
    pub fn from_bits(bits: &str) -> Self {
        let n = bits.len();
        let index = bits.chars().fold(0usize, |acc, c| match c {
            '0' => acc << 1,
            '1' => (acc << 1) | 1,
            other => panic!("invalid bit character {other:?}"),
        });
        Self::basis(n, index)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self, SpinError> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(SpinError::ZeroNorm);
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() < tol
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        debug_assert_eq!(self.n_qubits, other.n_qubits);
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: C64, other: &StateVector, b: C64) -> Self {
        debug_assert_eq!(self.n_qubits, other.n_qubits);
        Self {
            n_qubits: self.n_qubits,
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    /// `self ⊗ other`, with `self` occupying the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Self { n_qubits: self.n_qubits + other.n_qubits, amplitudes }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

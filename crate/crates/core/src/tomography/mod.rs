//! Desk-scale rehearsal of the NMR pipeline: thermal and pseudo-pure
//! states, the weak-coupling Hamiltonian, Pauli tomography, purification
//! to the dominant eigenvector, and Hilbert-Schmidt fidelity.

mod density;
mod experiment;
mod nmr;
mod pauli;

use thiserror::Error;

use crate::amplitude::AmplitudeError;
use crate::spin::SpinError;

pub use density::{fidelity, ml_purify, DensityMatrix};
pub use experiment::{
    simulate_experiment, AmplitudeComparison, DihedralTriple, ExperimentReport, ExperimentSetup,
    NoiseSpec, Target, TargetReport,
};
pub use nmr::{diagonal_propagator, internal_hamiltonian, pseudo_pure_state, thermal_state, NmrParams};
pub use pauli::{
    deviation_from_pauli, pauli_expectations, state_from_pauli, Pauli, PauliString, PAULI_STRINGS,
};

pub const QUBITS: usize = 4;
pub const DIM: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TomographyError {
    #[error("matrix is {rows}x{cols}, expected 16x16")]
    Shape { rows: usize, cols: usize },
    #[error("density matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("density matrix trace is {0}, expected 1")]
    Trace(f64),
    #[error("density matrix has negative eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("polarization {epsilon} outside the positivity range [{min}, {max}]")]
    Polarization { epsilon: f64, min: f64, max: f64 },
    #[error("dominant eigenvalue is degenerate (gap {gap:e} below 1e-10)")]
    DegenerateTop { gap: f64 },
    #[error("fidelity undefined for a zero-purity argument")]
    ZeroPurity,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Amplitude(#[from] AmplitudeError),
}

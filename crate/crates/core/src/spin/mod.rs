//! Operator algebra on registers of spin-1/2 systems.
//!
//! Basis convention: qubit 1 is the most significant bit of the
//! computational-basis index, and `|0⟩` is the `m = +1/2` state
//! (`σ_z|0⟩ = +|0⟩`). Units have ħ = 1, so `J = σ/2`.

mod algebra;
mod cg;
mod half;
mod operator;
mod state;

pub use algebra::{
    angular_momentum, casimir, closure_defect, invariant_projector, pauli_embedded,
    total_angular_momentum, Axis, MAX_OPERATOR_QUBITS,
};
pub use cg::{cg_coefficient, CouplingLabel};
pub use half::HalfInt;
pub use operator::DenseOperator;
pub use state::StateVector;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("qubit index {k} out of range for a {n}-qubit register")]
    QubitOutOfRange { k: usize, n: usize },
    #[error("unsupported register size {n} (allowed {min}..={max})")]
    RegisterSize { n: usize, min: usize, max: usize },
    #[error("amplitude vector has length {len}, expected {expected}")]
    LengthMismatch { len: usize, expected: usize },
    #[error("operator acts on {op} qubits but the state has {state}")]
    QubitCountMismatch { op: usize, state: usize },
    #[error("matrix flagged Hermitian deviates from its adjoint by {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("triangle condition violated: |{j1} - {j2}| <= {j} <= {j1} + {j2} fails")]
    Triangle { j1: HalfInt, j2: HalfInt, j: HalfInt },
    #[error("magnetic number {m} invalid for spin {j}")]
    MagneticNumber { j: HalfInt, m: HalfInt },
    #[error("cannot normalize a zero vector")]
    ZeroNorm,
}

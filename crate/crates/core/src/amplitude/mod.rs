//! Vertex amplitude of five rank-4 invariant tensors glued along the ten
//! links of the complete graph K5.
//!
//! Every link carries the singlet `|ε⟩ = (|01⟩ − |10⟩)/√2`, its first factor
//! attached to the link's first endpoint. The amplitude is
//! `⊗_l ⟨ε_l| ⊗_n |i_n⟩`. Three routes compute it:
//!
//! * [`vertex_amplitude`]: node-by-node contraction, never holding more than
//!   one node tensor plus the open link indices;
//! * [`vertex_amplitude_bruteforce`]: the literal 20-qubit product state with
//!   ten singlet projections, kept as the reference oracle;
//! * [`BasisTable`]: the 32 amplitudes of logical basis strings, contracted
//!   multilinearly with the Bloch coefficients.

mod contract;
mod graph;
pub mod reference;
mod sweep;
mod table;

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::spin::{SpinError, StateVector};
use crate::tetrahedron::{InvariantTensor, TetraError};

pub use contract::{vertex_amplitude, vertex_amplitude_bruteforce, vertex_amplitude_bruteforce_with};
pub use graph::{canonical_k5, Endpoint, Link, SlotConvention, SpinNetworkGraph};
pub use sweep::{amplitude_sweep, sweep_csv, theta_grid, phi_grid, SweepCell};
pub use table::{basis_amplitude_table, basis_amplitude_table_with, BasisTable};

pub const NODES: usize = 5;
pub const SLOTS: usize = 4;
pub const LINKS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AmplitudeError {
    #[error("expected {expected} node states, got {got}")]
    NodeCount { expected: usize, got: usize },
    #[error("node {node} state has {qubits} qubits, expected 4")]
    NodeQubits { node: usize, qubits: usize },
    #[error("malformed spin network: {0}")]
    MalformedGraph(String),
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error(transparent)]
    Tetra(#[from] TetraError),
    #[error(transparent)]
    Spin(#[from] SpinError),
}

/// A complex amplitude with its polar form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AmplitudeResult {
    pub value: C64,
    pub magnitude: f64,
    /// `arg(value)` in `(−π, π]`.
    pub phase: f64,
}

impl AmplitudeResult {
    pub fn from_value(value: C64) -> Self {
        let mut phase = value.im.atan2(value.re);
        if phase <= -PI {
            phase = PI;
        }
        Self { value, magnitude: value.norm(), phase }
    }
}

/// `(|01⟩ − |10⟩)/√2`.
pub fn singlet() -> StateVector {
    let h = 0.5f64.sqrt();
    StateVector::from_real(2, &[0.0, h, -h, 0.0]).expect("two-qubit vector")
}

/// The embedded 16-component vectors of a set of invariant tensors.
pub fn embedded_states(tensors: &[InvariantTensor]) -> Vec<StateVector> {
    tensors.iter().map(|t| t.embedded().clone()).collect()
}

fn check_nodes(nodes: &[StateVector]) -> Result<(), AmplitudeError> {
    if nodes.len() != NODES {
        return Err(AmplitudeError::NodeCount { expected: NODES, got: nodes.len() });
    }
    for (node, s) in nodes.iter().enumerate() {
        if s.n_qubits() != SLOTS {
            return Err(AmplitudeError::NodeQubits { node, qubits: s.n_qubits() });
        }
    }
    Ok(())
}

/// `⟨x y|ε⟩` for singlet factor bits `x` (first endpoint) and `y` (second).
#[inline]
fn epsilon(first: usize, second: usize) -> f64 {
    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;
    match (first, second) {
        (0, 1) => H,
        (1, 0) => -H,
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singlet_components() {
        let s = singlet();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!((s.amplitude(0b10).re + 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(s.inner(&StateVector::from_bits("00")).norm(), 0.0);
    }

    #[test]
    fn phase_range() {
        let r = AmplitudeResult::from_value(C64::new(-1.0, -0.0));
        assert_eq!(r.phase, PI);
        assert_eq!(r.magnitude, 1.0);
    }
}

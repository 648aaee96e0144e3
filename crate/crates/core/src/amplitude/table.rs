use num_complex::Complex64 as C64;
use serde::Serialize;

use super::contract::contract_sequential;
use super::{AmplitudeResult, SpinNetworkGraph, NODES};
use crate::exec::Execution;
use crate::spin::StateVector;
use crate::tetrahedron::{logical_basis, InvariantTensor};

/// Amplitudes `A(b1, …, b5)` for every logical basis string.
///
/// Entry index `b` has node 1's logical bit as its most significant bit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisTable {
    entries: [C64; 32],
}

impl BasisTable {
    pub fn entries(&self) -> &[C64; 32] {
        &self.entries
    }

    pub fn get(&self, bits: [usize; NODES]) -> C64 {
        self.entries[bits.iter().fold(0, |acc, b| (acc << 1) | b)]
    }

    /// `Σ_b A(b) Π_n coeffs[n][b_n]`.
    pub fn contract(&self, coeffs: &[[C64; 2]; NODES]) -> C64 {
        let mut total = C64::new(0.0, 0.0);
        for (index, entry) in self.entries.iter().enumerate() {
            let mut w = *entry;
            for (n, c) in coeffs.iter().enumerate() {
                w *= c[(index >> (NODES - 1 - n)) & 1];
            }
            total += w;
        }
        total
    }

    pub fn amplitude(&self, tensors: &[InvariantTensor; NODES]) -> AmplitudeResult {
        AmplitudeResult::from_value(self.contract(&tensors.clone().map(|t| t.coefficients())))
    }

    /// The linear functional `i5 ↦ A(i1, …, i4, i5)` in the logical basis.
    pub fn last_node_functional(&self, fixed: &[[C64; 2]; NODES - 1]) -> [C64; 2] {
        [0, 1].map(|b5| {
            let mut coeffs = [[C64::new(0.0, 0.0); 2]; NODES];
            coeffs[..NODES - 1].copy_from_slice(fixed);
            coeffs[NODES - 1][b5] = C64::new(1.0, 0.0);
            self.contract(&coeffs)
        })
    }
}

pub fn basis_amplitude_table(graph: &SpinNetworkGraph) -> BasisTable {
    basis_amplitude_table_with(graph, Execution::Sequential)
}

pub fn basis_amplitude_table_with(graph: &SpinNetworkGraph, exec: Execution) -> BasisTable {
    let (zero, one) = logical_basis();
    let basis = [zero, one];
    let values = exec.map_range(32, |index| {
        let nodes: Vec<StateVector> =
            (0..NODES).map(|n| basis[(index >> (NODES - 1 - n)) & 1].clone()).collect();
        contract_sequential(&nodes, graph)
    });
    let mut entries = [C64::new(0.0, 0.0); 32];
    entries.copy_from_slice(&values);
    BasisTable { entries }
}

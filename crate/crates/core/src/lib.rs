//! Four-qubit invariant tensors read as quantum tetrahedra.
//!
//! The crate is layered bottom-up:
//!
//! * [`spin`]: dense state vectors and operators on qubit registers, angular
//!   momentum, Clebsch-Gordan coefficients and the SU(2)-invariant projector.
//! * [`tetrahedron`]: the logical Bloch sphere of rank-4 invariant tensors and
//!   their area / dihedral-angle operators.
//! * [`geometry`]: classical Euclidean tetrahedra, closure and reconstruction
//!   from four areas and two dihedral angles.
//! * [`amplitude`]: the five-node vertex amplitude with three independent
//!   contraction routes.
//! * [`tomography`]: NMR-style state preparation, Pauli tomography,
//!   purification and fidelity scoring.
//!
//! Data-parallel loops go through [`exec::Execution`]; with the `parallel`
//! feature disabled every loop runs sequentially and produces bitwise
//! identical results.

pub mod amplitude;
pub mod exec;
pub mod geometry;
pub mod registry;
pub mod spin;
pub mod tetrahedron;
pub mod tomography;

pub use num_complex::Complex64 as C64;

pub use exec::Execution;
pub use spin::{DenseOperator, SpinError, StateVector};
pub use tetrahedron::{BlochPoint, DihedralConvention, DihedralPair, InvariantTensor};

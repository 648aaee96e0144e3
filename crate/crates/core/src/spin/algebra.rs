use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{DenseOperator, SpinError, StateVector};

/// Dense operators are capped at `2^8 × 2^8`.
pub const MAX_OPERATOR_QUBITS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

fn check_register(k: usize, n: usize) -> Result<(), SpinError> {
    if n == 0 || n > MAX_OPERATOR_QUBITS {
        return Err(SpinError::RegisterSize { n, min: 1, max: MAX_OPERATOR_QUBITS });
    }
    if k == 0 || k > n {
        return Err(SpinError::QubitOutOfRange { k, n });
    }
    Ok(())
}

/// `I ⊗ … ⊗ σ_axis ⊗ … ⊗ I` with the Pauli matrix on qubit `k` (1-based).
pub fn pauli_embedded(axis: Axis, k: usize, n: usize) -> Result<DenseOperator, SpinError> {
    check_register(k, n)?;
    let dim = 1usize << n;
    let bit = 1usize << (n - k);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for col in 0..dim {
        let up = col & bit == 0;
        match axis {
            Axis::X => m[(col ^ bit, col)] = one,
            // σ_y|0⟩ = i|1⟩, σ_y|1⟩ = −i|0⟩
            Axis::Y => m[(col ^ bit, col)] = if up { i } else { -i },
            Axis::Z => m[(col, col)] = if up { one } else { -one },
        }
    }
    Ok(DenseOperator::from_parts(n, m, true))
}

/// Spin-1/2 angular momentum `J_axis^(k) = σ_axis^(k) / 2`.
pub fn angular_momentum(axis: Axis, k: usize, n: usize) -> Result<DenseOperator, SpinError> {
    Ok(pauli_embedded(axis, k, n)?.scale_real(0.5))
}

/// `Σ_k J_axis^(k)` over every qubit of the register.
pub fn total_angular_momentum(axis: Axis, n: usize) -> Result<DenseOperator, SpinError> {
    let mut total = DenseOperator::zeros(n);
    for k in 1..=n {
        total = &total + &angular_momentum(axis, k, n)?;
    }
    Ok(total)
}

/// Total `J² = Σ_a (Σ_k J_a^(k))²`.
pub fn casimir(n: usize) -> Result<DenseOperator, SpinError> {
    let mut c = DenseOperator::zeros(n);
    for axis in Axis::ALL {
        let j = total_angular_momentum(axis, n)?;
        c = &c + &(&j * &j);
    }
    Ok(DenseOperator::from_parts(n, c.into_entries(), true))
}

/// `‖(J^(1)+J^(2)+J^(3)+J^(4))|ψ⟩‖` summed in quadrature over the three axes.
///
/// Zero exactly on the SU(2)-invariant subspace.
pub fn closure_defect(state: &StateVector) -> Result<f64, SpinError> {
    if state.n_qubits() != 4 {
        return Err(SpinError::QubitCountMismatch { op: 4, state: state.n_qubits() });
    }
    let mut sum = 0.0;
    for axis in Axis::ALL {
        sum += total_angular_momentum(axis, 4)?.apply(state)?.norm_sqr();
    }
    Ok(sum.sqrt())
}

/// Orthogonal projector onto the total-`J = 0` subspace of `n` qubits.
///
/// Built as `Π_{J>0} (J² − J(J+1)) / (−J(J+1))` over the total spins that
/// occur in `(1/2)^{⊗n}`. Odd registers have no singlet sector and yield
/// the zero operator.
pub fn invariant_projector(n: usize) -> Result<DenseOperator, SpinError> {
    check_register(1, n)?;
    if n % 2 == 1 {
        return Ok(DenseOperator::zeros(n));
    }
    let c = casimir(n)?;
    let dim = 1usize << n;
    let mut p = DMatrix::<C64>::identity(dim, dim);
    for twice_j in (2..=n).step_by(2) {
        let j = twice_j as f64 / 2.0;
        let eig = j * (j + 1.0);
        let factor = (c.entries() - DMatrix::<C64>::identity(dim, dim) * C64::new(eig, 0.0))
            * C64::new(-1.0 / eig, 0.0);
        p = p * factor;
    }
    // symmetrise away rounding so the result is Hermitian to machine precision
    let p = (&p + p.adjoint()) * C64::new(0.5, 0.0);
    Ok(DenseOperator::from_parts(n, p, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn single_qubit_pauli_z() {
        let z = pauli_embedded(Axis::Z, 1, 1).unwrap();
        assert_eq!(z.get(0, 0), c(1.0, 0.0));
        assert_eq!(z.get(1, 1), c(-1.0, 0.0));
        assert_eq!(z.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn pauli_x_on_second_of_two() {
        let x = pauli_embedded(Axis::X, 2, 2).unwrap();
        for (a, b) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            assert_eq!(x.get(a, b), c(1.0, 0.0));
        }
        assert_eq!(x.get(0, 2), c(0.0, 0.0));
    }

    #[test]
    fn pauli_y_on_first_of_two() {
        let y = pauli_embedded(Axis::Y, 1, 2).unwrap();
        let out = y.apply(&StateVector::from_bits("00")).unwrap();
        let expected = StateVector::from_bits("10").scaled(c(0.0, 1.0));
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn index_range_is_checked() {
        assert_eq!(pauli_embedded(Axis::X, 0, 2), Err(SpinError::QubitOutOfRange { k: 0, n: 2 }));
        assert_eq!(pauli_embedded(Axis::X, 3, 2), Err(SpinError::QubitOutOfRange { k: 3, n: 2 }));
        assert!(matches!(pauli_embedded(Axis::X, 1, 9), Err(SpinError::RegisterSize { .. })));
    }

    #[test]
    fn spin_half_jz_and_casimir() {
        let jz = angular_momentum(Axis::Z, 1, 1).unwrap();
        assert_eq!(jz.get(0, 0), c(0.5, 0.0));
        assert_eq!(jz.get(1, 1), c(-0.5, 0.0));
        let cas = casimir(1).unwrap();
        assert!(cas.max_abs_diff(&DenseOperator::identity(1).scale_real(0.75)) < 1e-15);
    }

    #[test]
    fn closure_defect_examples() {
        // highest weight of J=2: ⟨J²⟩ = 6
        assert!((closure_defect(&StateVector::from_bits("0000")).unwrap() - 6f64.sqrt()).abs() < 1e-12);
        let s = 1.0 / 2f64.sqrt();
        let singlet = StateVector::from_real(2, &[0.0, s, -s, 0.0]).unwrap();
        let state = singlet.tensor(&StateVector::from_bits("00"));
        assert!((closure_defect(&state).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!(closure_defect(&StateVector::from_bits("00")).is_err());
    }

    #[test]
    fn projector_ranks() {
        for (n, rank) in [(2, 1.0), (3, 0.0), (4, 2.0), (6, 5.0), (8, 14.0)] {
            let p = invariant_projector(n).unwrap();
            assert!((p.trace().re - rank).abs() < 1e-9, "n={n}");
        }
    }
}

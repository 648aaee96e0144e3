use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{DensityMatrix, TomographyError, DIM, QUBITS};
use crate::spin::{pauli_embedded, total_angular_momentum, Axis, DenseOperator};

/// Largest thermal polarization keeping `(1-ε)/16 I + ε Σσz` positive.
pub const MAX_THERMAL_POLARIZATION: f64 = 1.0 / 65.0;

/// Four-spin liquid-state NMR parameters. Chemical shifts `nu` and couplings `jcoup` in Hz,
/// rotating frame.
///
/// The shipped values are placeholders; edit the config file for a real sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NmrParams {
    pub nu: [f64; QUBITS],
    pub jcoup: [[f64; QUBITS]; QUBITS],
    pub epsilon: f64,
}

impl NmrParams {
    pub fn placeholder() -> Self {
        let j = [
            [0.0, 35.0, 1.5, 6.0],
            [35.0, 0.0, 53.0, 2.0],
            [1.5, 53.0, 0.0, 38.0],
            [6.0, 2.0, 38.0, 0.0],
        ];
        Self { nu: [-1200.0, -450.0, 300.0, 900.0], jcoup: j, epsilon: 1e-5 }
    }

    pub fn validate(&self) -> Result<(), TomographyError> {
        for j in 0..QUBITS {
            if self.jcoup[j][j] != 0.0 {
                return Err(TomographyError::InvalidParams(format!("coupling jcoup[{j}][{j}] must be zero")));
            }
            for k in 0..QUBITS {
                if self.jcoup[j][k] != self.jcoup[k][j] {
                    return Err(TomographyError::InvalidParams(format!("couplings not symmetric at ({j}, {k})")));
                }
            }
        }
        let all = self.nu.iter().chain(self.jcoup.iter().flatten()).chain([&self.epsilon]);
        if all.into_iter().any(|x| !x.is_finite()) {
            return Err(TomographyError::InvalidParams("non-finite parameter".into()));
        }
        Ok(())
    }
}

impl Default for NmrParams {
    fn default() -> Self {
        Self::placeholder()
    }
}

fn identity_part(weight: f64) -> DMatrix<C64> {
    DMatrix::identity(DIM, DIM) * C64::new(weight / DIM as f64, 0.0)
}

/// High-temperature equilibrium state, renormalised to unit trace.
pub fn thermal_state(params: &NmrParams) -> Result<DensityMatrix, TomographyError> {
    params.validate()?;
    let eps = params.epsilon;
    if !(0.0..=MAX_THERMAL_POLARIZATION).contains(&eps) {
        return Err(TomographyError::Polarization { epsilon: eps, min: 0.0, max: MAX_THERMAL_POLARIZATION });
    }
    let sz = total_angular_momentum(Axis::Z, QUBITS)?.scale_real(2.0);
    let m = (identity_part(1.0 - eps) + sz.entries() * C64::new(eps, 0.0)) / C64::new(1.0 - eps, 0.0);
    DensityMatrix::new(m)
}

/// `(1-ε)/16 I + ε |0000⟩⟨0000|`.
pub fn pseudo_pure_state(epsilon: f64) -> Result<DensityMatrix, TomographyError> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(TomographyError::Polarization { epsilon, min: 0.0, max: 1.0 });
    }
    let mut m = identity_part(1.0 - epsilon);
    m[(0, 0)] += C64::new(epsilon, 0.0);
    DensityMatrix::new(m)
}

/// `H = Σ_j π ν_j σz^j + Σ_{j<k} (π/2) J_jk σz^j σz^k`, in rad/s.
pub fn internal_hamiltonian(params: &NmrParams) -> Result<DenseOperator, TomographyError> {
    params.validate()?;
    let z: Vec<DenseOperator> = (1..=QUBITS).map(|k| pauli_embedded(Axis::Z, k, QUBITS)).collect::<Result<_, _>>()?;
    let pi = std::f64::consts::PI;
    let mut h = DenseOperator::zeros(QUBITS);
    for j in 0..QUBITS {
        h = &h + &z[j].scale_real(pi * params.nu[j]);
        for k in j + 1..QUBITS {
            let zz = (&z[j] * &z[k]).scale_real(0.5 * pi * params.jcoup[j][k]);
            h = &h + &zz;
        }
    }
    Ok(DenseOperator::from_parts(QUBITS, h.into_entries(), true))
}

/// `exp(-i H t)` for a diagonal Hamiltonian.
pub fn diagonal_propagator(h: &DenseOperator, t: f64) -> Result<DenseOperator, TomographyError> {
    if h.off_diagonal_norm() > 1e-12 {
        return Err(TomographyError::InvalidParams("hamiltonian is not diagonal".into()));
    }
    let d = h.diagonal();
    let m = DMatrix::from_fn(h.dim(), h.dim(), |r, c| if r == c { C64::new(0.0, -d[r].re * t).exp() } else { C64::new(0.0, 0.0) });
    Ok(DenseOperator::from_parts(h.n_qubits(), m, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_bounds_and_trace() {
        let mut p = NmrParams::placeholder();
        let rho = thermal_state(&p).unwrap();
        assert!((rho.entries().trace().re - 1.0).abs() < 1e-14);
        p.epsilon = 0.0;
        assert!((thermal_state(&p).unwrap().entries() - DensityMatrix::maximally_mixed().entries()).camax() < 1e-16);
        p.epsilon = MAX_THERMAL_POLARIZATION;
        assert!(thermal_state(&p).is_ok());
        p.epsilon = 0.02;
        assert!(matches!(thermal_state(&p), Err(TomographyError::Polarization { .. })));
    }

    #[test]
    fn params_validation() {
        let mut p = NmrParams::placeholder();
        p.jcoup[0][1] = 1.0;
        assert!(p.validate().is_err());
        let mut p = NmrParams::placeholder();
        p.jcoup[2][2] = 1.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn pseudo_pure_examples() {
        let rho = pseudo_pure_state(0.3).unwrap();
        assert!((rho.entries()[(0, 0)].re - (0.7 / 16.0 + 0.3)).abs() < 1e-15);
        assert!((rho.entries()[(5, 5)].re - 0.7 / 16.0).abs() < 1e-15);
        assert!(pseudo_pure_state(1.1).is_err());
        assert!(pseudo_pure_state(-0.1).is_err());
    }

    #[test]
    fn hamiltonian_diagonal_and_propagator_unitary() {
        let p = NmrParams::placeholder();
        let h = internal_hamiltonian(&p).unwrap();
        assert!(h.off_diagonal_norm() < 1e-15);
        // |0000⟩: all σz = +1
        let pi = std::f64::consts::PI;
        let mut e0 = pi * p.nu.iter().sum::<f64>();
        for j in 0..4 {
            for k in j + 1..4 {
                e0 += 0.5 * pi * p.jcoup[j][k];
            }
        }
        assert!((h.get(0, 0).re - e0).abs() < 1e-9);
        let u = diagonal_propagator(&h, 1e-3).unwrap();
        let uu = &u * &u.adjoint();
        assert!(uu.max_abs_diff(&DenseOperator::identity(4)) < 1e-14);
        let x = pauli_embedded(Axis::X, 1, 4).unwrap();
        assert!(diagonal_propagator(&x, 1.0).is_err());
    }

    fn single_shift(nu1: f64) -> NmrParams {
        NmrParams { nu: [nu1, 0.0, 0.0, 0.0], jcoup: [[0.0; 4]; 4], epsilon: 1e-5 }
    }

    #[test]
    fn hamiltonian_simple_cases() {
        assert!(internal_hamiltonian(&single_shift(0.0)).unwrap().max_abs_diff(&DenseOperator::zeros(4)) < 1e-15);
        let z1 = pauli_embedded(Axis::Z, 1, 4).unwrap().scale_real(std::f64::consts::PI);
        assert!(internal_hamiltonian(&single_shift(1.0)).unwrap().max_abs_diff(&z1) < 1e-15);
    }

    #[test]
    fn transverse_magnetisation_precesses() {
        let (nu1, t) = (3.0, 0.05);
        let u = diagonal_propagator(&internal_hamiltonian(&single_shift(nu1)).unwrap(), t).unwrap();
        let x = pauli_embedded(Axis::X, 1, 4).unwrap();
        let y = pauli_embedded(Axis::Y, 1, 4).unwrap();
        let evolved = &(&u * &x) * &u.adjoint();
        let angle = 2.0 * std::f64::consts::PI * nu1 * t;
        let along = |op: &DenseOperator| (&evolved * op).trace().re / 16.0;
        assert!((along(&x) - angle.cos()).abs() < 1e-12);
        assert!((along(&y) - angle.sin()).abs() < 1e-12);
    }

    #[test]
    fn thermal_diagonal_bookkeeping() {
        let mut p = NmrParams::placeholder();
        p.epsilon = 1e-5;
        let rho = thermal_state(&p).unwrap();
        let eps = p.epsilon;
        // Σσz on |b⟩ is 4 − 2·popcount(b)
        for b in 0..16usize {
            let expected = ((1.0 - eps) / 16.0 + eps * (4.0 - 2.0 * b.count_ones() as f64)) / (1.0 - eps);
            assert!((rho.entries()[(b, b)].re - expected).abs() < 1e-16);
        }
        assert!(rho.entries().iter().enumerate().all(|(i, z)| i % 17 == 0 || z.norm() == 0.0));
    }
}

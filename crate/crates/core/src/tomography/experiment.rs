use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{deviation_from_pauli, fidelity, ml_purify, pauli_expectations, pseudo_pure_state, DensityMatrix, NmrParams, TomographyError, DIM, QUBITS};
use crate::amplitude::reference::{table_report, Calibration, FROZEN_CALIBRATION};
use crate::amplitude::vertex_amplitude;
use crate::exec::Execution;
use crate::spin::{DenseOperator, StateVector};
use crate::tetrahedron::{bloch_state, dihedral_closed_form, dihedral_operator, fluctuation, BlochPoint, DihedralConvention, DihedralPair};

/// Control errors applied between preparation and readout.
///
/// Each qubit gets a z-rotation by an angle drawn from `N(0, rotation_angle_sd)`,
/// then the whole register is depolarized with probability `depolarizing_p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub depolarizing_p: f64,
    pub rotation_angle_sd: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self { depolarizing_p: 0.0, rotation_angle_sd: 0.0, seed: 0 }
    }

    fn validate(&self) -> Result<(), TomographyError> {
        if !(0.0..=1.0).contains(&self.depolarizing_p) {
            return Err(TomographyError::InvalidParams(format!("depolarizing probability {} not in [0, 1]", self.depolarizing_p)));
        }
        if !(self.rotation_angle_sd >= 0.0 && self.rotation_angle_sd.is_finite()) {
            return Err(TomographyError::InvalidParams(format!("rotation sd {} must be finite and non-negative", self.rotation_angle_sd)));
        }
        Ok(())
    }
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self { depolarizing_p: 0.01, rotation_angle_sd: 0.06, seed: 2017 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSetup {
    pub params: NmrParams,
    pub calibration: Calibration,
    pub exec: Execution,
}

impl Default for ExperimentSetup {
    fn default() -> Self {
        Self { params: NmrParams::placeholder(), calibration: FROZEN_CALIBRATION, exec: Execution::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Target {
    pub name: String,
    pub point: BlochPoint,
}

impl Target {
    pub fn new(name: impl Into<String>, point: BlochPoint) -> Self {
        Self { name: name.into(), point }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DihedralTriple {
    pub cos12: f64,
    pub cos13: f64,
    pub cos14: f64,
}

/// Amplitude with node 5 set to the target, raw and in reference table units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AmplitudeComparison {
    pub theory_raw: C64,
    pub measured_raw: C64,
    pub theory_table: C64,
    pub measured_table: C64,
    /// `|measured_table − theory_table|`.
    pub deviation_table: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TargetReport {
    pub name: String,
    pub theta: f64,
    pub phi: f64,
    /// Hilbert-Schmidt fidelity of the tomographed state with the target.
    pub fidelity: f64,
    /// `|⟨ψ_target|ψ_purified⟩|²`.
    pub purified_overlap: f64,
    pub delta_theory: f64,
    pub delta_measured: f64,
    pub dihedral_theory: DihedralTriple,
    pub dihedral_measured: DihedralTriple,
    pub amplitude: AmplitudeComparison,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub noise: NoiseSpec,
    pub polarization: f64,
    pub calibration: Calibration,
    pub scale: C64,
    pub targets: Vec<TargetReport>,
    pub min_fidelity: f64,
    pub max_delta_error: f64,
    pub max_amplitude_deviation: f64,
}

/// Householder reflection sending `|0000⟩` to `ψ` up to a global phase.
fn preparation_unitary(psi: &StateVector) -> DenseOperator {
    let a = psi.amplitudes();
    let phase = if a[0].norm() > 0.0 { a[0].conj() / a[0].norm() } else { C64::new(1.0, 0.0) };
    let mut w: Vec<C64> = a.iter().map(|z| -z * phase).collect();
    w[0] += C64::new(1.0, 0.0);
    let ww: f64 = w.iter().map(|z| z.norm_sqr()).sum();
    let mut m = DMatrix::<C64>::identity(DIM, DIM);
    if ww > 1e-24 {
        for r in 0..DIM {
            for c in 0..DIM {
                m[(r, c)] -= w[r] * w[c].conj() * (2.0 / ww);
            }
        }
    }
    DenseOperator::from_parts(QUBITS, m, false)
}

fn z_rotations(angles: &[f64; QUBITS]) -> DenseOperator {
    let m = DMatrix::from_fn(DIM, DIM, |r, c| {
        if r != c {
            return C64::new(0.0, 0.0);
        }
        let phase: f64 = (0..QUBITS).map(|k| if (r >> (QUBITS - 1 - k)) & 1 == 0 { -0.5 } else { 0.5 } * angles[k]).sum();
        C64::new(0.0, phase).exp()
    });
    DenseOperator::from_parts(QUBITS, m, false)
}

fn draw_angles(sd: f64, rng: &mut ChaCha8Rng) -> [f64; QUBITS] {
    let mut angles = [0.0; QUBITS];
    if sd > 0.0 {
        let normal = Normal::new(0.0, sd).expect("validated sd");
        for a in &mut angles {
            *a = normal.sample(rng);
        }
    }
    angles
}

/// Removes the global phase of `state` relative to `reference`.
fn align_phase(state: &StateVector, reference: &StateVector) -> StateVector {
    let overlap = state.inner(reference);
    if overlap.norm() > 0.0 {
        state.scaled(overlap / overlap.norm())
    } else {
        state.clone()
    }
}

fn dihedrals(f: impl Fn(DihedralPair) -> f64) -> DihedralTriple {
    DihedralTriple { cos12: f(DihedralPair::P12), cos13: f(DihedralPair::P13), cos14: f(DihedralPair::P14) }
}

fn fluctuation_of(rho: &DensityMatrix) -> f64 {
    DihedralPair::INDEPENDENT
        .iter()
        .map(|&p| {
            let m = dihedral_operator(p, DihedralConvention::Interior);
            let mean = rho.expectation(&m);
            rho.expectation(&(&m * &m)) - mean * mean
        })
        .sum()
}

struct Context<'a> {
    setup: &'a ExperimentSetup,
    noise: &'a NoiseSpec,
    scale: C64,
    fixed: Vec<StateVector>,
    baseline: DensityMatrix,
}

fn run_target(target: &Target, seed: u64, ctx: &Context<'_>) -> Result<TargetReport, TomographyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ideal = bloch_state(target.point).embedded().clone();
    let ideal_rho = DensityMatrix::from_pure(&ideal)?;

    let prepared = ctx.baseline.conjugated(&preparation_unitary(&ideal));
    let rotated = prepared.conjugated(&z_rotations(&draw_angles(ctx.noise.rotation_angle_sd, &mut rng)));
    let lab = rotated.depolarized(ctx.noise.depolarizing_p);

    let measured = deviation_from_pauli(&pauli_expectations(&lab), ctx.setup.params.epsilon)?;
    let purified = align_phase(&ml_purify(&measured)?, &ideal);

    let graph = ctx.setup.calibration.graph();
    let amp = |node5: StateVector| -> Result<C64, TomographyError> {
        let mut nodes = ctx.fixed.clone();
        nodes.push(node5);
        Ok(vertex_amplitude(&nodes, &graph)?.value)
    };
    let theory_raw = amp(ideal.clone())?;
    let measured_raw = amp(purified.clone())?;
    let theory_table = theory_raw * ctx.scale;
    let measured_table = measured_raw * ctx.scale;

    Ok(TargetReport {
        name: target.name.clone(),
        theta: target.point.theta(),
        phi: target.point.phi(),
        fidelity: fidelity(&measured, &ideal_rho)?,
        purified_overlap: purified.inner(&ideal).norm_sqr(),
        delta_theory: fluctuation(target.point),
        delta_measured: fluctuation_of(&measured),
        dihedral_theory: dihedrals(|p| dihedral_closed_form(target.point, p)),
        dihedral_measured: dihedrals(|p| measured.expectation(&dihedral_operator(p, DihedralConvention::Interior))),
        amplitude: AmplitudeComparison {
            theory_raw,
            measured_raw,
            theory_table,
            measured_table,
            deviation_table: (measured_table - theory_table).norm(),
        },
    })
}

/// Prepares each target from the pseudo-pure state, applies `noise`, runs
/// full Pauli tomography and scores the result.
///
/// Every target draws its noise from its own generator seeded off
/// `noise.seed`, so results do not depend on execution mode.
pub fn simulate_experiment(targets: &[Target], noise: &NoiseSpec, setup: &ExperimentSetup) -> Result<ExperimentReport, TomographyError> {
    noise.validate()?;
    setup.params.validate()?;
    let polarization = setup.params.epsilon;
    if !(polarization > 0.0 && polarization <= 1.0) {
        return Err(TomographyError::Polarization { epsilon: polarization, min: 0.0, max: 1.0 });
    }
    let ctx = Context {
        setup,
        noise,
        scale: table_report(setup.calibration).scale,
        fixed: setup.calibration.fixed_nodes(),
        baseline: pseudo_pure_state(polarization)?,
    };
    let mut master = ChaCha8Rng::seed_from_u64(noise.seed);
    let jobs: Vec<(&Target, u64)> = targets.iter().map(|t| (t, master.next_u64())).collect();
    let targets = setup.exec.map(&jobs, |(t, seed)| run_target(t, *seed, &ctx)).into_iter().collect::<Result<Vec<_>, _>>()?;

    let min_fidelity = targets.iter().map(|t| t.fidelity).fold(f64::INFINITY, f64::min);
    let max_delta_error = targets.iter().map(|t| (t.delta_measured - t.delta_theory).abs()).fold(0.0, f64::max);
    let max_amplitude_deviation = targets.iter().map(|t| t.amplitude.deviation_table).fold(0.0, f64::max);
    Ok(ExperimentReport {
        noise: *noise,
        polarization,
        calibration: setup.calibration,
        scale: ctx.scale,
        targets,
        min_fidelity,
        max_delta_error,
        max_amplitude_deviation,
    })
}

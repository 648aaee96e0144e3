use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use super::contract::contract_sequential;
use super::{AmplitudeError, AmplitudeResult, SpinNetworkGraph, NODES};
use crate::exec::Execution;
use crate::spin::StateVector;
use crate::tetrahedron::{bloch_state, BlochPoint};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepCell {
    pub theta: f64,
    pub phi: f64,
    pub result: AmplitudeResult,
}

/// `n` evenly spaced polar angles covering `[0, π]` inclusive.
pub fn theta_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| PI * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` evenly spaced azimuths covering `[0, 2π)`.
pub fn phi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// Amplitude with the first four nodes fixed and node 5 set to
/// `bloch_state(θ, φ)` for every grid cell, θ-major.
pub fn amplitude_sweep(
    fixed: &[StateVector],
    graph: &SpinNetworkGraph,
    thetas: &[f64],
    phis: &[f64],
    exec: Execution,
) -> Result<Vec<SweepCell>, AmplitudeError> {
    if thetas.is_empty() || phis.is_empty() {
        return Err(AmplitudeError::EmptyGrid);
    }
    if fixed.len() != NODES - 1 {
        return Err(AmplitudeError::NodeCount { expected: NODES - 1, got: fixed.len() });
    }
    let mut points = Vec::with_capacity(thetas.len() * phis.len());
    for &theta in thetas {
        for &phi in phis {
            points.push(BlochPoint::new(theta, phi)?);
        }
    }
    let mut probe: Vec<StateVector> = fixed.to_vec();
    probe.push(bloch_state(points[0]).embedded().clone());
    super::check_nodes(&probe)?;

    Ok(exec.map(&points, |p| {
        let mut nodes = fixed.to_vec();
        nodes.push(bloch_state(*p).embedded().clone());
        SweepCell {
            theta: p.theta(),
            phi: p.phi(),
            result: AmplitudeResult::from_value(contract_sequential(&nodes, graph)),
        }
    }))
}

/// CSV with header `theta,phi,re,im,abs,phase` and 17 significant digits.
pub fn sweep_csv(cells: &[SweepCell]) -> String {
    let mut out = String::from("theta,phi,re,im,abs,phase\n");
    for c in cells {
        let r = &c.result;
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            c.theta, c.phi, r.value.re, r.value.im, r.magnitude, r.phase
        );
    }
    out
}

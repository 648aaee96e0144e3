//! The ten named tetrahedron states A0…E1 used throughout the experiment.

use std::f64::consts::PI;

use crate::tetrahedron::BlochPoint;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NamedState {
    pub name: &'static str,
    pub theta: f64,
    pub phi: f64,
    /// Fluctuation listed as the theory value in the reference state table.
    pub listed_delta: f64,
    /// Experimentally measured fluctuation from the same table.
    pub measured_delta: f64,
}

impl NamedState {
    pub fn point(&self) -> BlochPoint {
        BlochPoint::new(self.theta, self.phi).expect("registry points are in range")
    }
}

const fn state(name: &'static str, theta: f64, phi: f64, measured_delta: f64) -> NamedState {
    NamedState { name, theta, phi, listed_delta: 2.0 / 3.0, measured_delta }
}

/// Column order of the reference tables.
pub const NAMED_STATES: [NamedState; 10] = [
    state("A0", 0.0, 0.0, 0.684),
    state("B0", PI / 5.0, 0.0, 0.672),
    state("C0", PI / 2.0, 3.0 * PI / 2.0, 0.689),
    state("D0", PI / 2.0, 0.0, 0.637),
    state("E0", 4.0 * PI / 5.0, 0.0, 0.698),
    state("A1", PI, PI, 0.666),
    state("B1", 4.0 * PI / 5.0, PI, 0.703),
    state("C1", PI / 2.0, PI / 2.0, 0.675),
    state("D1", PI / 2.0, PI, 0.641),
    state("E1", PI / 5.0, PI, 0.707),
];

pub fn named_state(name: &str) -> Option<&'static NamedState> {
    NAMED_STATES.iter().find(|s| s.name.eq_ignore_ascii_case(name))
}

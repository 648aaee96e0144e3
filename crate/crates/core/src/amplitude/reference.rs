//! Comparison against the reference vertex-amplitude table.
//!
//! The reference values are quoted in units of `10⁻⁵` and carry an unstated
//! normalisation, so computed amplitudes are matched up to one global complex
//! factor fitted by least squares. The slot convention and the choice of
//! regular state for nodes 1–4 are not fixed by the source either; they are
//! found by [`search_convention`] and frozen in [`FROZEN_CALIBRATION`].

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::{vertex_amplitude, SlotConvention, SpinNetworkGraph};
use crate::registry::{named_state, NAMED_STATES};
use crate::spin::StateVector;
use crate::tetrahedron::bloch_state;

/// Reference theory row, `(re, im)` in units of `10⁻⁵`, in registry order.
pub const THEORY: [(f64, f64); 10] = [
    (-13.5635, -23.4923),
    (-20.1590, -18.1514),
    (0.0, 0.0),
    (-26.2024, -7.0210),
    (-26.5339, 5.6400),
    (23.4924, -13.5634),
    (18.1513, -20.1591),
    (-27.1270, -46.9848),
    (7.0208, -26.2024),
    (-5.6401, -26.5339),
];

/// Reference experiment row, same layout.
pub const EXPERIMENT: [(f64, f64); 10] = [
    (-12.74, -23.67),
    (-19.89, -17.78),
    (0.01, 0.05),
    (-24.59, -7.98),
    (-25.72, 6.63),
    (-22.16, 13.16),
    (18.73, -18.10),
    (-25.48, -44.14),
    (4.32, -25.62),
    (-3.84, -25.86),
];

pub fn theory_values() -> Vec<C64> {
    THEORY.iter().map(|&(re, im)| C64::new(re, im)).collect()
}

pub fn experiment_values() -> Vec<C64> {
    EXPERIMENT.iter().map(|&(re, im)| C64::new(re, im)).collect()
}

/// Largest `|experiment − theory|` over the reference entries, skipping A1
/// whose experimental value has the opposite sign to theory in both parts.
pub fn experimental_deviation_scale() -> f64 {
    NAMED_STATES
        .iter()
        .zip(theory_values().iter().zip(experiment_values()))
        .filter(|(s, _)| s.name != "A1")
        .map(|(_, (t, e))| (t - e).norm())
        .fold(0.0, f64::max)
}

/// Which slot convention and regular state reproduce the reference row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Calibration {
    pub slots: SlotConvention,
    /// Registry name of the regular state placed on nodes 1–4.
    pub regular: &'static str,
}

/// Result of [`search_convention`], frozen so downstream commands do not
/// repeat the search.
pub const FROZEN_CALIBRATION: Calibration = Calibration { slots: SlotConvention::Cyclic, regular: "C1" };

impl Calibration {
    pub fn graph(&self) -> SpinNetworkGraph {
        SpinNetworkGraph::k5(self.slots)
    }

    pub fn regular_state(&self) -> StateVector {
        let s = named_state(self.regular).expect("calibration names a registry state");
        bloch_state(s.point()).embedded().clone()
    }

    /// Four copies of the regular state.
    pub fn fixed_nodes(&self) -> Vec<StateVector> {
        vec![self.regular_state(); 4]
    }

    /// Raw amplitudes with node 5 set to each registry state in turn.
    pub fn amplitudes(&self) -> Vec<C64> {
        let graph = self.graph();
        let fixed = self.fixed_nodes();
        NAMED_STATES
            .iter()
            .map(|s| {
                let mut nodes = fixed.clone();
                nodes.push(bloch_state(s.point()).embedded().clone());
                vertex_amplitude(&nodes, &graph).expect("valid nodes").value
            })
            .collect()
    }
}

/// Least-squares `k` minimising `Σ |k·computed − reference|²`.
pub fn fit_global_scale(computed: &[C64], reference: &[C64]) -> C64 {
    let num: C64 = computed.iter().zip(reference).map(|(a, t)| a.conj() * t).sum();
    let den: f64 = computed.iter().map(|a| a.norm_sqr()).sum();
    if den == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        num / den
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateScore {
    pub calibration: Calibration,
    pub scale: C64,
    /// `‖k·a − t‖ / ‖t‖` after the fit.
    pub relative_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConventionSearch {
    pub candidates: Vec<CandidateScore>,
    pub best: Calibration,
}

/// Scores every slot convention with both regular states and returns the
/// lowest residual; ties keep enumeration order.
pub fn search_convention() -> ConventionSearch {
    let theory = theory_values();
    let mut candidates = Vec::new();
    for slots in SlotConvention::ALL {
        for regular in ["C0", "C1"] {
            let calibration = Calibration { slots, regular };
            let computed = calibration.amplitudes();
            let scale = fit_global_scale(&computed, &theory);
            let relative_residual = residual_norm(&computed, &theory, scale) / norm(&theory);
            candidates.push(CandidateScore { calibration, scale, relative_residual });
        }
    }
    let mut best = &candidates[0];
    for c in &candidates[1..] {
        if c.relative_residual < best.relative_residual - 1e-9 {
            best = c;
        }
    }
    let best = best.calibration;
    ConventionSearch { candidates, best }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn residual_norm(computed: &[C64], reference: &[C64], scale: C64) -> f64 {
    computed.iter().zip(reference).map(|(a, t)| (a * scale - t).norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableEntry {
    pub name: &'static str,
    pub raw: C64,
    /// `scale · raw`, in the reference `10⁻⁵` units.
    pub scaled: C64,
    pub theory: C64,
    /// `|scaled − theory| / |theory|`; for zero theory entries,
    /// `|raw|` relative to nothing, see [`TableReport::zero_entry_ratio`].
    pub relative_error: Option<f64>,
}

/// The entry that the remaining nine fit best without.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutlierAnalysis {
    pub name: &'static str,
    /// Max relative error of the other entries under their own fit.
    pub others_max_relative_error: f64,
    /// `theory / (scale · raw)` for the excluded entry under that fit.
    pub ratio: C64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub calibration: Calibration,
    pub scale: C64,
    pub entries: Vec<TableEntry>,
    /// Largest relative error over nonzero theory entries.
    pub max_relative_error: f64,
    /// Largest `|raw|` among zero-theory entries.
    pub zero_entry_ratio: f64,
    pub outlier: OutlierAnalysis,
}

/// Fits the global scale over all ten reference entries and reports the
/// per-entry agreement.
pub fn table_report(calibration: Calibration) -> TableReport {
    let raw = calibration.amplitudes();
    let theory = theory_values();
    let scale = fit_global_scale(&raw, &theory);
    let mut max_relative_error = 0.0f64;
    let mut zero_entry_ratio = 0.0f64;
    let entries: Vec<TableEntry> = NAMED_STATES
        .iter()
        .zip(raw.iter().zip(&theory))
        .map(|(s, (&a, &t))| {
            let scaled = a * scale;
            let relative_error = if t.norm() > 0.0 {
                let e = (scaled - t).norm() / t.norm();
                max_relative_error = max_relative_error.max(e);
                Some(e)
            } else {
                zero_entry_ratio = zero_entry_ratio.max(a.norm());
                None
            };
            TableEntry { name: s.name, raw: a, scaled, theory: t, relative_error }
        })
        .collect();
    let outlier = leave_one_out(&raw, &theory);
    TableReport { calibration, scale, entries, max_relative_error, zero_entry_ratio, outlier }
}

fn leave_one_out(raw: &[C64], theory: &[C64]) -> OutlierAnalysis {
    let mut best: Option<OutlierAnalysis> = None;
    for (skip, state) in NAMED_STATES.iter().enumerate() {
        let (a, t): (Vec<C64>, Vec<C64>) = raw
            .iter()
            .zip(theory)
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, (a, t))| (*a, *t))
            .unzip();
        let k = fit_global_scale(&a, &t);
        let worst = a
            .iter()
            .zip(&t)
            .filter(|(_, t)| t.norm() > 0.0)
            .map(|(a, t)| (a * k - t).norm() / t.norm())
            .fold(0.0, f64::max);
        let fitted = raw[skip] * k;
        let ratio = if fitted.norm() > 0.0 { theory[skip] / fitted } else { C64::new(f64::NAN, f64::NAN) };
        if best.as_ref().is_none_or(|b| worst < b.others_max_relative_error) {
            best = Some(OutlierAnalysis { name: state.name, others_max_relative_error: worst, ratio });
        }
    }
    best.expect("ten entries")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_fit_recovers_known_factor() {
        let a = vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.1), C64::new(0.0, 3.0)];
        let k = C64::new(0.3, -1.7);
        let t: Vec<C64> = a.iter().map(|x| x * k).collect();
        assert!((fit_global_scale(&a, &t) - k).norm() < 1e-15);
    }

    #[test]
    fn deviation_scale_ignores_a1() {
        let d = experimental_deviation_scale();
        assert!(d > 3.0 && d < 3.5, "{d}");
    }
}

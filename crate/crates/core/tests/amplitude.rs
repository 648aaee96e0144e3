use std::collections::BTreeSet;
use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spinfoam_core::amplitude::reference::{
    fit_global_scale, search_convention, table_report, theory_values, FROZEN_CALIBRATION,
};
use spinfoam_core::amplitude::{
    amplitude_sweep, basis_amplitude_table, basis_amplitude_table_with, vertex_amplitude,
    vertex_amplitude_bruteforce, AmplitudeError, Endpoint, Link, SlotConvention, SpinNetworkGraph,
};
use spinfoam_core::exec::Execution;
use spinfoam_core::registry::NAMED_STATES;
use spinfoam_core::spin::StateVector;
use spinfoam_core::tetrahedron::{bloch_state, logical_basis, BlochPoint};

fn random_coeffs(rng: &mut ChaCha8Rng) -> [C64; 2] {
    let mut c = [0.0; 4].map(|_| rng.random_range(-1.0..1.0));
    let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    c.iter_mut().for_each(|x| *x /= n);
    [C64::new(c[0], c[1]), C64::new(c[2], c[3])]
}

fn invariant(c: [C64; 2]) -> StateVector {
    let (zero, one) = logical_basis();
    zero.combine(c[0], &one, c[1])
}

fn random_tuple(rng: &mut ChaCha8Rng) -> ([[C64; 2]; 5], Vec<StateVector>) {
    let coeffs = [(); 5].map(|_| random_coeffs(rng));
    let states = coeffs.iter().map(|c| invariant(*c)).collect();
    (coeffs, states)
}

fn all_graphs() -> Vec<SpinNetworkGraph> {
    SlotConvention::ALL.iter().map(|&c| SpinNetworkGraph::k5(c)).collect()
}

#[test]
fn three_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2017);
    let graphs = all_graphs();
    let tables: Vec<_> = graphs.iter().map(basis_amplitude_table).collect();
    for i in 0..50 {
        let (coeffs, states) = random_tuple(&mut rng);
        let g = &graphs[i % 3];
        let fast = vertex_amplitude(&states, g).unwrap().value;
        let brute = vertex_amplitude_bruteforce(&states, g).unwrap().value;
        let table = tables[i % 3].contract(&coeffs);
        assert!((fast - brute).norm() < 1e-10, "tuple {i}");
        assert!((fast - table).norm() < 1e-10, "tuple {i}");
    }
}

#[test]
fn table_matches_vertex_on_bloch_tuples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = FROZEN_CALIBRATION.graph();
    let table = basis_amplitude_table(&g);
    for _ in 0..20 {
        let tensors = [(); 5].map(|_| {
            bloch_state(BlochPoint::new(rng.random_range(0.0..=PI), rng.random_range(0.0..2.0 * PI)).unwrap())
        });
        let states: Vec<StateVector> = tensors.iter().map(|t| t.embedded().clone()).collect();
        let a = vertex_amplitude(&states, &g).unwrap().value;
        assert!((table.amplitude(&tensors).value - a).norm() < 1e-12);
    }
}

#[test]
fn table_is_independent_of_execution() {
    let g = SpinNetworkGraph::k5(SlotConvention::Cyclic);
    assert_eq!(basis_amplitude_table_with(&g, Execution::Sequential), basis_amplitude_table_with(&g, Execution::Parallel));
}

#[test]
fn amplitude_is_multilinear() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = SpinNetworkGraph::k5(SlotConvention::Lexicographic);
    for node in 0..5 {
        let (_, base) = random_tuple(&mut rng);
        let (x, y) = (invariant(random_coeffs(&mut rng)), invariant(random_coeffs(&mut rng)));
        let (alpha, beta) = (C64::new(0.3, -1.2), C64::new(-0.7, 0.4));
        let at = |s: StateVector| {
            let mut nodes = base.clone();
            nodes[node] = s;
            vertex_amplitude(&nodes, &g).unwrap().value
        };
        let lhs = at(x.combine(alpha, &y, beta));
        let rhs = alpha * at(x.clone()) + beta * at(y.clone());
        assert!((lhs - rhs).norm() < 1e-13, "node {node}");
    }
}

#[test]
fn reversing_a_link_negates() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (_, states) = random_tuple(&mut rng);
    let g = SpinNetworkGraph::k5(SlotConvention::Cyclic);
    let a = vertex_amplitude(&states, &g).unwrap().value;
    for i in 0..10 {
        let b = vertex_amplitude(&states, &g.with_link_swapped(i)).unwrap().value;
        assert!((a + b).norm() < 1e-13);
    }
}

/// Reorients links to run from the lower to the higher node and returns the
/// number of reversals.
fn canonical_orientation(g: &SpinNetworkGraph) -> (BTreeSet<(Endpoint, Endpoint)>, usize) {
    let mut flips = 0;
    let set = g
        .links()
        .iter()
        .map(|l| {
            if l.first.node > l.second.node {
                flips += 1;
                (l.second, l.first)
            } else {
                (l.first, l.second)
            }
        })
        .collect();
    (set, flips)
}

fn link_set(g: &SpinNetworkGraph) -> BTreeSet<(Endpoint, Endpoint)> {
    g.links().iter().map(|l| (l.first, l.second)).collect()
}

#[test]
fn dihedral_symmetry_of_the_cyclic_graph() {
    let g = SpinNetworkGraph::k5(SlotConvention::Cyclic);
    let table = basis_amplitude_table(&g);
    let mut perms: Vec<([usize; 5], SlotConvention)> = Vec::new();
    for r in 0..5 {
        perms.push(([0, 1, 2, 3, 4].map(|n| (n + r) % 5), SlotConvention::Cyclic));
        perms.push(([0, 1, 2, 3, 4].map(|n| (5 + r - n) % 5), SlotConvention::CyclicReversed));
    }
    for (perm, image) in perms {
        let relabelled = g.relabel_nodes(perm).unwrap();
        let (links, flips) = canonical_orientation(&relabelled);
        let target = SpinNetworkGraph::k5(image);
        assert_eq!(links, link_set(&target), "perm {perm:?}");
        let target_table = basis_amplitude_table(&target);
        let sign = if flips % 2 == 0 { 1.0 } else { -1.0 };
        for b in 0..32usize {
            let bits: [usize; 5] = [0, 1, 2, 3, 4].map(|n| (b >> (4 - n)) & 1);
            let mut moved = [0usize; 5];
            for n in 0..5 {
                moved[perm[n]] = bits[n];
            }
            assert!((target_table.get(moved) - table.get(bits) * sign).norm() < 1e-13, "perm {perm:?} bits {bits:?}");
        }
    }
}

/// Moves qubit `s` of a four-qubit state to position `sigma[s]`.
fn permute_qubits(state: &StateVector, sigma: [usize; 4]) -> StateVector {
    let mut out = vec![C64::new(0.0, 0.0); 16];
    for i in 0..16 {
        let mut j = 0;
        for s in 0..4 {
            let bit = (i >> (3 - s)) & 1;
            j |= bit << (3 - sigma[s]);
        }
        out[j] = state.amplitude(i);
    }
    StateVector::new(4, out).unwrap()
}

#[test]
fn slot_relabelling_with_matching_qubit_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (_, states) = random_tuple(&mut rng);
    let g = SpinNetworkGraph::k5(SlotConvention::Lexicographic);
    let a = vertex_amplitude(&states, &g).unwrap().value;
    for (node, sigma) in [(0, [1, 0, 2, 3]), (2, [3, 1, 0, 2]), (4, [2, 3, 1, 0])] {
        let map = |e: Endpoint| if e.node == node { Endpoint::new(node, sigma[e.slot]) } else { e };
        let links = g.links().iter().map(|l| Link { first: map(l.first), second: map(l.second) }).collect();
        let moved = SpinNetworkGraph::new(links).unwrap();
        let mut nodes = states.clone();
        nodes[node] = permute_qubits(&states[node], sigma);
        assert_eq!(vertex_amplitude(&nodes, &moved).unwrap().value, a, "node {node}");
        // without the state permutation the value generally changes
        assert!((vertex_amplitude(&states, &moved).unwrap().value - a).norm() > 1e-6);
    }
}

#[test]
fn real_table_conjugates_under_phi_reflection() {
    let g = FROZEN_CALIBRATION.graph();
    let table = basis_amplitude_table(&g);
    assert!(table.entries().iter().all(|z| z.im.abs() < 1e-15));
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let pts: Vec<(f64, f64)> = (0..5).map(|_| (rng.random_range(0.0..=PI), rng.random_range(0.01..PI))).collect();
        let amp = |sign: f64| {
            let states: Vec<StateVector> = pts
                .iter()
                .map(|&(t, f)| bloch_state(BlochPoint::wrapped(t, sign * f).unwrap()).embedded().clone())
                .collect();
            vertex_amplitude(&states, &g).unwrap().value
        };
        assert!((amp(-1.0) - amp(1.0).conj()).norm() < 1e-13);
    }
}

#[test]
fn malformed_inputs() {
    let g = SpinNetworkGraph::k5(SlotConvention::Cyclic);
    let four = vec![StateVector::zeros(4); 4];
    assert!(matches!(vertex_amplitude(&four, &g), Err(AmplitudeError::NodeCount { .. })));
    let mut wrong = vec![StateVector::zeros(4); 5];
    wrong[3] = StateVector::zeros(3);
    assert!(matches!(vertex_amplitude(&wrong, &g), Err(AmplitudeError::NodeQubits { node: 3, .. })));
    let mut links = g.links().to_vec();
    links[1] = links[0];
    assert!(matches!(SpinNetworkGraph::new(links), Err(AmplitudeError::MalformedGraph(_))));
    assert!(SpinNetworkGraph::new(g.links()[..9].to_vec()).is_err());
}

#[test]
fn convention_search_selects_the_frozen_calibration() {
    let search = search_convention();
    assert_eq!(search.best, FROZEN_CALIBRATION);
    assert_eq!(search.candidates.len(), 6);
}

#[test]
fn reference_row_has_a_root_two_outlier() {
    let report = table_report(FROZEN_CALIBRATION);
    assert_eq!(report.outlier.name, "C1");
    assert!((report.outlier.ratio.norm() - SQRT_2).abs() < 1e-4, "{:?}", report.outlier.ratio);
    assert!(report.outlier.others_max_relative_error < 1e-4);
    assert!(report.zero_entry_ratio < 1e-12);
    // the all-ten fit cannot absorb the factor
    assert!(report.max_relative_error > 0.1);
    let scale = fit_global_scale(&FROZEN_CALIBRATION.amplitudes(), &theory_values());
    assert_eq!(scale, report.scale);
}

#[test]
fn single_cell_sweep_equals_single_call() {
    let g = FROZEN_CALIBRATION.graph();
    let fixed = FROZEN_CALIBRATION.fixed_nodes();
    let (t, f) = (1.1, 2.3);
    let cells = amplitude_sweep(&fixed, &g, &[t], &[f], Execution::Sequential).unwrap();
    assert_eq!(cells.len(), 1);
    let mut nodes = fixed.clone();
    nodes.push(bloch_state(BlochPoint::new(t, f).unwrap()).embedded().clone());
    assert_eq!(cells[0].result, vertex_amplitude(&nodes, &g).unwrap());
}

#[test]
fn sweep_is_independent_of_execution() {
    let g = FROZEN_CALIBRATION.graph();
    let fixed = FROZEN_CALIBRATION.fixed_nodes();
    let thetas = [0.0, 0.5, 1.5, PI];
    let phis = [0.0, 1.0, 4.0];
    let a = amplitude_sweep(&fixed, &g, &thetas, &phis, Execution::Sequential).unwrap();
    let b = amplitude_sweep(&fixed, &g, &thetas, &phis, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn registry_amplitudes_are_finite() {
    let amps = FROZEN_CALIBRATION.amplitudes();
    assert_eq!(amps.len(), NAMED_STATES.len());
    assert!(amps.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn amplitude_is_bounded(seed in any::<u64>(), conv in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, states) = random_tuple(&mut rng);
        let a = vertex_amplitude(&states, &SpinNetworkGraph::k5(SlotConvention::ALL[conv])).unwrap();
        prop_assert!(a.magnitude <= 1.0 + 1e-12);
        prop_assert!(a.phase > -PI && a.phase <= PI);
    }
}

//! Sequential vs rayon execution of the data-parallel kernels.
//!
//! Build with `--no-default-features` to benchmark the fallback alone: both
//! arms then run sequentially.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spinfoam_core::amplitude::reference::FROZEN_CALIBRATION;
use spinfoam_core::amplitude::{
    amplitude_sweep, basis_amplitude_table_with, phi_grid, theta_grid, vertex_amplitude_bruteforce_with,
};
use spinfoam_core::exec::Execution;
use spinfoam_core::geometry::{reconstruct, GeometryTarget, SolverOptions};
use spinfoam_core::registry::NAMED_STATES;
use spinfoam_core::tetrahedron::{bloch_state, DihedralConvention};
use spinfoam_core::tomography::{simulate_experiment, ExperimentSetup, NoiseSpec, Target};
use spinfoam_core::StateVector;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn sweep(c: &mut Criterion) {
    let graph = FROZEN_CALIBRATION.graph();
    let fixed = FROZEN_CALIBRATION.fixed_nodes();
    let (thetas, phis) = (theta_grid(19), phi_grid(36));
    let mut group = c.benchmark_group("sweep_19x36");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| amplitude_sweep(black_box(&fixed), &graph, &thetas, &phis, exec).unwrap())
        });
    }
    group.finish();
}

fn bruteforce(c: &mut Criterion) {
    let graph = FROZEN_CALIBRATION.graph();
    let nodes: Vec<StateVector> = NAMED_STATES[..5].iter().map(|s| bloch_state(s.point()).embedded().clone()).collect();
    let mut group = c.benchmark_group("bruteforce_2^20");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| vertex_amplitude_bruteforce_with(black_box(&nodes), &graph, exec).unwrap())
        });
    }
    group.finish();
}

fn basis_table(c: &mut Criterion) {
    let graph = FROZEN_CALIBRATION.graph();
    let mut group = c.benchmark_group("basis_table");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| basis_amplitude_table_with(black_box(&graph), exec))
        });
    }
    group.finish();
}

fn reconstruction(c: &mut Criterion) {
    let target = GeometryTarget { areas: [1.0, 1.1, 0.9, 1.05], cos12: 0.2, cos13: 0.4, convention: DihedralConvention::Interior };
    let mut group = c.benchmark_group("reconstruct_32_restarts");
    for (name, exec) in MODES {
        let opts = SolverOptions { exec, ..SolverOptions::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| reconstruct(black_box(&target), &opts, &mut ChaCha8Rng::seed_from_u64(1)).unwrap())
        });
    }
    group.finish();
}

fn experiment(c: &mut Criterion) {
    let targets: Vec<Target> = NAMED_STATES.iter().map(|s| Target::new(s.name, s.point())).collect();
    let noise = NoiseSpec::default();
    let mut group = c.benchmark_group("experiment_10_targets");
    group.sample_size(10);
    for (name, exec) in MODES {
        let setup = ExperimentSetup { exec, ..ExperimentSetup::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| simulate_experiment(black_box(&targets), &noise, &setup).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweep, bruteforce, basis_table, reconstruction, experiment);
criterion_main!(benches);

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use spinfoam_core::amplitude::reference::{experiment_values, table_report, Calibration, FROZEN_CALIBRATION};
use spinfoam_core::amplitude::{
    amplitude_sweep, basis_amplitude_table, phi_grid, theta_grid, vertex_amplitude, vertex_amplitude_bruteforce,
    AmplitudeResult, SlotConvention,
};
use spinfoam_core::geometry::{expectations_to_geometry, reconstruct, GeometryTarget, Reconstruction, SolverOptions};
use spinfoam_core::registry::{named_state, NAMED_STATES};
use spinfoam_core::tetrahedron::{
    area_eigenvalue, bloch_state, dihedral_operator, fluctuation, fluctuation_from_operators, BlochPoint,
    DihedralConvention, DihedralPair, InvariantTensor,
};
use spinfoam_core::tomography::{simulate_experiment, ExperimentSetup, NmrParams, NoiseSpec, Target};
use spinfoam_core::spin::HalfInt;
use spinfoam_core::{Execution, StateVector};

use crate::config::{Command, RunConfig};
use crate::output::{Cell, Output};
use crate::CliError;

const DEFAULT_SEED: u64 = 2017;
const DEFAULT_GRID_THETA: usize = 37;
const DEFAULT_GRID_PHI: usize = 72;

pub fn execute(cfg: &RunConfig) -> Result<Output, CliError> {
    match cfg.command {
        Command::Tetra => tetra(cfg),
        Command::Fluct => fluct(cfg),
        Command::Reconstruct => reconstruct_cmd(cfg),
        Command::Amplitude => amplitude(cfg),
        Command::Sweep => sweep(cfg),
        Command::Table1 => table1(cfg),
        Command::Table2 => Ok(table2()),
        Command::Experiment => experiment(cfg),
    }
}

struct NamedPoint {
    name: String,
    point: BlochPoint,
}

fn lookup(name: &str) -> Result<&'static spinfoam_core::registry::NamedState, CliError> {
    named_state(name).ok_or_else(|| CliError::Config(format!("unknown state `{name}` (expected A0..E1)")))
}

/// Named states first, then `--theta/--phi` pairs; all ten named states
/// when neither is given.
fn points(cfg: &RunConfig) -> Result<Vec<NamedPoint>, CliError> {
    let mut out = Vec::new();
    for name in cfg.list("states") {
        if name.eq_ignore_ascii_case("all") {
            out.extend(NAMED_STATES.iter().map(|s| NamedPoint { name: s.name.into(), point: s.point() }));
        } else {
            let s = lookup(&name)?;
            out.push(NamedPoint { name: s.name.into(), point: s.point() });
        }
    }
    let thetas = cfg.angles("theta")?;
    let phis = cfg.angles("phi")?;
    if thetas.len() != phis.len() {
        return Err(CliError::Config(format!("{} theta values but {} phi values", thetas.len(), phis.len())));
    }
    for (i, (&theta, &phi)) in thetas.iter().zip(&phis).enumerate() {
        out.push(NamedPoint { name: format!("p{}", i + 1), point: BlochPoint::new(theta, phi)? });
    }
    if out.is_empty() {
        out.extend(NAMED_STATES.iter().map(|s| NamedPoint { name: s.name.into(), point: s.point() }));
    }
    Ok(out)
}

fn convention(cfg: &RunConfig) -> Result<DihedralConvention, CliError> {
    match cfg.single("convention")? {
        None => Ok(DihedralConvention::default()),
        Some(s) => s.parse().map_err(|_| CliError::Config(format!("unknown convention `{s}` (interior or normals)"))),
    }
}

fn seed(cfg: &RunConfig) -> Result<u64, CliError> {
    Ok(cfg.integer::<u64>("seed")?.unwrap_or(DEFAULT_SEED))
}

fn calibration(cfg: &RunConfig) -> Result<Calibration, CliError> {
    let slots = match cfg.single("slots")? {
        None => FROZEN_CALIBRATION.slots,
        Some(s) => SlotConvention::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(&s))
            .ok_or_else(|| CliError::Config(format!("unknown slot convention `{s}` (lexicographic, cyclic, cyclic-reversed)")))?,
    };
    let regular = match cfg.single("regular")? {
        None => FROZEN_CALIBRATION.regular,
        Some(name) => lookup(&name)?.name,
    };
    Ok(Calibration { slots, regular })
}

fn tetra(cfg: &RunConfig) -> Result<Output, CliError> {
    let conv = convention(cfg)?;
    let mut out = Output::new(vec!["name", "theta", "phi", "cos12", "cos13", "cos14", "cos23", "cos24", "cos34", "sum_1k"]);
    out.meta("convention", conv.to_string());
    for p in points(cfg)? {
        let psi = bloch_state(p.point);
        let values: Vec<f64> = DihedralPair::ALL
            .iter()
            .map(|&pair| dihedral_operator(pair, conv).expectation(psi.embedded()).map(|z| z.re))
            .collect::<Result<_, _>>()
            .map_err(spinfoam_core::tetrahedron::TetraError::from)?;
        let mut row: Vec<Cell> = vec![p.name.into(), p.point.theta().into(), p.point.phi().into()];
        row.extend(values.iter().map(|&v| Cell::Num(v)));
        row.push((values[0] + values[1] + values[2]).into());
        out.push(row);
    }
    Ok(out)
}

fn fluct(cfg: &RunConfig) -> Result<Output, CliError> {
    let mut out = Output::new(vec!["name", "theta", "phi", "delta", "delta_operators"]);
    for p in points(cfg)? {
        out.push(vec![
            p.name.into(),
            p.point.theta().into(),
            p.point.phi().into(),
            fluctuation(p.point).into(),
            fluctuation_from_operators(p.point).into(),
        ]);
    }
    Ok(out)
}

fn reconstruct_cmd(cfg: &RunConfig) -> Result<Output, CliError> {
    let conv = convention(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed(cfg)?);
    let opts = SolverOptions { exec: Execution::default(), ..SolverOptions::default() };
    let areas = cfg.numbers("areas")?;
    let (target, result): (GeometryTarget, Reconstruction) = if !areas.is_empty() {
        let areas: [f64; 4] = areas
            .try_into()
            .map_err(|v: Vec<f64>| CliError::Config(format!("`areas` needs four values, got {}", v.len())))?;
        let need = |key: &str| cfg.number(key)?.ok_or_else(|| CliError::Config(format!("`{key}` is required with `areas`")));
        let target = GeometryTarget { areas, cos12: need("cos12")?, cos13: need("cos13")?, convention: conv };
        (target, reconstruct(&target, &opts, &mut rng)?)
    } else {
        if cfg.parameters.contains_key("cos12") || cfg.parameters.contains_key("cos13") {
            return Err(CliError::Config("`cos12`/`cos13` need `areas`".into()));
        }
        let mut pts = points(cfg)?;
        if pts.len() != 1 || !(cfg.parameters.contains_key("states") || cfg.parameters.contains_key("theta")) {
            return Err(CliError::Config("reconstruct needs `areas` with `cos12`/`cos13`, or exactly one state or (theta, phi)".into()));
        }
        let p = pts.remove(0);
        let area = area_eigenvalue(HalfInt::HALF)?;
        let psi = bloch_state(p.point);
        let cos = |pair| -> Result<f64, CliError> {
            let v = dihedral_operator(pair, conv).expectation(psi.embedded()).map_err(spinfoam_core::tetrahedron::TetraError::from)?;
            Ok(v.re.clamp(-1.0, 1.0))
        };
        let target = GeometryTarget { areas: [area; 4], cos12: cos(DihedralPair::P12)?, cos13: cos(DihedralPair::P13)?, convention: conv };
        let result = match conv {
            DihedralConvention::Interior => expectations_to_geometry(p.point, &opts, &mut rng)?,
            DihedralConvention::Normals => reconstruct(&target, &opts, &mut rng)?,
        };
        (target, result)
    };

    let mut out = Output::new(vec!["solution", "vertex", "x", "y", "z"]);
    for (i, t) in result.solutions.iter().enumerate() {
        for (label, v) in ["A", "B", "C", "D"].iter().zip(t.vertices()) {
            out.push(vec![i.into(), (*label).into(), v.x.into(), v.y.into(), v.z.into()]);
        }
    }
    out.meta("areas", target.areas.to_vec());
    out.meta("cos12", target.cos12);
    out.meta("cos13", target.cos13);
    out.meta("convention", conv.to_string());
    out.meta("residual", result.residual);
    out.meta("volume", result.tetrahedron.volume());
    out.meta("sorted_edge_lengths", result.tetrahedron.sorted_edge_lengths().to_vec());
    out.meta("solutions", result.solutions.len());
    Ok(out)
}

#[derive(Clone, Copy)]
enum Route {
    Sequential,
    BruteForce,
    Table,
}

fn route(cfg: &RunConfig) -> Result<Route, CliError> {
    match cfg.single("route")?.as_deref().map(str::to_ascii_lowercase).as_deref() {
        None | Some("sequential") => Ok(Route::Sequential),
        Some("bruteforce") | Some("brute-force") => Ok(Route::BruteForce),
        Some("table") => Ok(Route::Table),
        Some(other) => Err(CliError::Config(format!("unknown route `{other}` (sequential, bruteforce, table)"))),
    }
}

fn amplitude_cells(result: &AmplitudeResult) -> Vec<Cell> {
    vec![result.value.re.into(), result.value.im.into(), result.magnitude.into(), result.phase.into()]
}

fn amplitude(cfg: &RunConfig) -> Result<Output, CliError> {
    let cal = calibration(cfg)?;
    let graph = cal.graph();
    let route = route(cfg)?;
    let regular = bloch_state(lookup(cal.regular)?.point());

    let has = |key: &str| cfg.parameters.contains_key(key);
    let node_sets: Vec<(String, [InvariantTensor; 5])> = if has("nodes") {
        if has("states") || has("theta") || has("phi") {
            return Err(CliError::Config("`nodes` cannot be combined with `states` or `theta`/`phi`".into()));
        }
        let names = cfg.list("nodes");
        let tensors: Vec<InvariantTensor> =
            names.iter().map(|n| Ok(bloch_state(lookup(n)?.point()))).collect::<Result<_, CliError>>()?;
        let tensors: [InvariantTensor; 5] = tensors
            .try_into()
            .map_err(|v: Vec<InvariantTensor>| CliError::Config(format!("`nodes` needs five states, got {}", v.len())))?;
        vec![(names.join("-"), tensors)]
    } else {
        points(cfg)?
            .into_iter()
            .map(|p| (p.name, [regular.clone(), regular.clone(), regular.clone(), regular.clone(), bloch_state(p.point)]))
            .collect()
    };

    let table = matches!(route, Route::Table).then(|| basis_amplitude_table(&graph));
    let scale = table_report(cal).scale;
    let mut out = Output::new(vec!["name", "theta5", "phi5", "re", "im", "abs", "phase", "table_re", "table_im"]);
    out.meta("slots", cal.slots.to_string());
    out.meta("regular", cal.regular);
    out.meta("scale_re", scale.re);
    out.meta("scale_im", scale.im);
    for (name, tensors) in node_sets {
        let states: Vec<StateVector> = tensors.iter().map(|t| t.embedded().clone()).collect();
        let result = match route {
            Route::Sequential => vertex_amplitude(&states, &graph)?,
            Route::BruteForce => vertex_amplitude_bruteforce(&states, &graph)?,
            Route::Table => table.as_ref().expect("built for table route").amplitude(&tensors),
        };
        let scaled = result.value * scale;
        let p5 = tensors[4].point();
        let mut row: Vec<Cell> = vec![name.into(), p5.theta().into(), p5.phi().into()];
        row.extend(amplitude_cells(&result));
        row.extend([scaled.re.into(), scaled.im.into()]);
        out.push(row);
    }
    Ok(out)
}

fn sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    let cal = calibration(cfg)?;
    let n_theta = cfg.integer::<usize>("grid-theta")?.unwrap_or(DEFAULT_GRID_THETA);
    let n_phi = cfg.integer::<usize>("grid-phi")?.unwrap_or(DEFAULT_GRID_PHI);
    if n_theta == 0 || n_phi == 0 {
        return Err(CliError::Config("sweep grids must be non-empty".into()));
    }
    let cells = amplitude_sweep(&cal.fixed_nodes(), &cal.graph(), &theta_grid(n_theta), &phi_grid(n_phi), Execution::default())?;
    let mut out = Output::new(vec!["theta", "phi", "re", "im", "abs", "phase"]);
    out.meta("slots", cal.slots.to_string());
    out.meta("regular", cal.regular);
    for c in &cells {
        let mut row: Vec<Cell> = vec![c.theta.into(), c.phi.into()];
        row.extend(amplitude_cells(&c.result));
        out.push(row);
    }
    Ok(out)
}

fn table1(cfg: &RunConfig) -> Result<Output, CliError> {
    let cal = calibration(cfg)?;
    let report = table_report(cal);
    let experiment = experiment_values();
    let mut out = Output::new(vec![
        "name", "theta", "phi", "raw_re", "raw_im", "scaled_re", "scaled_im", "theory_re", "theory_im", "experiment_re",
        "experiment_im", "relative_error", "slots", "regular", "scale_re", "scale_im",
    ]);
    for ((entry, state), exp) in report.entries.iter().zip(&NAMED_STATES).zip(&experiment) {
        out.push(vec![
            entry.name.into(),
            state.theta.into(),
            state.phi.into(),
            entry.raw.re.into(),
            entry.raw.im.into(),
            entry.scaled.re.into(),
            entry.scaled.im.into(),
            entry.theory.re.into(),
            entry.theory.im.into(),
            exp.re.into(),
            exp.im.into(),
            entry.relative_error.into(),
            cal.slots.to_string().into(),
            cal.regular.into(),
            report.scale.re.into(),
            report.scale.im.into(),
        ]);
    }
    out.meta("slots", cal.slots.to_string());
    out.meta("regular", cal.regular);
    out.meta("scale_re", report.scale.re);
    out.meta("scale_im", report.scale.im);
    out.meta("max_relative_error", report.max_relative_error);
    out.meta("zero_entry_max_abs", report.zero_entry_ratio);
    out.meta(
        "outlier",
        json!({
            "name": report.outlier.name,
            "others_max_relative_error": report.outlier.others_max_relative_error,
            "ratio_re": report.outlier.ratio.re,
            "ratio_im": report.outlier.ratio.im,
        }),
    );
    Ok(out)
}

fn table2() -> Output {
    let mut out = Output::new(vec![
        "name", "theta", "phi", "delta", "delta_operators", "delta_listed", "delta_measured", "flagged", "note",
    ]);
    for s in &NAMED_STATES {
        let delta = fluctuation(s.point());
        let flagged = (delta - s.listed_delta).abs() > 1e-9;
        let note = if flagged {
            Cell::Text(format!("listed {:.4} differs from formula {:.4}", s.listed_delta, delta))
        } else {
            Cell::Empty
        };
        out.push(vec![
            s.name.into(),
            s.theta.into(),
            s.phi.into(),
            delta.into(),
            fluctuation_from_operators(s.point()).into(),
            s.listed_delta.into(),
            s.measured_delta.into(),
            flagged.into(),
            note,
        ]);
    }
    out
}

fn experiment(cfg: &RunConfig) -> Result<Output, CliError> {
    let defaults = NoiseSpec::default();
    let noise = NoiseSpec {
        depolarizing_p: cfg.number("depolarizing")?.unwrap_or(defaults.depolarizing_p),
        rotation_angle_sd: cfg.number("rotation-sd")?.unwrap_or(defaults.rotation_angle_sd),
        seed: seed(cfg)?,
    };
    let mut params = NmrParams::placeholder();
    let nu = cfg.numbers("nu")?;
    if !nu.is_empty() {
        params.nu = nu.try_into().map_err(|v: Vec<f64>| CliError::Config(format!("`nu` needs 4 values, got {}", v.len())))?;
    }
    let jcoup = cfg.numbers("jcoup")?;
    if !jcoup.is_empty() {
        if jcoup.len() != 16 {
            return Err(CliError::Config(format!("`jcoup` needs 16 values (4x4, row major), got {}", jcoup.len())));
        }
        for (i, v) in jcoup.iter().enumerate() {
            params.jcoup[i / 4][i % 4] = *v;
        }
    }
    if let Some(eps) = cfg.number("epsilon")? {
        params.epsilon = eps;
    }
    let targets: Vec<Target> = points(cfg)?.into_iter().map(|p| Target::new(p.name, p.point)).collect();
    let setup = ExperimentSetup { params, ..ExperimentSetup::default() };
    let report = simulate_experiment(&targets, &noise, &setup)?;

    let mut out = Output::new(vec![
        "name", "theta", "phi", "fidelity", "purified_overlap", "delta_theory", "delta_measured", "cos12_theory",
        "cos13_theory", "cos14_theory", "cos12_measured", "cos13_measured", "cos14_measured", "amp_theory_re",
        "amp_theory_im", "amp_measured_re", "amp_measured_im", "amp_deviation",
    ]);
    for t in &report.targets {
        let a = &t.amplitude;
        out.push(vec![
            t.name.clone().into(),
            t.theta.into(),
            t.phi.into(),
            t.fidelity.into(),
            t.purified_overlap.into(),
            t.delta_theory.into(),
            t.delta_measured.into(),
            t.dihedral_theory.cos12.into(),
            t.dihedral_theory.cos13.into(),
            t.dihedral_theory.cos14.into(),
            t.dihedral_measured.cos12.into(),
            t.dihedral_measured.cos13.into(),
            t.dihedral_measured.cos14.into(),
            a.theory_table.re.into(),
            a.theory_table.im.into(),
            a.measured_table.re.into(),
            a.measured_table.im.into(),
            a.deviation_table.into(),
        ]);
    }
    out.document = Some(serde_json::to_value(&report).expect("report serialises"));
    Ok(out)
}

//! Classical Euclidean tetrahedra.
//!
//! Vertices use the gauge `A = 0`, `B = (a, 0, 0)`, `C = (b, c, 0)`,
//! `D = (d, e, f)` with `a, c, f > 0`. Faces are labelled
//! `1 = ABC`, `2 = ACD`, `3 = ABD`, `4 = BCD`. Areas are in units of
//! `8πℓ_P²` when the data comes from a quantum tetrahedron.

use nalgebra::{Matrix6, Vector3, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::tetrahedron::{
    area_eigenvalue, dihedral_expectation, BlochPoint, DihedralConvention, DihedralPair,
    TetraError,
};
use crate::spin::HalfInt;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate tetrahedron (normalised volume {volume:e})")]
    Degenerate { volume: f64 },
    #[error("infeasible geometry: no closed tetrahedron found, best residual {best_residual:e}")]
    Infeasible { best_residual: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Tetra(#[from] TetraError),
}

pub type Point = Vector3<f64>;

/// Outward area vectors `E^(1..4)` of the four faces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaVectorSet {
    pub vectors: [Vector3<f64>; 4],
}

impl AreaVectorSet {
    pub fn areas(&self) -> [f64; 4] {
        self.vectors.map(|v| v.norm())
    }

    /// Cosine between faces `k` and `m` under `convention`.
    pub fn dihedral_cos(&self, pair: DihedralPair, convention: DihedralConvention) -> f64 {
        let a = self.vectors[pair.k() - 1];
        let b = self.vectors[pair.m() - 1];
        convention.sign() * a.dot(&b) / (a.norm() * b.norm())
    }
}

/// `‖E¹ + E² + E³ + E⁴‖`.
pub fn closure_defect_classical(set: &AreaVectorSet) -> f64 {
    set.vectors.iter().sum::<Vector3<f64>>().norm()
}

/// Gauge-fixed tetrahedron parameters `{a, b, c, d, e, f}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TetrahedronVertices {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

const DEGENERACY_TOL: f64 = 1e-9;

impl TetrahedronVertices {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<Self, GeometryError> {
        let t = Self { a, b, c, d, e, f };
        if !(a > 0.0 && c > 0.0 && f > 0.0) {
            return Err(GeometryError::InvalidInput(format!(
                "gauge requires a, c, f > 0 (got a={a}, c={c}, f={f})"
            )));
        }
        t.check_volume()?;
        Ok(t)
    }

    /// Moves arbitrary vertices into the gauge; mirror images are folded onto
    /// `f > 0`.
    pub fn from_points(points: [Point; 4]) -> Result<Self, GeometryError> {
        let [pa, pb, pc, pd] = points;
        let ab = pb - pa;
        let a = ab.norm();
        if a == 0.0 {
            return Err(GeometryError::Degenerate { volume: 0.0 });
        }
        let ex = ab / a;
        let ac = pc - pa;
        let b = ac.dot(&ex);
        let perp = ac - ex * b;
        let c = perp.norm();
        if c <= DEGENERACY_TOL * a {
            return Err(GeometryError::Degenerate { volume: 0.0 });
        }
        let ey = perp / c;
        let ez = ex.cross(&ey);
        let ad = pd - pa;
        let t = Self { a, b, c, d: ad.dot(&ex), e: ad.dot(&ey), f: ad.dot(&ez).abs() };
        t.check_volume()?;
        Ok(t)
    }

    fn from_vector(x: &Vector6<f64>) -> Self {
        Self { a: x[0], b: x[1], c: x[2], d: x[3], e: x[4], f: x[5] }
    }

    fn to_vector(self) -> Vector6<f64> {
        Vector6::new(self.a, self.b, self.c, self.d, self.e, self.f)
    }

    /// Flips coordinate axes so that `a, c, f ≥ 0`.
    fn gauge_fixed(self) -> Self {
        let mut t = self;
        if t.a < 0.0 {
            t.a = -t.a;
            t.b = -t.b;
            t.d = -t.d;
        }
        if t.c < 0.0 {
            t.c = -t.c;
            t.e = -t.e;
        }
        t.f = t.f.abs();
        t
    }

    pub fn vertices(&self) -> [Point; 4] {
        [
            Point::zeros(),
            Point::new(self.a, 0.0, 0.0),
            Point::new(self.b, self.c, 0.0),
            Point::new(self.d, self.e, self.f),
        ]
    }

    pub fn volume(&self) -> f64 {
        (self.a * self.c * self.f).abs() / 6.0
    }

    /// Volume divided by `(mean face area)^{3/2}`; scale invariant.
    pub fn normalised_volume(&self) -> f64 {
        let areas = face_vectors(&self.vertices()).map(|v| v.norm());
        let mean = areas.iter().sum::<f64>() / 4.0;
        if mean == 0.0 {
            return 0.0;
        }
        self.volume() / mean.powf(1.5)
    }

    fn check_volume(&self) -> Result<(), GeometryError> {
        let volume = self.normalised_volume();
        if !(volume > DEGENERACY_TOL) {
            return Err(GeometryError::Degenerate { volume });
        }
        Ok(())
    }

    /// The six edge lengths `AB, AC, AD, BC, BD, CD`.
    pub fn edge_lengths(&self) -> [f64; 6] {
        let [a, b, c, d] = self.vertices();
        [(b - a).norm(), (c - a).norm(), (d - a).norm(), (c - b).norm(), (d - b).norm(), (d - c).norm()]
    }

    pub fn sorted_edge_lengths(&self) -> [f64; 6] {
        let mut e = self.edge_lengths();
        e.sort_by(f64::total_cmp);
        e
    }
}

/// Outward area vector of triangle `(p, q, r)` seen from the opposite vertex.
fn outward(p: Point, q: Point, r: Point, opposite: Point) -> Vector3<f64> {
    let n = (q - p).cross(&(r - p)) * 0.5;
    if n.dot(&(opposite - p)) > 0.0 {
        -n
    } else {
        n
    }
}

fn face_vectors(v: &[Point; 4]) -> [Vector3<f64>; 4] {
    let [a, b, c, d] = *v;
    [outward(a, b, c, d), outward(a, c, d, b), outward(a, b, d, c), outward(b, c, d, a)]
}

/// Outward area vectors in face order `ABC, ACD, ABD, BCD`.
pub fn areas_from_vertices(t: &TetrahedronVertices) -> Result<AreaVectorSet, GeometryError> {
    t.check_volume()?;
    Ok(AreaVectorSet { vectors: face_vectors(&t.vertices()) })
}

/// Target data for [`reconstruct`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometryTarget {
    pub areas: [f64; 4],
    pub cos12: f64,
    pub cos13: f64,
    pub convention: DihedralConvention,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Iteration stops once the residual norm drops below this.
    pub convergence_tol: f64,
    /// A solution is accepted when its residual norm is below this.
    pub acceptance_tol: f64,
    pub exec: Execution,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 300,
            convergence_tol: 1e-12,
            acceptance_tol: 1e-8,
            exec: Execution::Sequential,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reconstruction {
    /// Lowest-residual accepted solution.
    pub tetrahedron: TetrahedronVertices,
    pub residual: f64,
    /// Every distinct accepted solution, best first.
    pub solutions: Vec<TetrahedronVertices>,
}

fn residuals(x: &Vector6<f64>, target: &GeometryTarget, scale: f64) -> Vector6<f64> {
    let t = TetrahedronVertices::from_vector(x);
    let set = AreaVectorSet { vectors: face_vectors(&t.vertices()) };
    let areas = set.areas();
    let cos = |p| {
        let v = set.dihedral_cos(p, target.convention);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    Vector6::new(
        areas[0] / scale - target.areas[0] / scale,
        areas[1] / scale - target.areas[1] / scale,
        areas[2] / scale - target.areas[2] / scale,
        areas[3] / scale - target.areas[3] / scale,
        cos(DihedralPair::P12) - target.cos12,
        cos(DihedralPair::P13) - target.cos13,
    )
}

fn jacobian(x: &Vector6<f64>, target: &GeometryTarget, scale: f64) -> Matrix6<f64> {
    let mut jac = Matrix6::zeros();
    for i in 0..6 {
        let h = 1e-6 * x[i].abs().max(scale.sqrt());
        let mut xp = *x;
        let mut xm = *x;
        xp[i] += h;
        xm[i] -= h;
        let col = (residuals(&xp, target, scale) - residuals(&xm, target, scale)) / (2.0 * h);
        jac.set_column(i, &col);
    }
    jac
}

/// Damped least squares from a single starting point. Returns the final
/// parameters and residual norm.
fn levenberg_marquardt(
    start: Vector6<f64>,
    target: &GeometryTarget,
    scale: f64,
    opts: &SolverOptions,
) -> (Vector6<f64>, f64) {
    let mut x = start;
    let mut r = residuals(&x, target, scale);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..opts.max_iterations {
        if cost.sqrt() < opts.convergence_tol {
            break;
        }
        let jac = jacobian(&x, target, scale);
        let jt = jac.transpose();
        let normal = jt * jac;
        let gradient = jt * r;
        let mut improved = false;
        while lambda < 1e12 {
            let mut damped = normal;
            for i in 0..6 {
                damped[(i, i)] += lambda * (normal[(i, i)] + 1e-12);
            }
            let Some(step) = damped.lu().solve(&(-gradient)) else {
                lambda *= 4.0;
                continue;
            };
            let trial = x + step;
            let r_trial = residuals(&trial, target, scale);
            let c_trial = r_trial.norm_squared();
            if c_trial < cost {
                let tiny = step.norm() < 1e-16 * (1.0 + x.norm());
                x = trial;
                r = r_trial;
                cost = c_trial;
                lambda = (lambda / 3.0).max(1e-15);
                improved = !tiny;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (x, cost.sqrt())
}

fn regular_start(mean_area: f64) -> Vector6<f64> {
    // equilateral tetrahedron whose faces have the mean target area
    let l = (4.0 * mean_area / 3f64.sqrt()).sqrt();
    Vector6::new(l, l / 2.0, l * 3f64.sqrt() / 2.0, l / 2.0, l * 3f64.sqrt() / 6.0, l * (2.0f64 / 3.0).sqrt())
}

/// Solves for `{a, …, f}` reproducing four face areas and the dihedral
/// cosines of pairs (1,2) and (1,3).
///
/// Restart 0 starts from the equilateral tetrahedron; the others perturb it
/// with seeds drawn from `rng`, so results are reproducible and independent
/// of `opts.exec`.
pub fn reconstruct<R: Rng + ?Sized>(
    target: &GeometryTarget,
    opts: &SolverOptions,
    rng: &mut R,
) -> Result<Reconstruction, GeometryError> {
    if target.areas.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
        return Err(GeometryError::InvalidInput(format!("areas must be positive, got {:?}", target.areas)));
    }
    for c in [target.cos12, target.cos13] {
        if !(-1.0..=1.0).contains(&c) {
            return Err(GeometryError::InvalidInput(format!("dihedral cosine {c} outside [-1, 1]")));
        }
    }
    let mean_area = target.areas.iter().sum::<f64>() / 4.0;
    let base = regular_start(mean_area);
    let length = mean_area.sqrt();
    let seeds: Vec<u64> = (0..opts.restarts.max(1)).map(|_| rng.random()).collect();

    let runs = opts.exec.map_range(seeds.len(), |i| {
        let start = if i == 0 {
            base
        } else {
            let mut local = ChaCha8Rng::seed_from_u64(seeds[i]);
            base.map(|v| v + length * local.random_range(-0.6..0.6))
        };
        let (x, residual) = levenberg_marquardt(start, target, mean_area, opts);
        let t = TetrahedronVertices::from_vector(&x).gauge_fixed();
        (t, residual)
    });

    let mut best_residual = f64::INFINITY;
    let mut degenerate_volume: Option<f64> = None;
    let mut accepted: Vec<(TetrahedronVertices, f64)> = Vec::new();
    for (t, residual) in runs {
        best_residual = best_residual.min(residual);
        if !(residual < opts.acceptance_tol) {
            continue;
        }
        let volume = t.normalised_volume();
        if !(volume > DEGENERACY_TOL) {
            degenerate_volume = Some(volume);
            continue;
        }
        accepted.push((t, residual));
    }
    accepted.sort_by(|x, y| x.1.total_cmp(&y.1));

    let mut solutions: Vec<TetrahedronVertices> = Vec::new();
    for (t, _) in &accepted {
        let dup = solutions.iter().any(|s| {
            (s.to_vector() - t.to_vector()).norm() < 1e-6 * length
        });
        if !dup {
            solutions.push(*t);
        }
    }
    match accepted.first() {
        Some(&(tetrahedron, residual)) => Ok(Reconstruction { tetrahedron, residual, solutions }),
        None => match degenerate_volume {
            Some(volume) => Err(GeometryError::Degenerate { volume }),
            None => Err(GeometryError::Infeasible { best_residual }),
        },
    }
}

/// Classical tetrahedron carrying the mean geometry of the quantum
/// tetrahedron at `point`: four faces of area `√(3/4)` and the interior
/// expectations of `cos θ12`, `cos θ13`.
pub fn expectations_to_geometry<R: Rng + ?Sized>(
    point: BlochPoint,
    opts: &SolverOptions,
    rng: &mut R,
) -> Result<Reconstruction, GeometryError> {
    let area = area_eigenvalue(HalfInt::HALF)?;
    let clamp = |x: f64| x.clamp(-1.0, 1.0);
    let target = GeometryTarget {
        areas: [area; 4],
        cos12: clamp(dihedral_expectation(point, DihedralPair::P12)),
        cos13: clamp(dihedral_expectation(point, DihedralPair::P13)),
        convention: DihedralConvention::Interior,
    };
    reconstruct(&target, opts, rng)
}

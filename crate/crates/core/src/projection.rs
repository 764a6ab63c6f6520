//! Damped Newton projection of seed points onto a level set of the potential.
//!
//! Every seed is solved independently with no shared mutable state, so a
//! cloud can be mapped over any [`Executor`] and give bit-identical results.

use alloc::vec::Vec;

use crate::boundary::BoundarySet;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::solid_angle::accumulate;
use crate::vec3::{Point3, Vec3};

/// Newton solver settings. Lengths are absolute; [`SolverConfig::for_set`]
/// derives the defaults from the scene's bounding-box diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Target potential (2π-free convention).
    pub omega_c: f64,
    pub damping: f64,
    pub max_step: f64,
    pub tol_omega: f64,
    pub max_iterations: usize,
    pub grad_floor: f64,
    pub escape_radius: f64,
}

impl SolverConfig {
    pub fn for_set(set: &BoundarySet, omega_c: f64) -> Self {
        let diag = set.diagonal();
        SolverConfig {
            omega_c,
            damping: 1.0,
            max_step: 0.25 * diag,
            tol_omega: 1e-10,
            max_iterations: 100,
            grad_floor: 1e-14 / diag,
            escape_radius: 10.0 * diag,
        }
    }

    pub fn with_omega(mut self, omega_c: f64) -> Self {
        self.omega_c = omega_c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::DegenerateInput("damping must lie in (0, 1]"));
        }
        if !(self.tol_omega > 0.0) {
            return Err(Error::DegenerateInput("tol_omega must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::DegenerateInput("max_iterations must be at least 1"));
        }
        if !(self.max_step > 0.0) || !(self.escape_radius > 0.0) || !(self.grad_floor >= 0.0) {
            return Err(Error::DegenerateInput("step cap, escape radius and gradient floor must be positive"));
        }
        if !self.omega_c.is_finite() {
            return Err(Error::DegenerateInput("non-finite target potential"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionStatus {
    Converged,
    MaxIterations,
    StationaryGradient,
    Escaped,
    HitBoundary,
}

impl ProjectionStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ProjectionStatus::Converged => "Converged",
            ProjectionStatus::MaxIterations => "MaxIterations",
            ProjectionStatus::StationaryGradient => "StationaryGradient",
            ProjectionStatus::Escaped => "Escaped",
            ProjectionStatus::HitBoundary => "HitBoundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionResult {
    pub point: Point3,
    /// Newton steps taken.
    pub iterations: usize,
    /// `|potential − target|` at `point`; infinite if never evaluated.
    pub residual: f64,
    pub status: ProjectionStatus,
}

impl ProjectionResult {
    pub fn converged(&self) -> bool {
        self.status == ProjectionStatus::Converged
    }
}

/// A prescribed potential `Ω_t(r)` with its gradient.
pub trait TargetField: Sync {
    fn value(&self, r: Point3) -> f64;
    fn gradient(&self, r: Point3) -> Vec3;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantTarget(pub f64);

impl TargetField for ConstantTarget {
    fn value(&self, _: Point3) -> f64 {
        self.0
    }
    fn gradient(&self, _: Point3) -> Vec3 {
        Vec3::ZERO
    }
}

/// `Ω_t(r) = base + slope · r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineTarget {
    pub base: f64,
    pub slope: Vec3,
}

impl TargetField for AffineTarget {
    fn value(&self, r: Point3) -> f64 {
        self.base + self.slope.dot(r)
    }
    fn gradient(&self, _: Point3) -> Vec3 {
        self.slope
    }
}

/// Raw Newton displacement `−(Ω − Ω_c) ∇Ω / |∇Ω|²`, undamped and uncapped.
pub fn newton_step(set: &BoundarySet, r: Point3, cfg: &SolverConfig) -> Result<Vec3> {
    let (omega, grad) = accumulate(set, r, true, true)?;
    let g2 = grad.norm_sq();
    if !(grad.norm() > cfg.grad_floor) {
        return Err(Error::StationaryGradient);
    }
    Ok(grad * (-(omega - cfg.omega_c) / g2))
}

fn solve(
    set: &BoundarySet,
    seed: Point3,
    cfg: &SolverConfig,
    target: &dyn TargetField,
    plane_normal: Option<Vec3>,
) -> ProjectionResult {
    let center = set.bounding_box().center();
    let mut r = seed;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let done = |point, residual, iterations, status| ProjectionResult {
        point,
        iterations,
        residual,
        status,
    };
    loop {
        if !r.is_finite() || (r - center).norm() > cfg.escape_radius {
            return done(r, residual, iterations, ProjectionStatus::Escaped);
        }
        let (omega, grad) = match accumulate(set, r, true, true) {
            Ok(v) => v,
            Err(Error::ApexOnBoundaryLine { .. }) => {
                return done(r, residual, iterations, ProjectionStatus::HitBoundary)
            }
            Err(_) => return done(r, residual, iterations, ProjectionStatus::Escaped),
        };
        let f = omega - target.value(r);
        let mut g = grad - target.gradient(r);
        if let Some(n) = plane_normal {
            g = g.reject(n);
        }
        residual = f.abs();
        if residual <= cfg.tol_omega {
            return done(r, residual, iterations, ProjectionStatus::Converged);
        }
        if iterations >= cfg.max_iterations {
            return done(r, residual, iterations, ProjectionStatus::MaxIterations);
        }
        let gn = g.norm();
        if !(gn > cfg.grad_floor) {
            return done(r, residual, iterations, ProjectionStatus::StationaryGradient);
        }
        let mut step = g * (-f / (gn * gn) * cfg.damping);
        let len = step.norm();
        if len > cfg.max_step {
            step = step * (cfg.max_step / len);
        }
        r += step;
        iterations += 1;
    }
}

/// Iterate damped, capped Newton steps from `seed` to the level `cfg.omega_c`.
pub fn project_point(set: &BoundarySet, seed: Point3, cfg: &SolverConfig) -> ProjectionResult {
    solve(set, seed, cfg, &ConstantTarget(cfg.omega_c), None)
}

/// Newton on `potential(r) − Ω_t(r)`; `cfg.omega_c` is ignored.
pub fn project_point_variable_target(
    set: &BoundarySet,
    seed: Point3,
    target: &dyn TargetField,
    cfg: &SolverConfig,
) -> ProjectionResult {
    solve(set, seed, cfg, target, None)
}

/// Newton restricted to the plane through `seed` with normal `plane_normal`
/// (the gradient is replaced by its in-plane part).
pub fn project_point_in_plane(
    set: &BoundarySet,
    seed: Point3,
    plane_normal: Vec3,
    cfg: &SolverConfig,
) -> ProjectionResult {
    let n = plane_normal.normalized().unwrap_or(Vec3::Z);
    solve(set, seed, cfg, &ConstantTarget(cfg.omega_c), Some(n))
}

/// Elementwise [`project_point`]; output order follows `seeds`.
pub fn project_cloud<E: Executor>(
    set: &BoundarySet,
    seeds: &[Point3],
    cfg: &SolverConfig,
    exec: &E,
) -> Vec<ProjectionResult> {
    exec.map(seeds, &|s: &Point3| project_point(set, *s, cfg))
}

/// One Jacobi pass of tangential Laplacian smoothing followed by a full
/// re-projection of every point.
///
/// `neighbors[i]` lists the indices averaged for point `i`; points with no
/// neighbours only get re-projected.
pub fn tangential_relax<E: Executor>(
    set: &BoundarySet,
    points: &[Point3],
    neighbors: &[Vec<usize>],
    cfg: &SolverConfig,
    smoothing_weight: f64,
    exec: &E,
) -> Vec<ProjectionResult> {
    let idx: Vec<usize> = (0..points.len()).collect();
    exec.map(&idx, &|&i: &usize| {
        let p = points[i];
        let nb = neighbors.get(i).map(|v| v.as_slice()).unwrap_or(&[]);
        let mut moved = p;
        if !nb.is_empty() && smoothing_weight != 0.0 {
            let centroid = nb.iter().fold(Vec3::ZERO, |acc, &j| acc + points[j]) / nb.len() as f64;
            let mut d = (centroid - p) * smoothing_weight;
            if let Ok(g) = crate::gradient::gradient(set, p) {
                if let Some(n) = g.normalized() {
                    d = d.reject(n);
                }
            }
            moved = p + d;
        }
        project_point(set, moved, cfg)
    })
}

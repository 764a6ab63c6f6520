//! Seeding, mesh assembly, planar sections and principal-line tracing.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::boundary::BoundarySet;
use crate::curvature::{self, CurvatureFrame};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::gradient::gradient;
use crate::projection::{project_point, project_point_in_plane, ProjectionResult, SolverConfig};
use crate::spatial::{median, median_nearest_spacing, PointIndex};
use crate::vec3::{Point3, Vec3};

pub type Polyline = Vec<Point3>;

/// Regular lattice of seeds over a parallelogram, pushed `offset` along the
/// region normal `normalize(u × v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedGrid {
    /// Corner of the region.
    pub origin: Point3,
    /// Full edge vector along the `i` index.
    pub u: Vec3,
    /// Full edge vector along the `j` index.
    pub v: Vec3,
    pub nx: usize,
    pub ny: usize,
    pub offset: f64,
}

impl SeedGrid {
    pub fn new(origin: Point3, u: Vec3, v: Vec3, nx: usize, ny: usize, offset: f64) -> Result<Self> {
        let g = SeedGrid { origin, u, v, nx, ny, offset };
        g.validate()?;
        Ok(g)
    }

    /// Grid over `[x0, x1] × [y0, y1]` in the plane `z = const`.
    pub fn xy(x0: f64, y0: f64, x1: f64, y1: f64, z: f64, nx: usize, ny: usize) -> Result<Self> {
        SeedGrid::new(
            Vec3::new(x0, y0, z),
            Vec3::new(x1 - x0, 0.0, 0.0),
            Vec3::new(0.0, y1 - y0, 0.0),
            nx,
            ny,
            0.0,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::DegenerateInput("seed grid needs at least 2 points per side"));
        }
        if !(self.origin.is_finite() && self.u.is_finite() && self.v.is_finite() && self.offset.is_finite()) {
            return Err(Error::DegenerateInput("non-finite seed grid"));
        }
        let area = self.u.cross(self.v).norm();
        if !(area > 1e-12 * self.u.norm() * self.v.norm()) {
            return Err(Error::DegenerateInput("seed grid axes are dependent"));
        }
        Ok(())
    }

    /// Unit normal of the region.
    pub fn normal(&self) -> Vec3 {
        self.u.cross(self.v).normalized().unwrap_or(Vec3::Z)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index `j·nx + i`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn point(&self, i: usize, j: usize) -> Point3 {
        let s = i as f64 / (self.nx - 1) as f64;
        let t = j as f64 / (self.ny - 1) as f64;
        self.origin + self.u * s + self.v * t + self.normal() * self.offset
    }

    /// Larger of the two lattice steps.
    pub fn spacing(&self) -> f64 {
        (self.u.norm() / (self.nx - 1) as f64).max(self.v.norm() / (self.ny - 1) as f64)
    }

    /// 4-neighbours of interior lattice points; border points get none.
    pub fn lattice_neighbors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len()];
        for j in 1..self.ny.saturating_sub(1) {
            for i in 1..self.nx.saturating_sub(1) {
                out[self.index(i, j)] = vec![
                    self.index(i - 1, j),
                    self.index(i + 1, j),
                    self.index(i, j - 1),
                    self.index(i, j + 1),
                ];
            }
        }
        out
    }
}

/// All lattice points, row-major.
pub fn seed_points(grid: &SeedGrid) -> Result<Vec<Point3>> {
    grid.validate()?;
    let mut out = Vec::with_capacity(grid.len());
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            out.push(grid.point(i, j));
        }
    }
    Ok(out)
}

/// Triangle mesh over converged points.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SurfaceMesh {
    pub vertices: Vec<Point3>,
    pub faces: Vec<[usize; 3]>,
    /// Seed index of each vertex (identity for meshes read from file).
    pub seed_index: Vec<usize>,
}

impl SurfaceMesh {
    pub fn from_parts(vertices: Vec<Point3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        if faces.iter().flatten().any(|&i| i >= vertices.len()) {
            return Err(Error::DegenerateInput("face refers to a missing vertex"));
        }
        let seed_index = (0..vertices.len()).collect();
        Ok(SurfaceMesh { vertices, faces, seed_index })
    }

    pub fn face_points(&self, f: usize) -> [Point3; 3] {
        self.faces[f].map(|i| self.vertices[i])
    }

    /// Unnormalised face normal (twice the area).
    pub fn face_area_vector(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.face_points(f);
        (b - a).cross(c - a)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .faces
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (b, c), (c, a)])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    pub fn median_edge_length(&self) -> Option<f64> {
        let mut l: Vec<f64> = self
            .edges()
            .iter()
            .map(|&(a, b)| self.vertices[a].distance(self.vertices[b]))
            .collect();
        median(&mut l)
    }

    /// Sorted vertex adjacency through face edges.
    pub fn vertex_neighbors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (a, b) in self.edges() {
            out[a].push(b);
            out[b].push(a);
        }
        for n in &mut out {
            n.sort_unstable();
        }
        out
    }

    /// `true` for vertices on an edge that only one face uses.
    pub fn border_vertices(&self) -> Vec<bool> {
        let mut uses: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &[a, b, c] in &self.faces {
            for (p, q) in [(a, b), (b, c), (c, a)] {
                *uses.entry((p.min(q), p.max(q))).or_default() += 1;
            }
        }
        let mut out = vec![false; self.vertices.len()];
        for ((a, b), n) in uses {
            if n == 1 {
                out[a] = true;
                out[b] = true;
            }
        }
        out
    }

    /// For each face, the vertex across each of its edges `(0,1)`, `(1,2)`,
    /// `(2,0)`, where a neighbouring face exists.
    pub fn opposite_vertices(&self) -> Vec<[Option<usize>; 3]> {
        let mut by_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (fi, &[a, b, c]) in self.faces.iter().enumerate() {
            for (p, q) in [(a, b), (b, c), (c, a)] {
                by_edge.entry((p.min(q), p.max(q))).or_default().push(fi);
            }
        }
        self.faces
            .iter()
            .enumerate()
            .map(|(fi, &[a, b, c])| {
                [(a, b), (b, c), (c, a)].map(|(p, q)| {
                    let others = &by_edge[&(p.min(q), p.max(q))];
                    others.iter().find(|&&g| g != fi).and_then(|&g| {
                        self.faces[g].iter().copied().find(|&v| v != p && v != q)
                    })
                })
            })
            .collect()
    }

    /// Connected components among vertices used by at least one face.
    pub fn component_count(&self) -> usize {
        self.component_sizes().len()
    }

    /// Face count of each edge-or-vertex-connected component, in order of
    /// each component's first face.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for &[a, b, c] in &self.faces {
            for (p, q) in [(a, b), (b, c)] {
                let (rp, rq) = (find(&mut parent, p), find(&mut parent, q));
                if rp != rq {
                    parent[rp.max(rq)] = rp.min(rq);
                }
            }
        }
        let mut slot: BTreeMap<usize, usize> = BTreeMap::new();
        let mut sizes = Vec::new();
        for &[a, _, _] in &self.faces {
            let root = find(&mut parent, a);
            let k = *slot.entry(root).or_insert_with(|| {
                sizes.push(0);
                sizes.len() - 1
            });
            sizes[k] += 1;
        }
        sizes
    }

    /// Largest `|potential − omega_c|` over the vertices.
    pub fn max_residual(&self, set: &BoundarySet, omega_c: f64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &p in &self.vertices {
            worst = worst.max((crate::solid_angle::potential(set, p)? - omega_c).abs());
        }
        Ok(worst)
    }
}

/// Default edge-stretch factor for [`build_mesh`].
pub const DEFAULT_STRETCH_LIMIT: f64 = 5.0;

/// Two triangles per lattice cell over the converged results, dropping
/// triangles with a failed corner, an edge longer than `stretch_limit` times
/// the median edge, or (relative) zero area.
pub fn build_mesh(grid: &SeedGrid, results: &[ProjectionResult], stretch_limit: f64) -> SurfaceMesh {
    let (nx, ny) = (grid.nx, grid.ny);
    let ok = |k: usize| results.get(k).is_some_and(|r| r.converged());
    let mut candidates = Vec::new();
    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            let (a, b, c, d) = (
                grid.index(i, j),
                grid.index(i + 1, j),
                grid.index(i + 1, j + 1),
                grid.index(i, j + 1),
            );
            for tri in [[a, b, c], [a, c, d]] {
                if tri.iter().all(|&k| ok(k)) {
                    candidates.push(tri);
                }
            }
        }
    }
    let pt = |k: usize| results[k].point;
    let mut lengths: Vec<f64> = candidates
        .iter()
        .flat_map(|&[a, b, c]| [pt(a).distance(pt(b)), pt(b).distance(pt(c)), pt(c).distance(pt(a))])
        .collect();
    let med = median(&mut lengths).unwrap_or(0.0);
    let max_edge = stretch_limit * med;
    let min_area2 = 1e-14 * med * med;
    let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
    let mut mesh = SurfaceMesh::default();
    for tri in candidates {
        let [a, b, c] = tri.map(pt);
        let longest = a.distance(b).max(b.distance(c)).max(c.distance(a));
        if longest > max_edge || !((b - a).cross(c - a).norm() > min_area2) {
            continue;
        }
        let face = tri.map(|k| {
            *remap.entry(k).or_insert_with(|| {
                mesh.vertices.push(results[k].point);
                mesh.seed_index.push(k);
                mesh.vertices.len() - 1
            })
        });
        mesh.faces.push(face);
    }
    mesh
}

/// Level curves of one potential value within a section plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub omega: f64,
    pub polylines: Vec<Polyline>,
    /// Seeds that did not converge.
    pub failures: usize,
}

/// Drops points closer than `radius` to an earlier kept point.
fn dedupe(points: &[Point3], radius: f64) -> Vec<Point3> {
    let mut idx = PointIndex::new(&[], radius);
    let mut kept = Vec::new();
    for &p in points {
        if idx.nearest(p, radius).is_none() {
            idx.insert(p);
            kept.push(p);
        }
    }
    kept
}

/// Greedy nearest-neighbour chaining: walk forward from the first free point,
/// then backward from it, linking points no further than `link` apart.
pub fn chain_points(points: &[Point3], link: f64) -> Vec<Polyline> {
    let idx = PointIndex::new(points, link);
    let mut used = vec![false; points.len()];
    let mut out = Vec::new();
    for start in 0..points.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let walk = |from: usize, used: &mut Vec<bool>| {
            let mut seq = Vec::new();
            let mut cur = from;
            while let Some((next, _)) = idx.nearest_where(points[cur], link, |k| !used[k]) {
                used[next] = true;
                seq.push(next);
                cur = next;
            }
            seq
        };
        let fwd = walk(start, &mut used);
        let back = walk(start, &mut used);
        let mut chain: Vec<usize> = back.into_iter().rev().collect();
        chain.push(start);
        chain.extend(fwd);
        if chain.len() < 2 {
            continue;
        }
        let mut line: Polyline = chain.iter().map(|&k| points[k]).collect();
        if line.len() > 3 && line[0].distance(line[line.len() - 1]) <= link {
            line.push(line[0]);
        }
        out.push(line);
    }
    out
}

/// Level curves in the plane of `grid` (which also bounds the seeding) for
/// each potential in `omega_values`, via Newton confined to that plane.
pub fn section_curves<E: Executor>(
    set: &BoundarySet,
    grid: &SeedGrid,
    omega_values: &[f64],
    cfg: &SolverConfig,
    exec: &E,
) -> Result<Vec<Section>> {
    let seeds = seed_points(grid)?;
    let n = grid.normal();
    let spacing = grid.spacing();
    Ok(omega_values
        .iter()
        .map(|&omega| {
            let c = cfg.with_omega(omega);
            let results = exec.map(&seeds, &|s: &Point3| project_point_in_plane(set, *s, n, &c));
            let conv: Vec<Point3> = results.iter().filter(|r| r.converged()).map(|r| r.point).collect();
            let failures = results.len() - conv.len();
            let pts = dedupe(&conv, 0.2 * spacing);
            Section {
                omega,
                polylines: chain_points(&pts, 3.0 * spacing),
                failures,
            }
        })
        .collect())
}

/// Which principal direction a trace follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Along `dir1` (larger curvature).
    First,
    /// Along `dir2`.
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceConfig {
    pub family: Family,
    /// Minimum distance between trace start points, chosen among mesh vertices.
    pub seed_spacing: f64,
    pub step: f64,
    pub max_steps: usize,
    /// Stop when `|k1 − k2| ≤ umbilic_rel (|k1| + |k2|)`.
    pub umbilic_rel: f64,
}

impl TraceConfig {
    pub fn new(family: Family, seed_spacing: f64, step: f64, max_steps: usize) -> Self {
        TraceConfig {
            family,
            seed_spacing,
            step,
            max_steps,
            umbilic_rel: 1e-3,
        }
    }
}

/// Why a trace ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStop {
    Closed,
    MaxSteps,
    Umbilic,
    Silhouette,
    NearBoundary,
    OffMesh,
    ProjectionFailed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub points: Polyline,
    pub stop: TraceStop,
}

struct Tracer<'a> {
    set: &'a BoundarySet,
    cfg: &'a SolverConfig,
    tc: &'a TraceConfig,
    mesh_index: PointIndex,
    mesh_reach: f64,
    plane_normal: Vec3,
}

impl Tracer<'_> {
    fn direction(&self, r: Point3) -> core::result::Result<(Vec3, Vec3), TraceStop> {
        let fr = curvature::second_fundamental_form(self.set, r).map_err(|_| TraceStop::ProjectionFailed)?;
        if (fr.kappa1 - fr.kappa2).abs() <= self.tc.umbilic_rel * (fr.kappa1.abs() + fr.kappa2.abs()) {
            return Err(TraceStop::Umbilic);
        }
        let d = match self.tc.family {
            Family::First => fr.dir1,
            Family::Second => fr.dir2,
        };
        Ok((d, fr.normal))
    }

    fn near_boundary(&self, r: Point3) -> bool {
        let (dist, li, vi) = self.set.distance_to_boundary(r);
        let lp = &self.set.loops()[li];
        let seg = lp.vertices()[vi].distance(lp.vertices()[(vi + 1) % lp.len()]);
        dist < 2.0 * seg
    }

    /// One direction from `start`; the returned points exclude `start`.
    fn walk(&self, start: Point3, initial: Vec3, side0: f64) -> (Vec<Point3>, TraceStop) {
        let h = self.tc.step;
        let mut pts = Vec::new();
        let mut r = start;
        let mut prev = initial;
        for k in 0..self.tc.max_steps {
            let aligned = |d: Vec3, to: Vec3| if d.dot(to) < 0.0 { -d } else { d };
            let d0 = match self.direction(r) {
                Ok((d, _)) => aligned(d, prev),
                Err(stop) => return (pts, stop),
            };
            let d1 = match self.direction(r + d0 * (0.5 * h)) {
                Ok((d, _)) => aligned(d, d0),
                Err(stop) => return (pts, stop),
            };
            let res = project_point(self.set, r + d1 * h, self.cfg);
            if !res.converged() {
                return (pts, TraceStop::ProjectionFailed);
            }
            let next = res.point;
            if self.mesh_index.nearest(next, self.mesh_reach).is_none() {
                return (pts, TraceStop::OffMesh);
            }
            if self.near_boundary(next) {
                return (pts, TraceStop::NearBoundary);
            }
            if let Ok(g) = gradient(self.set, next) {
                if g.dot(self.plane_normal) * side0 < 0.0 {
                    return (pts, TraceStop::Silhouette);
                }
            }
            prev = d1;
            r = next;
            pts.push(r);
            if k >= 2 && r.distance(start) < h {
                pts.push(start);
                return (pts, TraceStop::Closed);
            }
        }
        (pts, TraceStop::MaxSteps)
    }

    fn trace(&self, seed: Point3) -> Trace {
        let (d, n) = match self.direction(seed) {
            Ok(v) => v,
            Err(stop) => return Trace { points: vec![seed], stop },
        };
        let side0 = n.dot(self.plane_normal);
        let (fwd, stop) = self.walk(seed, d, side0);
        if stop == TraceStop::Closed {
            let mut points = vec![seed];
            points.extend(fwd);
            return Trace { points, stop };
        }
        let (back, _) = self.walk(seed, -d, side0);
        let mut points: Vec<Point3> = back.into_iter().rev().collect();
        points.push(seed);
        points.extend(fwd);
        Trace { points, stop }
    }
}

/// Integrates principal-curvature lines over a converged mesh with a
/// midpoint rule, re-projecting every step onto the level `cfg.omega_c`.
pub fn trace_principal_lines<E: Executor>(
    set: &BoundarySet,
    mesh: &SurfaceMesh,
    cfg: &SolverConfig,
    tc: &TraceConfig,
    exec: &E,
) -> Result<Vec<Trace>> {
    if !(tc.step > 0.0) || !(tc.seed_spacing > 0.0) || tc.max_steps == 0 {
        return Err(Error::DegenerateInput("trace step, spacing and max steps must be positive"));
    }
    if mesh.vertices.is_empty() {
        return Ok(Vec::new());
    }
    let med = mesh.median_edge_length().unwrap_or(tc.step);
    let tracer = Tracer {
        set,
        cfg,
        tc,
        mesh_index: PointIndex::new(&mesh.vertices, med),
        mesh_reach: 2.0 * med,
        plane_normal: set.plane_normal().unwrap_or(Vec3::Z),
    };
    let seeds = dedupe(&mesh.vertices, tc.seed_spacing);
    let traces = exec.map(&seeds, &|&s: &Point3| tracer.trace(s));
    Ok(traces.into_iter().filter(|t| t.points.len() >= 2).collect())
}

/// Tensor-method frames at `points`, with `dir1` flipped so that neighbours
/// (within 3× the median nearest spacing) point the same way. Orientation
/// does not propagate out of umbilic points.
pub fn principal_direction_field<E: Executor>(
    set: &BoundarySet,
    points: &[Point3],
    exec: &E,
) -> Vec<Option<CurvatureFrame>> {
    let mut frames = exec.map(points, &|&p: &Point3| curvature::second_fundamental_form(set, p).ok());
    let Some(spacing) = median_nearest_spacing(points, set.diagonal() / 64.0) else {
        return frames;
    };
    let radius = 3.0 * spacing;
    let idx = PointIndex::new(points, radius);
    let mut seen = vec![false; points.len()];
    for root in 0..points.len() {
        if seen[root] || frames[root].is_none() {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let Some(fi) = frames[i] else { continue };
            if fi.umbilic {
                continue;
            }
            for j in idx.within(points[i], radius) {
                if seen[j] {
                    continue;
                }
                if let Some(fj) = frames[j] {
                    seen[j] = true;
                    if fj.dir1.dot(fi.dir1) < 0.0 {
                        frames[j] = Some(fj.flipped_directions());
                    }
                    queue.push_back(j);
                }
            }
        }
    }
    frames
}

/// How a per-face curvature was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureMethod {
    Stencil,
    Tensor,
}

/// Six-point stencil curvature at each face centroid, falling back to the
/// tensor method on faces missing an edge neighbour.
pub fn face_curvatures<E: Executor>(
    set: &BoundarySet,
    mesh: &SurfaceMesh,
    exec: &E,
) -> Vec<Option<(CurvatureFrame, CurvatureMethod)>> {
    let opposite = mesh.opposite_vertices();
    let ids: Vec<usize> = (0..mesh.faces.len()).collect();
    exec.map(&ids, &|&f: &usize| {
        let tri = mesh.face_points(f);
        let centroid = (tri[0] + tri[1] + tri[2]) / 3.0;
        let tensor = || {
            curvature::second_fundamental_form(set, centroid)
                .ok()
                .map(|fr| (fr, CurvatureMethod::Tensor))
        };
        match opposite[f] {
            [Some(a), Some(b), Some(c)] => {
                let n = gradient(set, centroid).ok().and_then(|g| g.normalized())?;
                let opp = [mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]];
                curvature::stencil_curvatures(tri, opp, n)
                    .ok()
                    .map(|fr| (fr, CurvatureMethod::Stencil))
                    .or_else(tensor)
            }
            _ => tensor(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::make_circle;
    use crate::exec::Sequential;
    use crate::projection::{project_cloud, ProjectionStatus};
    use core::f64::consts::PI;

    #[test]
    fn seed_corners_and_order() {
        let g = SeedGrid::xy(0.0, 0.0, 1.0, 1.0, 0.0, 2, 2).unwrap();
        let p = seed_points(&g).unwrap();
        assert_eq!(p, vec![Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::new(1.0, 1.0, 0.0)]);
        assert_eq!(g.index(1, 1), 3);
        let lifted = SeedGrid { offset: 1.0, ..g };
        assert!(seed_points(&lifted).unwrap().iter().all(|p| p.z == 1.0));
    }

    #[test]
    fn seed_grid_rejects_bad_input() {
        assert!(SeedGrid::xy(0.0, 0.0, 1.0, 1.0, 0.0, 1, 5).is_err());
        assert!(SeedGrid::new(Vec3::ZERO, Vec3::X, Vec3::X * 2.0, 3, 3, 0.0).is_err());
    }

    fn converged_grid(grid: &SeedGrid) -> Vec<ProjectionResult> {
        seed_points(grid)
            .unwrap()
            .into_iter()
            .map(|p| ProjectionResult {
                point: p,
                iterations: 0,
                residual: 0.0,
                status: ProjectionStatus::Converged,
            })
            .collect()
    }

    #[test]
    fn full_mesh_and_dropped_vertex() {
        let g = SeedGrid::xy(0.0, 0.0, 1.0, 1.0, 0.0, 5, 4).unwrap();
        let mut res = converged_grid(&g);
        let mesh = build_mesh(&g, &res, DEFAULT_STRETCH_LIMIT);
        assert_eq!(mesh.faces.len(), 4 * 3 * 2);
        assert_eq!(mesh.component_count(), 1);
        assert_eq!(mesh.border_vertices().iter().filter(|&&b| b).count(), 20 - 6);
        res[g.index(2, 1)].status = ProjectionStatus::MaxIterations;
        let mesh = build_mesh(&g, &res, DEFAULT_STRETCH_LIMIT);
        assert_eq!(mesh.faces.len(), 24 - 6);
        assert_eq!(mesh.vertices.len(), 19);
    }

    #[test]
    fn stretched_edges_split_the_mesh() {
        let g = SeedGrid::xy(0.0, 0.0, 1.0, 1.0, 0.0, 6, 6).unwrap();
        let mut res = converged_grid(&g);
        for r in &mut res {
            if r.point.x > 0.5 {
                r.point.x += 10.0;
            }
        }
        let mesh = build_mesh(&g, &res, DEFAULT_STRETCH_LIMIT);
        assert_eq!(mesh.component_count(), 2);
        assert_eq!(mesh.component_sizes(), vec![20, 20]);
    }

    #[test]
    fn opposite_vertices_of_a_quad() {
        let mesh = SurfaceMesh::from_parts(
            vec![Vec3::ZERO, Vec3::X, Vec3::new(1.0, 1.0, 0.0), Vec3::Y],
            vec![[0, 1, 2], [0, 2, 3]],
        )
        .unwrap();
        let opp = mesh.opposite_vertices();
        assert_eq!(opp[0], [None, None, Some(3)]);
        assert_eq!(opp[1], [Some(1), None, None]);
        assert_eq!(mesh.vertex_neighbors()[0], vec![1, 2, 3]);
    }

    #[test]
    fn chaining_orders_a_shuffled_arc() {
        let pts: Vec<Point3> = [3, 0, 4, 1, 2]
            .iter()
            .map(|&k| Vec3::new(k as f64 * 0.1, 0.0, 0.0))
            .collect();
        let lines = chain_points(&pts, 0.15);
        assert_eq!(lines.len(), 1);
        let xs: Vec<f64> = lines[0].iter().map(|p| p.x).collect();
        let sorted = xs.windows(2).all(|w| w[0] < w[1]) || xs.windows(2).all(|w| w[0] > w[1]);
        assert!(sorted, "{xs:?}");
    }

    #[test]
    fn cap_section_is_mirror_symmetric() {
        let set = BoundarySet::single(make_circle(Vec3::ZERO, Vec3::Z, 1.0, 128, 1.0).unwrap()).unwrap();
        let cfg = SolverConfig::for_set(&set, -PI);
        let grid = SeedGrid::new(Vec3::new(-1.5, 0.0, 0.05), Vec3::X * 3.0, Vec3::Z * 1.5, 25, 13, 0.0).unwrap();
        let secs = section_curves(&set, &grid, &[-PI], &cfg, &Sequential).unwrap();
        let pts: Vec<Point3> = secs[0].polylines.iter().flatten().copied().collect();
        assert!(pts.len() > 5);
        for p in &pts {
            assert!((crate::solid_angle::potential(&set, *p).unwrap() + PI).abs() <= cfg.tol_omega);
            assert!(p.y.abs() < 1e-12);
        }
    }

    #[test]
    fn cap_directions_are_combed() {
        let set = BoundarySet::single(make_circle(Vec3::ZERO, Vec3::Z, 1.0, 128, 1.0).unwrap()).unwrap();
        let cfg = SolverConfig::for_set(&set, -PI);
        let grid = SeedGrid::xy(-0.6, -0.6, 0.6, 0.6, 0.5, 9, 9).unwrap();
        let res = project_cloud(&set, &seed_points(&grid).unwrap(), &cfg, &Sequential);
        let pts: Vec<Point3> = res.iter().filter(|r| r.converged()).map(|r| r.point).collect();
        let frames = principal_direction_field(&set, &pts, &Sequential);
        assert!(frames.iter().all(|f| f.is_some()));
    }
}

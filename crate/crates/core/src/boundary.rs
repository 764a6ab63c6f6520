//! Closed boundary polylines ("wires") and the immutable sets they form.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;
use crate::vec3::{Point3, Vec3};

/// Coincident-vertex tolerance, relative to the bounding-box diagonal.
pub const DEGENERATE_REL: f64 = 1e-12;
/// Boundary-proximity tolerance, relative to the bounding-box diagonal.
pub const BOUNDARY_REL: f64 = 1e-9;
/// Direction changes above this are corners that resampling keeps.
pub const CORNER_ANGLE: f64 = PI / 180.0;

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: Point3,
    pub max: Point3,
}

impl BoundingBox {
    pub fn of_points<'a>(points: impl IntoIterator<Item = &'a Point3>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let (min, max) = it.fold((first, first), |(lo, hi), p| {
            (lo.min_by_component(*p), hi.max_by_component(*p))
        });
        Some(BoundingBox { min, max })
    }

    pub fn union(self, o: BoundingBox) -> BoundingBox {
        BoundingBox {
            min: self.min.min_by_component(o.min),
            max: self.max.max_by_component(o.max),
        }
    }

    pub fn diagonal(&self) -> f64 {
        (self.max - self.min).norm()
    }

    pub fn center(&self) -> Point3 {
        (self.min + self.max) * 0.5
    }
}

/// A closed, oriented polyline carrying a scalar current.
///
/// The last vertex connects back to the first. Reversing the vertex order
/// negates the loop's contribution to the potential, as does negating the
/// current.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLoop {
    vertices: Vec<Point3>,
    current: f64,
    label: String,
}

impl BoundaryLoop {
    /// Builds a loop from at least three finite vertices.
    ///
    /// Coincident consecutive vertices are not rejected here because the
    /// tolerance is relative to the whole set; [`BoundarySet::new`] checks it.
    pub fn new(vertices: Vec<Point3>, current: f64, label: impl Into<String>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegenerateInput("a loop needs at least 3 vertices"));
        }
        if !vertices.iter().all(|p| p.is_finite()) {
            return Err(Error::DegenerateInput("non-finite vertex coordinate"));
        }
        if !current.is_finite() {
            return Err(Error::DegenerateInput("non-finite current"));
        }
        Ok(BoundaryLoop {
            vertices,
            current,
            label: label.into(),
        })
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn current(&self) -> f64 {
        self.current
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_current(mut self, current: f64) -> Self {
        self.current = current;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same geometry traversed in the opposite direction, starting at the same vertex.
    pub fn reversed(&self) -> Self {
        let mut vertices = Vec::with_capacity(self.vertices.len());
        vertices.push(self.vertices[0]);
        vertices.extend(self.vertices[1..].iter().rev().copied());
        BoundaryLoop {
            vertices,
            current: self.current,
            label: self.label.clone(),
        }
    }

    /// Applies `f` to every vertex (rigid motions, scaling, ...).
    pub fn map_vertices(&self, f: impl Fn(Point3) -> Point3) -> Self {
        BoundaryLoop {
            vertices: self.vertices.iter().map(|&p| f(p)).collect(),
            current: self.current,
            label: self.label.clone(),
        }
    }

    /// Segments `(p_i, p_{i+1})`, including the closing one.
    pub fn segments(&self) -> impl Iterator<Item = (Point3, Point3)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn perimeter(&self) -> f64 {
        self.segments().map(|(p, q)| p.distance(q)).sum()
    }

    pub fn max_segment_length(&self) -> f64 {
        self.segments().map(|(p, q)| p.distance(q)).fold(0.0, f64::max)
    }

    pub fn bounding_box(&self) -> BoundingBox {
        BoundingBox::of_points(&self.vertices).expect("loop has vertices")
    }

    /// Area-weighted normal (Newell's method); its length is twice the
    /// projected area of the loop.
    pub fn area_vector(&self) -> Vec3 {
        let c = self.vertices[0];
        self.segments()
            .fold(Vec3::ZERO, |acc, (p, q)| acc + (p - c).cross(q - c))
    }

    /// Unit normal of the best-fit plane, oriented by the traversal direction.
    pub fn plane_normal(&self) -> Option<Vec3> {
        if let Some(n) = self.area_vector().normalized() {
            return Some(n);
        }
        // zero net area (figure eight): pick the widest vertex pair
        let c = self.vertices[0];
        let mut best = Vec3::ZERO;
        for i in 1..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                let n = (self.vertices[i] - c).cross(self.vertices[j] - c);
                if n.norm_sq() > best.norm_sq() {
                    best = n;
                }
            }
        }
        best.normalized()
    }
}

/// Immutable collection of loops: the source of every field evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySet {
    loops: Vec<BoundaryLoop>,
    bbox: BoundingBox,
}

impl BoundarySet {
    /// Validates and freezes a set of loops. Coincident consecutive vertices
    /// (within [`DEGENERATE_REL`] of the diagonal) are rejected.
    pub fn new(loops: Vec<BoundaryLoop>) -> Result<Self> {
        if loops.is_empty() {
            return Err(Error::DegenerateInput("a boundary set needs at least one loop"));
        }
        let bbox = loops
            .iter()
            .map(BoundaryLoop::bounding_box)
            .reduce(BoundingBox::union)
            .expect("non-empty");
        if !(bbox.diagonal() > 0.0) {
            return Err(Error::DegenerateInput("boundary has zero extent"));
        }
        let set = BoundarySet { loops, bbox };
        if validate(&set).iter().any(|d| d.severity() == Severity::Error) {
            return Err(Error::DegenerateInput("coincident consecutive vertices"));
        }
        Ok(set)
    }

    pub fn single(lp: BoundaryLoop) -> Result<Self> {
        Self::new(alloc::vec![lp])
    }

    pub fn loops(&self) -> &[BoundaryLoop] {
        &self.loops
    }

    pub fn bounding_box(&self) -> BoundingBox {
        self.bbox
    }

    pub fn diagonal(&self) -> f64 {
        self.bbox.diagonal()
    }

    /// Points closer than this to a segment are rejected by every evaluator.
    pub fn eps_boundary(&self) -> f64 {
        BOUNDARY_REL * self.diagonal()
    }

    pub fn eps_degenerate(&self) -> f64 {
        DEGENERATE_REL * self.diagonal()
    }

    pub fn segment_count(&self) -> usize {
        self.loops.iter().map(BoundaryLoop::len).sum()
    }

    /// True when the classic (with 2π) solid angle is meaningful: one loop, current 1.
    pub fn is_classic_eligible(&self) -> bool {
        self.loops.len() == 1 && self.loops[0].current() == 1.0
    }

    /// Current-weighted best-fit plane normal over all loops.
    pub fn plane_normal(&self) -> Option<Vec3> {
        self.loops
            .iter()
            .fold(Vec3::ZERO, |acc, l| {
                let n = l.plane_normal().unwrap_or(Vec3::ZERO);
                // align the loop normals before summing so opposite currents don't cancel
                if acc.dot(n) < 0.0 {
                    acc - n
                } else {
                    acc + n
                }
            })
            .normalized()
    }

    /// Distance from `r` to the nearest segment, with its loop and start-vertex index.
    pub fn distance_to_boundary(&self, r: Point3) -> (f64, usize, usize) {
        let mut best = (f64::INFINITY, 0, 0);
        for (li, lp) in self.loops.iter().enumerate() {
            for (vi, (p, q)) in lp.segments().enumerate() {
                let d = point_segment_distance(r, p, q);
                if d < best.0 {
                    best = (d, li, vi);
                }
            }
        }
        best
    }

    /// Applies `f` to every loop, re-validating the result.
    pub fn map_loops(&self, f: impl Fn(usize, &BoundaryLoop) -> BoundaryLoop) -> Result<Self> {
        BoundarySet::new(self.loops.iter().enumerate().map(|(i, l)| f(i, l)).collect())
    }
}

pub fn point_segment_distance(r: Point3, p: Point3, q: Point3) -> f64 {
    let d = q - p;
    let v = r - p;
    let len_sq = d.norm_sq();
    let t = if len_sq > 0.0 {
        (v.dot(d) / len_sq).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (v - d * t).norm()
}

/// Regular polygon inscribed in a circle, counterclockwise seen from the
/// `+normal` side. The first vertex lies along the projection of the x axis
/// (y axis when the normal is nearly parallel to x) onto the circle's plane.
pub fn make_circle(
    center: Point3,
    normal: Vec3,
    radius: f64,
    segments: usize,
    current: f64,
) -> Result<BoundaryLoop> {
    let n = normal
        .normalized()
        .ok_or(Error::DegenerateInput("circle normal has zero length"))?;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::DegenerateInput("circle radius must be positive"));
    }
    if segments < 3 {
        return Err(Error::DegenerateInput("a circle needs at least 3 segments"));
    }
    let e1 = n.any_orthonormal();
    let e2 = n.cross(e1);
    let vertices = (0..segments)
        .map(|k| {
            let theta = 2.0 * PI * (k as f64) / (segments as f64);
            center + (e1 * math::cos(theta) + e2 * math::sin(theta)) * radius
        })
        .collect();
    BoundaryLoop::new(vertices, current, "circle")
}

/// Rectangle centred on `center`, counterclockwise about `u × v`, each side
/// split into `segments_per_side` equal pieces. `v_axis` is orthogonalised
/// against `u_axis`.
pub fn make_rectangle(
    center: Point3,
    u_axis: Vec3,
    v_axis: Vec3,
    width: f64,
    height: f64,
    segments_per_side: usize,
    current: f64,
) -> Result<BoundaryLoop> {
    let u = u_axis
        .normalized()
        .ok_or(Error::DegenerateInput("rectangle u axis has zero length"))?;
    let v_len = v_axis.norm();
    let v = v_axis
        .reject(u)
        .normalized()
        .filter(|w| v_len > 0.0 && v_axis.reject(u).norm() > 1e-12 * v_len && w.is_finite())
        .ok_or(Error::DegenerateInput("rectangle axes are parallel or zero"))?;
    if !(width > 0.0 && height > 0.0) || !width.is_finite() || !height.is_finite() {
        return Err(Error::DegenerateInput("rectangle sides must be positive"));
    }
    if segments_per_side == 0 {
        return Err(Error::DegenerateInput("at least one segment per side"));
    }
    let corners = [
        center - u * (width / 2.0) - v * (height / 2.0),
        center + u * (width / 2.0) - v * (height / 2.0),
        center + u * (width / 2.0) + v * (height / 2.0),
        center - u * (width / 2.0) + v * (height / 2.0),
    ];
    let mut vertices = Vec::with_capacity(4 * segments_per_side);
    for side in 0..4 {
        let (a, b) = (corners[side], corners[(side + 1) % 4]);
        for k in 0..segments_per_side {
            vertices.push(a.lerp(b, k as f64 / segments_per_side as f64));
        }
    }
    BoundaryLoop::new(vertices, current, "rectangle")
}

fn turning_angle(prev: Point3, at: Point3, next: Point3) -> f64 {
    let a = at - prev;
    let b = next - at;
    math::atan2(a.cross(b).norm(), a.dot(b))
}

/// Resamples a loop so that no segment exceeds `target_segment_length`.
///
/// Corners (direction changes above one degree) are kept exactly; the
/// polyline between consecutive corners is redistributed at equal arc
/// length, so new vertices lie on the original polyline. A loop whose
/// segments already satisfy the bound is returned unchanged.
pub fn resample_loop(lp: &BoundaryLoop, target_segment_length: f64) -> Result<BoundaryLoop> {
    if !(target_segment_length > 0.0) || !target_segment_length.is_finite() {
        return Err(Error::DegenerateInput("target segment length must be positive"));
    }
    let pts = lp.vertices();
    let n = pts.len();
    if pts.iter().zip(pts.iter().cycle().skip(1)).any(|(p, q)| p == q) {
        return Err(Error::DegenerateInput("loop has coincident consecutive vertices"));
    }
    if lp.max_segment_length() <= target_segment_length {
        return Ok(lp.clone());
    }

    let mut corners: Vec<usize> = (0..n)
        .filter(|&i| turning_angle(pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]) > CORNER_ANGLE)
        .collect();
    if corners.is_empty() {
        corners.push(0);
    }

    let mut out = Vec::new();
    for (k, &start) in corners.iter().enumerate() {
        let end = corners[(k + 1) % corners.len()];
        // run of vertices start..=end (cyclic); a single corner closes on itself
        let mut run = alloc::vec![pts[start]];
        let mut i = start;
        loop {
            i = (i + 1) % n;
            run.push(pts[i]);
            if i == end {
                break;
            }
        }
        let lengths: Vec<f64> = run.windows(2).map(|w| w[0].distance(w[1])).collect();
        let total: f64 = lengths.iter().sum();
        let pieces = math::ceil(total / target_segment_length).max(1.0) as usize;
        out.push(run[0]);
        let mut seg = 0;
        let mut walked = 0.0;
        for j in 1..pieces {
            let s = total * (j as f64) / (pieces as f64);
            while seg + 1 < lengths.len() && walked + lengths[seg] < s {
                walked += lengths[seg];
                seg += 1;
            }
            let t = ((s - walked) / lengths[seg]).clamp(0.0, 1.0);
            out.push(run[seg].lerp(run[seg + 1], t));
        }
    }
    BoundaryLoop::new(out, lp.current(), lp.label())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

/// Findings of [`validate`]. Only `DegenerateSegment` is fatal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagnostic {
    DegenerateSegment { loop_index: usize, vertex: usize },
    NearDuplicateVertex { loop_index: usize, first: usize, second: usize },
    ZeroCurrent { loop_index: usize },
    SelfIntersection { loop_index: usize, segment_a: usize, segment_b: usize },
}

impl Diagnostic {
    pub fn severity(&self) -> Severity {
        match self {
            Diagnostic::DegenerateSegment { .. } => Severity::Error,
            _ => Severity::Warning,
        }
    }
}

/// Reports degenerate segments, near-duplicate vertices, zero currents and
/// self-crossings (in each loop's best-fit plane). Self-crossing loops are
/// legal; they are reported as warnings only.
pub fn validate(set: &BoundarySet) -> Vec<Diagnostic> {
    validate_loops(set.loops())
}

/// [`validate`] for loops that have not been assembled into a set yet.
pub fn validate_loops(loops: &[BoundaryLoop]) -> Vec<Diagnostic> {
    let Some(bbox) = loops
        .iter()
        .map(BoundaryLoop::bounding_box)
        .reduce(BoundingBox::union)
    else {
        return Vec::new();
    };
    let eps = DEGENERATE_REL * bbox.diagonal();
    let mut out = Vec::new();
    for (li, lp) in loops.iter().enumerate() {
        let pts = lp.vertices();
        let n = pts.len();
        for i in 0..n {
            if pts[i].distance(pts[(i + 1) % n]) <= eps {
                out.push(Diagnostic::DegenerateSegment { loop_index: li, vertex: i });
            }
        }
        near_duplicates(li, pts, eps, &mut out);
        if lp.current() == 0.0 {
            out.push(Diagnostic::ZeroCurrent { loop_index: li });
        }
        self_intersections(li, lp, &mut out);
    }
    out
}

fn near_duplicates(li: usize, pts: &[Point3], eps: f64, out: &mut Vec<Diagnostic>) {
    let n = pts.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| pts[a].x.total_cmp(&pts[b].x));
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if pts[j].x - pts[i].x > eps {
                break;
            }
            let (a, b) = (i.min(j), i.max(j));
            let consecutive = b == a + 1 || (a == 0 && b == n - 1);
            if !consecutive && pts[a].distance(pts[b]) <= eps {
                out.push(Diagnostic::NearDuplicateVertex { loop_index: li, first: a, second: b });
            }
        }
    }
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    c[0] >= a[0].min(b[0]) && c[0] <= a[0].max(b[0]) && c[1] >= a[1].min(b[1]) && c[1] <= a[1].max(b[1])
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

fn self_intersections(li: usize, lp: &BoundaryLoop, out: &mut Vec<Diagnostic>) {
    let Some(normal) = lp.plane_normal() else {
        return;
    };
    let e1 = normal.any_orthonormal();
    let e2 = normal.cross(e1);
    let pts: Vec<[f64; 2]> = lp.vertices().iter().map(|p| [p.dot(e1), p.dot(e2)]).collect();
    let n = pts.len();

    // bucket segments on a uniform grid so large loops stay near-linear
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    if !(extent > 0.0) {
        return;
    }
    let cells_per_side = math::ceil(math::sqrt(n as f64)).max(1.0);
    let cell = extent / cells_per_side;
    let cell_of = |x: f64, k: usize| math::floor((x - lo[k]) / cell) as i64;
    let mut buckets: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        for cx in cell_of(a[0].min(b[0]), 0)..=cell_of(a[0].max(b[0]), 0) {
            for cy in cell_of(a[1].min(b[1]), 1)..=cell_of(a[1].max(b[1]), 1) {
                buckets.entry((cx, cy)).or_default().push(i);
            }
        }
    }
    let mut seen = BTreeSet::new();
    for segs in buckets.values() {
        for (k, &i) in segs.iter().enumerate() {
            for &j in &segs[k + 1..] {
                let (a, b) = (i.min(j), i.max(j));
                let adjacent = b == a + 1 || (a == 0 && b == n - 1);
                if adjacent || !seen.insert((a, b)) {
                    continue;
                }
                if segments_cross(pts[a], pts[(a + 1) % n], pts[b], pts[(b + 1) % n]) {
                    out.push(Diagnostic::SelfIntersection { loop_index: li, segment_a: a, segment_b: b });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: Vec3, b: Vec3) -> bool {
        a.distance(b) < 1e-12
    }

    #[test]
    fn circle_four_segments_is_ccw_square() {
        let c = make_circle(Vec3::ZERO, Vec3::Z, 1.0, 4, 1.0).unwrap();
        let expect = [
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(0.0, -1.0, 0.0),
        ];
        for (v, e) in c.vertices().iter().zip(expect) {
            assert!(close(*v, e), "{v:?} vs {e:?}");
        }
        assert!(c.area_vector().z > 0.0);
    }

    #[test]
    fn circle_three_segments_has_circumradius_one() {
        let c = make_circle(Vec3::new(1.0, 2.0, 3.0), Vec3::new(1.0, 1.0, 0.0), 1.0, 3, 1.0).unwrap();
        for v in c.vertices() {
            assert!((v.distance(Vec3::new(1.0, 2.0, 3.0)) - 1.0).abs() < 1e-14);
        }
        let sides: Vec<f64> = c.segments().map(|(p, q)| p.distance(q)).collect();
        for s in &sides {
            assert!((s - 3f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn flipped_normal_reverses_order() {
        let up = make_circle(Vec3::ZERO, Vec3::Z, 1.0, 4, 1.0).unwrap();
        let down = make_circle(Vec3::ZERO, -Vec3::Z, 1.0, 4, 1.0).unwrap();
        let rev = up.reversed();
        for (a, b) in rev.vertices().iter().zip(down.vertices()) {
            assert!(close(*a, *b));
        }
    }

    #[test]
    fn circle_rejects_bad_input() {
        assert!(make_circle(Vec3::ZERO, Vec3::ZERO, 1.0, 8, 1.0).is_err());
        assert!(make_circle(Vec3::ZERO, Vec3::Z, 0.0, 8, 1.0).is_err());
        assert!(make_circle(Vec3::ZERO, Vec3::Z, -1.0, 8, 1.0).is_err());
    }

    #[test]
    fn rectangle_corners() {
        let r = make_rectangle(Vec3::ZERO, Vec3::X, Vec3::Y, 2.0, 2.0, 1, 1.0).unwrap();
        let expect = [
            Vec3::new(-1.0, -1.0, 0.0),
            Vec3::new(1.0, -1.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(-1.0, 1.0, 0.0),
        ];
        assert_eq!(r.len(), 4);
        for (v, e) in r.vertices().iter().zip(expect) {
            assert!(close(*v, e));
        }
    }

    #[test]
    fn rectangle_subdivision_stays_on_perimeter() {
        let r = make_rectangle(Vec3::ZERO, Vec3::X, Vec3::Y, 3.0, 3.0, 3, 1.0).unwrap();
        assert_eq!(r.len(), 12);
        for v in r.vertices() {
            let on_edge = (v.x.abs() - 1.5).abs() < 1e-14 || (v.y.abs() - 1.5).abs() < 1e-14;
            assert!(on_edge && v.x.abs() <= 1.5 + 1e-14 && v.y.abs() <= 1.5 + 1e-14);
        }
    }

    #[test]
    fn rectangle_rejects_parallel_axes() {
        assert!(make_rectangle(Vec3::ZERO, Vec3::X, Vec3::X * 2.0, 1.0, 1.0, 1, 1.0).is_err());
        assert!(make_rectangle(Vec3::ZERO, Vec3::X, Vec3::Y, 0.0, 1.0, 1, 1.0).is_err());
    }

    #[test]
    fn resample_square() {
        let sq = make_rectangle(Vec3::ZERO, Vec3::X, Vec3::Y, 2.0, 2.0, 1, 1.0).unwrap();
        let r = resample_loop(&sq, 0.5).unwrap();
        assert_eq!(r.len(), 16);
        for c in sq.vertices() {
            assert!(r.vertices().iter().any(|v| close(*v, *c)));
        }
        assert!(r.max_segment_length() <= 0.5 + 1e-12);
    }

    #[test]
    fn resample_fine_loop_is_identity() {
        let c = make_circle(Vec3::ZERO, Vec3::Z, 1.0, 64, 2.5).unwrap();
        let r = resample_loop(&c, c.max_segment_length()).unwrap();
        assert_eq!(r, c);
    }

    #[test]
    fn resample_octagon_stays_on_octagon() {
        let c = make_circle(Vec3::ZERO, Vec3::Z, 1.0, 8, 1.0).unwrap();
        let chord = c.max_segment_length();
        let r = resample_loop(&c, chord / 2.0).unwrap();
        assert_eq!(r.len(), 16);
        for v in r.vertices() {
            let d = c
                .segments()
                .map(|(p, q)| point_segment_distance(*v, p, q))
                .fold(f64::INFINITY, f64::min);
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn resample_keeps_orientation_and_current() {
        let c = make_circle(Vec3::ZERO, Vec3::Z, 1.0, 200, -0.5).unwrap();
        let r = resample_loop(&c, 0.1).unwrap();
        assert_eq!(r.current(), -0.5);
        assert!(r.area_vector().z > 0.0);
        assert!(r.max_segment_length() <= 0.1);
    }

    #[test]
    fn validate_reports_coincident_vertices() {
        let lp = BoundaryLoop::new(
            vec![Vec3::ZERO, Vec3::ZERO, Vec3::X, Vec3::Y],
            1.0,
            "dup",
        )
        .unwrap();
        let d = validate_loops(core::slice::from_ref(&lp));
        assert!(d.contains(&Diagnostic::DegenerateSegment { loop_index: 0, vertex: 0 }));
        assert!(BoundarySet::single(lp).is_err());
    }

    #[test]
    fn validate_reports_zero_current() {
        let lp = BoundaryLoop::new(vec![Vec3::ZERO, Vec3::X, Vec3::Y], 0.0, "z").unwrap();
        let set = BoundarySet::single(lp).unwrap();
        assert_eq!(validate(&set), vec![Diagnostic::ZeroCurrent { loop_index: 0 }]);
    }

    #[test]
    fn valid_triangle_has_no_diagnostics() {
        let lp = BoundaryLoop::new(vec![Vec3::ZERO, Vec3::X, Vec3::Y], 1.0, "t").unwrap();
        assert!(validate(&BoundarySet::single(lp).unwrap()).is_empty());
    }

    #[test]
    fn figure_eight_is_a_warning_only() {
        let lp = BoundaryLoop::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
            ],
            1.0,
            "bowtie",
        )
        .unwrap();
        let set = BoundarySet::single(lp).unwrap();
        let d = validate(&set);
        assert!(d.iter().any(|x| matches!(x, Diagnostic::SelfIntersection { .. })));
        assert!(d.iter().all(|x| x.severity() == Severity::Warning));
    }

    #[test]
    fn near_duplicate_non_consecutive() {
        let lp = BoundaryLoop::new(
            vec![Vec3::ZERO, Vec3::X, Vec3::new(1.0, 1.0, 0.0), Vec3::ZERO, Vec3::Y],
            1.0,
            "pinch",
        )
        .unwrap();
        let d = validate_loops(&[lp]);
        assert!(d.contains(&Diagnostic::NearDuplicateVertex { loop_index: 0, first: 0, second: 3 }));
    }

    #[test]
    fn loop_needs_three_vertices() {
        assert!(BoundaryLoop::new(vec![Vec3::ZERO, Vec3::X], 1.0, "").is_err());
        assert!(BoundarySet::new(vec![]).is_err());
    }
}

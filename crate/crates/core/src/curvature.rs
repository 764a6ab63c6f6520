//! Hessian of the field and curvature of its level surfaces.
//!
//! Two independent curvature estimators:
//!
//! * the tensor method: `β = −P H P / |∇Ω|` with `P = I − n nᵀ`, evaluated
//!   pointwise from the analytic Hessian;
//! * a six-point quadratic fit over a mesh triangle and its three
//!   edge-opposite neighbours, used as a cross-check.
//!
//! Sign convention: a positive principal curvature means the surface bends
//! toward `+∇Ω`.

use crate::boundary::BoundarySet;
use crate::error::{Error, Result};
use crate::math;
use crate::tensor::Tensor3;
use crate::vec3::{Point3, Vec3};

/// Relative split below which principal directions are meaningless.
pub const UMBILIC_REL: f64 = 1e-8;
/// 1-norm condition number above which the quadratic stencil is rejected.
pub const STENCIL_MAX_CONDITION: f64 = 1e12;

/// Derivative of one segment's Biot-Savart term, `∂_m G_k` stored at `[m][k]`.
fn segment_hessian(v: Vec3, w: Vec3) -> Tensor3 {
    let d = v - w;
    let (lv, lw) = (v.norm(), w.norm());
    let s = lv + lw;
    let c = v.cross(w);
    let a = lv * lw;
    let b = a + v.dot(w);
    let den = a * b;
    let (uv, uw) = (v / lv, w / lw);
    let mut h = Tensor3::ZERO;
    for m in 0..3 {
        let e = match m {
            0 => Vec3::X,
            1 => Vec3::Y,
            _ => Vec3::Z,
        };
        let ds = uv[m] + uw[m];
        let dc = d.cross(e);
        let da = lw * uv[m] + lv * uw[m];
        let db = da + v[m] + w[m];
        let dden = da * b + a * db;
        let row = -(c * (ds / den) + dc * (s / den) - c * (s * dden / (den * den)));
        h.m[m] = row.to_array();
    }
    h
}

/// Hessian `∂_m ∂_k Ω` before symmetrisation (rounding leaves it slightly asymmetric).
pub fn hessian_unsymmetrized(set: &BoundarySet, r: Point3) -> Result<Tensor3> {
    if !r.is_finite() {
        return Err(Error::DegenerateInput("non-finite evaluation point"));
    }
    let eps = set.eps_boundary();
    let mut total = Tensor3::ZERO;
    for (li, lp) in set.loops().iter().enumerate() {
        let pts = lp.vertices();
        let n = pts.len();
        let mut acc = Tensor3::ZERO;
        for i in 0..n {
            let (p, q) = (pts[i], pts[(i + 1) % n]);
            let (v, w) = (r - p, r - q);
            let dist = crate::boundary::point_segment_distance(r, p, q);
            let b = v.norm() * w.norm() + v.dot(w);
            if dist <= eps || !(b > 0.0) {
                return Err(Error::ApexOnBoundaryLine { loop_index: li, vertex: i });
            }
            acc = acc + segment_hessian(v, w);
        }
        total = total + acc * lp.current();
    }
    Ok(total)
}

/// Symmetrised Hessian of the potential.
pub fn hessian(set: &BoundarySet, r: Point3) -> Result<Tensor3> {
    Ok(hessian_unsymmetrized(set, r)?.symmetrized())
}

/// Shape tensor `β = −P H P / |g|` of the level surface through a point with
/// gradient `grad` and Hessian `hess`; it annihilates the normal.
pub fn shape_tensor(grad: Vec3, hess: &Tensor3) -> Result<Tensor3> {
    let g = grad.norm();
    let n = grad.normalized().ok_or(Error::StationaryGradient)?;
    let p = Tensor3::tangent_projector(n);
    Ok(p.mul_mat(hess).mul_mat(&p) * (-1.0 / g))
}

/// Curvature data of a level surface at one point, `kappa1 ≥ kappa2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureFrame {
    /// Unit surface normal, along `∇Ω` for the tensor method.
    pub normal: Vec3,
    /// Second fundamental form as a tangent 3×3 tensor.
    pub beta: Tensor3,
    pub kappa1: f64,
    pub kappa2: f64,
    pub dir1: Vec3,
    pub dir2: Vec3,
    /// Directions are an arbitrary tangent pair when this is set.
    pub umbilic: bool,
}

impl CurvatureFrame {
    pub fn mean(&self) -> f64 {
        0.5 * (self.kappa1 + self.kappa2)
    }

    pub fn gaussian(&self) -> f64 {
        self.kappa1 * self.kappa2
    }

    /// `sqrt(k1² + k2²)`, the scale used for relative comparisons.
    pub fn magnitude(&self) -> f64 {
        math::hypot(self.kappa1, self.kappa2)
    }

    /// Same frame with `dir1` (and so `dir2`) reversed.
    pub fn flipped_directions(mut self) -> Self {
        self.dir1 = -self.dir1;
        self.dir2 = -self.dir2;
        self
    }
}

fn is_umbilic(k1: f64, k2: f64) -> bool {
    (k1 - k2).abs() <= UMBILIC_REL * (k1.abs() + k2.abs())
}

/// Eigen-decomposition of a shape tensor restricted to the tangent plane.
pub fn frame_from_shape_tensor(normal: Vec3, beta: Tensor3) -> CurvatureFrame {
    let e1 = normal.any_orthonormal();
    let e2 = normal.cross(e1);
    let a = beta.bilinear(e1, e1);
    let b = 0.5 * (beta.bilinear(e1, e2) + beta.bilinear(e2, e1));
    let c = beta.bilinear(e2, e2);
    let mid = 0.5 * (a + c);
    let rad = math::hypot(0.5 * (a - c), b);
    let theta = 0.5 * math::atan2(2.0 * b, a - c);
    let dir1 = e1 * math::cos(theta) + e2 * math::sin(theta);
    let (kappa1, kappa2) = (mid + rad, mid - rad);
    CurvatureFrame {
        normal,
        beta,
        kappa1,
        kappa2,
        dir1,
        dir2: normal.cross(dir1),
        umbilic: is_umbilic(kappa1, kappa2),
    }
}

/// Tensor-method frame from a gradient and Hessian.
pub fn frame_from_derivatives(grad: Vec3, hess: &Tensor3) -> Result<CurvatureFrame> {
    let beta = shape_tensor(grad, hess)?;
    let n = grad.normalized().ok_or(Error::StationaryGradient)?;
    Ok(frame_from_shape_tensor(n, beta))
}

/// Tensor-method frame of the level surface through `r`.
pub fn second_fundamental_form(set: &BoundarySet, r: Point3) -> Result<CurvatureFrame> {
    let grad = crate::gradient::gradient(set, r)?;
    if !(grad.norm() > 0.0) {
        return Err(Error::StationaryGradient);
    }
    frame_from_derivatives(grad, &hessian(set, r)?)
}

/// Solve the 6×6 system in place by Gauss-Jordan with partial pivoting and
/// return the solution together with the 1-norm condition number.
fn solve6(a: [[f64; 6]; 6], rhs: [f64; 6]) -> Option<([f64; 6], f64)> {
    let norm_a = (0..6)
        .map(|j| (0..6).map(|i| a[i][j].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    // augmented with identity so the inverse comes out alongside
    let mut m = [[0.0; 13]; 6];
    for i in 0..6 {
        m[i][..6].copy_from_slice(&a[i]);
        m[i][6 + i] = 1.0;
        m[i][12] = rhs[i];
    }
    for col in 0..6 {
        let piv = (col..6).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[piv][col] == 0.0 {
            return None;
        }
        m.swap(col, piv);
        let inv = 1.0 / m[col][col];
        for x in &mut m[col] {
            *x *= inv;
        }
        for row in 0..6 {
            if row != col {
                let f = m[row][col];
                if f != 0.0 {
                    for k in 0..13 {
                        m[row][k] -= f * m[col][k];
                    }
                }
            }
        }
    }
    let norm_inv = (0..6)
        .map(|j| (0..6).map(|i| m[i][6 + j].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut x = [0.0; 6];
    for i in 0..6 {
        x[i] = m[i][12];
    }
    Some((x, norm_a * norm_inv))
}

/// Curvatures at `origin` of the quadric graph
/// `z = a x² + 2b xy + c y² + f x + g y + h` through six points, in a local
/// frame with `z` along `normal` (which also fixes the sign).
pub fn quadratic_fit_curvature(points: [Point3; 6], origin: Point3, normal: Vec3) -> Result<CurvatureFrame> {
    let n = normal
        .normalized()
        .ok_or(Error::DegenerateInput("zero stencil normal"))?;
    let e1 = n.any_orthonormal();
    let e2 = n.cross(e1);
    let local = points.map(|p| {
        let d = p - origin;
        (d.dot(e1), d.dot(e2), d.dot(n))
    });
    let scale = local
        .iter()
        .fold(0.0, |acc: f64, &(x, y, _)| acc.max(x.abs()).max(y.abs()));
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::SingularStencil);
    }
    let mut a = [[0.0; 6]; 6];
    let mut rhs = [0.0; 6];
    for (row, &(x, y, z)) in local.iter().enumerate() {
        let (x, y) = (x / scale, y / scale);
        a[row] = [x * x, 2.0 * x * y, y * y, x, y, 1.0];
        rhs[row] = z / scale;
    }
    let (sol, cond) = solve6(a, rhs).ok_or(Error::SingularStencil)?;
    if !(cond <= STENCIL_MAX_CONDITION) {
        return Err(Error::SingularStencil);
    }
    let (qa, qb, qc) = (sol[0] / scale, sol[1] / scale, sol[2] / scale);
    let (p, q) = (sol[3], sol[4]);
    let w = math::sqrt(1.0 + p * p + q * q);
    // second and first fundamental forms of the graph at the origin
    let (l11, l12, l22) = (2.0 * qa / w, 2.0 * qb / w, 2.0 * qc / w);
    let (g11, g12, g22) = (1.0 + p * p, p * q, 1.0 + q * q);
    let det_g = g11 * g22 - g12 * g12;
    let tr = l11 * g22 + l22 * g11 - 2.0 * l12 * g12;
    let det_l = l11 * l22 - l12 * l12;
    let mid = 0.5 * tr / det_g;
    let disc = (mid * mid - det_l / det_g).max(0.0);
    let rad = math::sqrt(disc);
    let (k1, k2) = (mid + rad, mid - rad);
    let surface_normal = (n - e1 * p - e2 * q) / w;
    let to_world = |vx: f64, vy: f64| (e1 * vx + e2 * vy + n * (p * vx + q * vy)).normalized();
    // null vector of L − k G, from whichever row is better conditioned
    let (r0, r1) = ((l11 - k1 * g11, l12 - k1 * g12), (l12 - k1 * g12, l22 - k1 * g22));
    let (vx, vy) = if math::hypot(r0.0, r0.1) >= math::hypot(r1.0, r1.1) {
        (r0.1, -r0.0)
    } else {
        (r1.1, -r1.0)
    };
    let umbilic = is_umbilic(k1, k2);
    let fallback = surface_normal.any_orthonormal();
    let dir1 = if umbilic { None } else { to_world(vx, vy) }.unwrap_or(fallback);
    let dir2 = surface_normal.cross(dir1);
    let beta = Tensor3::outer(dir1, dir1) * k1 + Tensor3::outer(dir2, dir2) * k2;
    Ok(CurvatureFrame {
        normal: surface_normal,
        beta,
        kappa1: k1,
        kappa2: k2,
        dir1,
        dir2,
        umbilic,
    })
}

/// Six-point stencil at the centroid of a mesh triangle: its corners plus
/// the vertex across each edge.
pub fn stencil_curvatures(tri: [Point3; 3], opposite: [Point3; 3], normal: Vec3) -> Result<CurvatureFrame> {
    let origin = (tri[0] + tri[1] + tri[2]) / 3.0;
    quadratic_fit_curvature([tri[0], tri[1], tri[2], opposite[0], opposite[1], opposite[2]], origin, normal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::make_circle;

    fn ring() -> BoundarySet {
        BoundarySet::single(make_circle(Vec3::ZERO, Vec3::Z, 1.0, 64, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn hessian_is_trace_free_and_symmetric() {
        let set = ring();
        let h = hessian_unsymmetrized(&set, Vec3::new(0.3, -0.4, 0.5)).unwrap();
        let scale = h.max_abs();
        assert!(h.trace().abs() < 1e-12 * scale);
        assert!((h - h.transpose()).max_abs() < 1e-12 * scale);
    }

    #[test]
    fn hessian_matches_gradient_differences() {
        let set = ring();
        let r = Vec3::new(0.2, 0.1, 0.6);
        let h = hessian(&set, r).unwrap();
        let step = 1e-5;
        for (m, e) in [Vec3::X, Vec3::Y, Vec3::Z].into_iter().enumerate() {
            let gp = crate::gradient::gradient(&set, r + e * step).unwrap();
            let gm = crate::gradient::gradient(&set, r - e * step).unwrap();
            let fd = (gp - gm) / (2.0 * step);
            assert!((fd - h.row(m)).norm() < 1e-7 * h.max_abs(), "row {m}");
        }
    }

    #[test]
    fn sphere_form_from_synthetic_field() {
        // Ω = −|r|, level sets are spheres whose gradient points inward, so
        // they bend toward +∇Ω with curvature 1/R
        let r = Vec3::new(0.0, 0.0, 2.0);
        let g = -r / r.norm();
        let n = r / r.norm();
        let h = (Tensor3::IDENTITY - Tensor3::outer(n, n)) * (-1.0 / r.norm());
        let pc = frame_from_derivatives(g, &h).unwrap();
        assert!((pc.kappa1 - 0.5).abs() < 1e-15 && (pc.kappa2 - 0.5).abs() < 1e-15);
        assert!(pc.umbilic);
    }

    #[test]
    fn cylinder_directions() {
        let g = Vec3::Z;
        let h = Tensor3::from_rows([[-2.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        let pc = frame_from_derivatives(g, &h).unwrap();
        assert!((pc.kappa1 - 2.0).abs() < 1e-15 && pc.kappa2.abs() < 1e-15);
        assert!((pc.dir1.dot(Vec3::X).abs() - 1.0).abs() < 1e-14);
        assert!(pc.dir2.dot(Vec3::Z).abs() < 1e-15);
    }

    #[test]
    fn stencil_recovers_paraboloid() {
        let f = |x: f64, y: f64| Vec3::new(x, y, 0.5 * (3.0 * x * x + 1.0 * y * y));
        let h = 1e-3;
        let tri = [f(h, 0.0), f(-0.5 * h, 0.8 * h), f(-0.5 * h, -0.8 * h)];
        let opp = [f(-h, -1.7 * h), f(1.1 * h, 0.9 * h), f(-1.2 * h, 0.1 * h)];
        let pc = stencil_curvatures(tri, opp, Vec3::Z).unwrap();
        assert!((pc.kappa1 - 3.0).abs() < 1e-2, "{}", pc.kappa1);
        assert!((pc.kappa2 - 1.0).abs() < 1e-2, "{}", pc.kappa2);
        assert!(pc.dir1.dot(Vec3::X).abs() > 0.999);
    }

    #[test]
    fn fit_on_round_paraboloid() {
        let f = |x: f64, y: f64| Vec3::new(x, y, x * x + y * y);
        let pts = [f(0.1, 0.0), f(-0.05, 0.08), f(-0.05, -0.08), f(0.0, 0.2), f(0.15, -0.12), f(-0.2, 0.02)];
        let pc = quadratic_fit_curvature(pts, Vec3::ZERO, Vec3::Z).unwrap();
        assert!((pc.kappa1 - 2.0).abs() < 1e-9 && (pc.kappa2 - 2.0).abs() < 1e-9);
        assert!(pc.umbilic);
    }

    #[test]
    fn fit_on_plane() {
        let f = |x: f64, y: f64| Vec3::new(x, y, 3.0 + 0.1 * x);
        let pts = [f(0.1, 0.0), f(-0.05, 0.08), f(-0.05, -0.08), f(0.0, 0.2), f(0.15, -0.12), f(-0.2, 0.02)];
        let pc = quadratic_fit_curvature(pts, Vec3::new(0.0, 0.0, 3.0), Vec3::Z).unwrap();
        assert!(pc.kappa1.abs() < 1e-12 && pc.kappa2.abs() < 1e-12);
    }

    #[test]
    fn shape_tensor_kills_normal() {
        let set = ring();
        let fr = second_fundamental_form(&set, Vec3::new(0.3, 0.2, 0.4)).unwrap();
        assert!(fr.beta.mul_vec(fr.normal).norm() < 1e-12 * fr.beta.frobenius_norm());
        assert!(fr.dir1.dot(fr.dir2).abs() < 1e-12 && fr.dir1.dot(fr.normal).abs() < 1e-12);
        assert!((fr.beta.trace() - 2.0 * fr.mean()).abs() < 1e-12 * fr.magnitude());
    }

    #[test]
    fn stencil_rejects_collinear() {
        let pts = |t: f64| Vec3::new(t, 0.0, 0.0);
        let err = stencil_curvatures([pts(0.0), pts(1.0), pts(2.0)], [pts(3.0), pts(4.0), pts(5.0)], Vec3::Z);
        assert_eq!(err, Err(Error::SingularStencil));
    }
}

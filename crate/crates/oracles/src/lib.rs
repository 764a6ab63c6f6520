//! Reference implementations for checking `omegasurf-core`.
//!
//! Everything here is written from scratch on plain `[f64; 3]` arithmetic so
//! that a mistake in the kernel is not mirrored by the code checking it. The
//! only shared pieces are the boundary data types and `Vec3` as a carrier.

use std::f64::consts::PI;
use std::fmt;

use omegasurf_core::{BoundaryLoop, BoundarySet, Point3, Tensor3, Vec3};
use twofloat::TwoFloat;

type V = [f64; 3];

fn arr(p: Point3) -> V {
    [p.x, p.y, p.z]
}

fn vec(a: V) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

fn sub(a: V, b: V) -> V {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: V, b: V) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V, b: V) -> V {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(a: V) -> f64 {
    dot(a, a).sqrt()
}

fn scale(a: V, s: f64) -> V {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleError {
    NotStarShaped,
    Degenerate,
    ApexOnBoundaryLine,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleError::NotStarShaped => "loop is not star-shaped about the fan hub",
            OracleError::Degenerate => "degenerate configuration",
            OracleError::ApexOnBoundaryLine => "apex on a boundary segment",
        })
    }
}

impl std::error::Error for OracleError {}

/// Reduces an angle difference modulo 4π into `(−2π, 2π]`.
pub fn wrap_4pi(x: f64) -> f64 {
    let t = 4.0 * PI;
    let mut r = x.rem_euclid(t);
    if r > 2.0 * PI {
        r -= t;
    }
    r
}

/// Classic solid angle of a circle of radius `rho` on its axis at height `z`.
pub fn on_axis_circle(rho: f64, z: f64) -> f64 {
    2.0 * PI * (1.0 - z / (rho * rho + z * z).sqrt())
}

/// Van Oosterom-Strackee triangle formula with `u, v, w = r − p_k`.
pub fn triangle_solid_angle(p1: Point3, p2: Point3, p3: Point3, r: Point3) -> Result<f64, OracleError> {
    let r = arr(r);
    let (u, v, w) = (sub(r, arr(p1)), sub(r, arr(p2)), sub(r, arr(p3)));
    let (lu, lv, lw) = (norm(u), norm(v), norm(w));
    let num = dot(cross(u, v), w);
    let den = lu * lv * lw + dot(u, v) * lw + dot(v, w) * lu + dot(w, u) * lv;
    if lu * lv * lw == 0.0 || (num.abs() < 1e-14 * lu * lv * lw && den.abs() < 1e-14 * lu * lv * lw) {
        return Err(OracleError::Degenerate);
    }
    Ok(2.0 * (num + 0.0).atan2(den))
}

/// Sum of triangle solid angles over the fan `(hub, p_i, p_{i+1})`.
///
/// The loop must be planar and star-shaped about `hub`, which must lie in
/// its plane: every fan triangle has to share the loop's orientation.
///
/// The raw sum lies in (−2π, 2π]. Apexes strictly on the side the loop's
/// normal points away from get 4π added, which puts the result on the
/// classic branch [0, 4π) (values above 2π below the loop).
pub fn fan_triangulation_solid_angle_about(lp: &BoundaryLoop, hub: Point3, apex: Point3) -> Result<f64, OracleError> {
    let pts: Vec<V> = lp.vertices().iter().map(|&p| arr(p)).collect();
    let h = arr(hub);
    let n = pts.len();
    let mut area = [0.0; 3];
    for i in 0..n {
        let c = cross(sub(pts[i], h), sub(pts[(i + 1) % n], h));
        area = [area[0] + c[0], area[1] + c[1], area[2] + c[2]];
    }
    let an = norm(area);
    if an == 0.0 {
        return Err(OracleError::NotStarShaped);
    }
    let mut total = 0.0;
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        let c = cross(sub(a, h), sub(b, h));
        if dot(c, area) <= 0.0 || norm(cross(c, area)) > 1e-9 * norm(c) * an {
            return Err(OracleError::NotStarShaped);
        }
        total += triangle_solid_angle(vec(h), vec(a), vec(b), apex)?;
    }
    let extent = pts.iter().map(|&p| norm(sub(p, h))).fold(0.0, f64::max);
    let height = dot(sub(arr(apex), h), area) / an;
    if height < -1e-12 * extent && total < 0.0 {
        total += 4.0 * PI;
    }
    Ok(total)
}

/// [`fan_triangulation_solid_angle_about`] with the vertex centroid as hub.
pub fn fan_triangulation_solid_angle(lp: &BoundaryLoop, apex: Point3) -> Result<f64, OracleError> {
    let n = lp.len() as f64;
    let c = lp.vertices().iter().fold([0.0; 3], |acc, p| [acc[0] + p.x, acc[1] + p.y, acc[2] + p.z]);
    fan_triangulation_solid_angle_about(lp, vec(scale(c, 1.0 / n)), apex)
}

/// Segment gradient from the end-angle (Biot-Savart) form,
/// `−|v−w| (v×w)(cos ξ + cos ζ) / |v×w|²`, with the end angles taken from
/// the law of cosines on the triangle `(p, q, r)`.
pub fn biot_savart_endpoint_form(p: Point3, q: Point3, r: Point3) -> Result<Vec3, OracleError> {
    let (v, w) = (sub(arr(r), arr(p)), sub(arr(r), arr(q)));
    let seg = sub(v, w);
    let l = norm(seg);
    let (lv, lw) = (norm(v), norm(w));
    // foot of the perpendicular within the segment means r is on it
    let t = (dot(v, seg) / (l * l)).clamp(0.0, 1.0);
    let foot_dist = norm(sub(v, scale(seg, t)));
    if l == 0.0 || foot_dist <= 1e-9 * l {
        return Err(OracleError::ApexOnBoundaryLine);
    }
    let vw = cross(v, w);
    let vw2 = dot(vw, vw);
    if vw2 == 0.0 {
        return Ok(Vec3::ZERO);
    }
    let cos_xi = (l * l + lv * lv - lw * lw) / (2.0 * l * lv);
    let cos_zeta = (l * l + lw * lw - lv * lv) / (2.0 * l * lw);
    Ok(vec(scale(vw, -l * (cos_xi + cos_zeta) / vw2)))
}

/// Segment gradient from the direct form
/// `−(v−w)·(v/|v| − w/|w|) (v×w) / |v×w|²` in plain `f64`.
pub fn gradient_direct_f64(p: Point3, q: Point3, r: Point3) -> Vec3 {
    let (v, w) = (sub(arr(r), arr(p)), sub(arr(r), arr(q)));
    let (lv, lw) = (norm(v), norm(w));
    let k = dot(sub(v, w), sub(scale(v, 1.0 / lv), scale(w, 1.0 / lw)));
    let vw = cross(v, w);
    vec(scale(vw, -k / dot(vw, vw)))
}

type D = TwoFloat;
type DV = [D; 3];

fn dd(x: f64) -> D {
    TwoFloat::from(x)
}

fn dsub(a: DV, b: DV) -> DV {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn ddot(a: DV, b: DV) -> D {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn dcross(a: DV, b: DV) -> DV {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Quotient to full double-double precision; the crate's own division
/// stops at about `f64` accuracy.
fn ddiv(a: D, b: D) -> D {
    let q1 = dd(f64::from(a) / f64::from(b));
    let r1 = a - q1 * b;
    let q2 = dd(f64::from(r1) / f64::from(b));
    let r2 = r1 - q2 * b;
    let q3 = dd(f64::from(r2) / f64::from(b));
    q1 + q2 + q3
}

/// Square root to double-double precision: one Newton step on the `f64` estimate.
fn dsqrt(x: D) -> D {
    let s = dd(f64::from(x).sqrt());
    if f64::from(s) == 0.0 {
        return s;
    }
    s + ddiv(x - s * s, s * 2.0)
}

/// The direct form evaluated in double-double arithmetic (≈ 32 digits).
pub fn gradient_direct_extended(p: Point3, q: Point3, r: Point3) -> Vec3 {
    let (p, q, r) = (arr(p).map(dd), arr(q).map(dd), arr(r).map(dd));
    let (v, w) = (dsub(r, p), dsub(r, q));
    let (lv, lw) = (dsqrt(ddot(v, v)), dsqrt(ddot(w, w)));
    let uv = v.map(|x| ddiv(x, lv));
    let uw = w.map(|x| ddiv(x, lw));
    let k = ddot(dsub(v, w), dsub(uv, uw));
    let vw = dcross(v, w);
    let f = -ddiv(k, ddot(vw, vw));
    Vec3::new(f64::from(vw[0] * f), f64::from(vw[1] * f), f64::from(vw[2] * f))
}

/// `(d·x/|x|)(d×x)/|d×x|²`.
fn vertex_term(d: V, x: V) -> V {
    let c = cross(d, x);
    scale(c, dot(d, x) / (norm(x) * dot(c, c)))
}

/// Per-vertex gradient form: each vertex contributes the arriving-segment
/// term minus the leaving-segment term.
pub fn vertex_form_gradient(set: &BoundarySet, r: Point3) -> Vec3 {
    let r = arr(r);
    let mut total = [0.0; 3];
    for lp in set.loops() {
        let pts: Vec<V> = lp.vertices().iter().map(|&p| arr(p)).collect();
        let n = pts.len();
        for i in 0..n {
            let a = sub(pts[i], pts[(i + n - 1) % n]);
            let b = sub(pts[(i + 1) % n], pts[i]);
            let v = sub(r, pts[i]);
            let t = sub(vertex_term(a, v), vertex_term(b, v));
            total = [
                total[0] + lp.current() * t[0],
                total[1] + lp.current() * t[1],
                total[2] + lp.current() * t[2],
            ];
        }
    }
    vec(total)
}

/// Central-difference gradient of `f` with step `h`.
pub fn fd_gradient(f: impl Fn(Point3) -> f64, r: Point3, h: f64) -> Vec3 {
    let e = [Vec3::X, Vec3::Y, Vec3::Z];
    let g: Vec<f64> = e
        .iter()
        .map(|&d| (f(r + d * h) - f(r - d * h)) / (2.0 * h))
        .collect();
    Vec3::new(g[0], g[1], g[2])
}

/// Second central differences of `f` with step `h`.
pub fn fd_hessian(f: impl Fn(Point3) -> f64, r: Point3, h: f64) -> Tensor3 {
    let e = [Vec3::X, Vec3::Y, Vec3::Z];
    let f0 = f(r);
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        m[i][i] = (f(r + e[i] * h) - 2.0 * f0 + f(r - e[i] * h)) / (h * h);
        for j in 0..i {
            let s = f(r + (e[i] + e[j]) * h) - f(r + (e[i] - e[j]) * h) - f(r - (e[i] - e[j]) * h)
                + f(r - (e[i] + e[j]) * h);
            m[i][j] = s / (4.0 * h * h);
            m[j][i] = m[i][j];
        }
    }
    Tensor3::from_rows(m)
}

/// Normalised residual of the corner-cone equation
/// `ρ² = (sin β · z / tan(Ω/2) + x)² / cos² β` for a point in the wedge
/// frame (corner at the origin, bisector along +x, wedge in `z = 0`).
/// `omega` is the classic solid angle.
pub fn cone_residual(beta: f64, omega: f64, point: Point3) -> f64 {
    let (x, y, z) = (point.x, point.y, point.z);
    let rho2 = x * x + y * y + z * z;
    let c = beta.cos();
    let rhs = (beta.sin() * z / (0.5 * omega).tan() + x).powi(2) / (c * c);
    (rho2 - rhs).abs() / rho2
}

/// Algebraic (Kåsa) circle fit in 2D; returns `(cx, cy, radius)`.
pub fn fit_circle(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    if points.len() < 3 {
        return None;
    }
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let (mut suu, mut svv, mut suv, mut suuu, mut svvv, mut suvv, mut svuu) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (u, v) = (x - mx, y - my);
        suu += u * u;
        svv += v * v;
        suv += u * v;
        suuu += u * u * u;
        svvv += v * v * v;
        suvv += u * v * v;
        svuu += v * u * u;
    }
    let det = suu * svv - suv * suv;
    if det.abs() < 1e-300 {
        return None;
    }
    let b1 = 0.5 * (suuu + suvv);
    let b2 = 0.5 * (svvv + svuu);
    let uc = (b1 * svv - b2 * suv) / det;
    let vc = (suu * b2 - suv * b1) / det;
    let r = (uc * uc + vc * vc + (suu + svv) / n).sqrt();
    Some((uc + mx, vc + my, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_range() {
        assert_eq!(wrap_4pi(0.0), 0.0);
        assert!((wrap_4pi(4.0 * PI + 0.1) - 0.1).abs() < 1e-12);
        assert!((wrap_4pi(-0.1) + 0.1).abs() < 1e-12);
        assert!((wrap_4pi(2.0 * PI) - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn octant() {
        let o = triangle_solid_angle(Vec3::X, Vec3::Z, Vec3::Y, Vec3::ZERO).unwrap();
        assert!((o - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn cone_points_by_construction() {
        let (beta, omega) = (0.4_f64, 1.3_f64);
        for &(x, z) in &[(0.5, 0.2), (1.0, 0.7), (0.2, 0.05)] {
            let s = beta.sin() * z / (0.5 * omega).tan() + x;
            let y2 = s * s / beta.cos().powi(2) - x * x - z * z;
            if y2 > 0.0 {
                assert!(cone_residual(beta, omega, Vec3::new(x, y2.sqrt(), z)) < 1e-12);
            }
        }
    }

    #[test]
    fn circle_fit_exact() {
        let pts: Vec<(f64, f64)> = (0..7)
            .map(|k| {
                let t = 0.3 + k as f64 * 0.4;
                (2.0 + 3.0 * t.cos(), -1.0 + 3.0 * t.sin())
            })
            .collect();
        let (cx, cy, r) = fit_circle(&pts).unwrap();
        assert!((cx - 2.0).abs() < 1e-12 && (cy + 1.0).abs() < 1e-12 && (r - 3.0).abs() < 1e-12);
    }

    #[test]
    fn fd_of_a_quadratic() {
        let f = |p: Point3| p.x * p.x + 3.0 * p.x * p.y - p.z * p.z;
        let h = fd_hessian(f, Vec3::new(0.3, 0.1, 0.2), 1e-3);
        assert!((h[(0, 1)] - 3.0).abs() < 1e-7 && (h[(2, 2)] + 2.0).abs() < 1e-7);
        let g = fd_gradient(f, Vec3::new(1.0, 0.0, 1.0), 1e-4);
        assert!((g - Vec3::new(2.0, 3.0, -2.0)).norm() < 1e-7);
    }
}

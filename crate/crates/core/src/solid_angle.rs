//! Solid angle subtended by boundary loops, from the discrete geodesic
//! curvature (kink angles) of their images on the unit sphere.
//!
//! Two conventions coexist:
//!
//! * **classic** `Ω = 2π − Σ α_i` for a single loop, in `(−π, 5π)`; it tends
//!   to 0 far above a planar counterclockwise loop and to 4π far below it.
//! * **potential** `Ω = −Σ_w I_w Σ_i α_i` for any number of weighted loops.
//!   This is what the solver works with. For one loop with unit current the
//!   two differ by exactly 2π: `classic = potential + 2π`.
//!
//! Kink angles use the principal `atan2` branch, so the potential jumps by
//! `4π I_w` across the locus where a kink angle wraps (for a planar loop,
//! the part of its plane outside the loop). No unwrapping is attempted.

use core::f64::consts::PI;

use crate::boundary::{point_segment_distance, BoundaryLoop, BoundarySet};
use crate::curvature;
use crate::error::{Error, Result};
use crate::gradient::segment_gradient_unchecked;
use crate::math;
use crate::sum::{CompensatedSum, CompensatedVecSum};
use crate::tensor::Tensor3;
use crate::vec3::{Point3, Vec3};

/// Relative collinearity tolerance for kink angles: `|a × v| ≤ tol |a||v|`
/// means the apex is on the line through a segment.
pub const COLLINEAR_REL: f64 = 1e-9;

/// Which scalar a caller wants reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialConvention {
    /// `2π − Σ α`, only for one loop with current 1.
    SingleLoopClassic,
    /// `−Σ I_w Σ α`; always defined.
    MultiLoopNo2Pi,
}

impl PotentialConvention {
    pub fn evaluate(self, set: &BoundarySet, r: Point3) -> Result<f64> {
        match self {
            PotentialConvention::SingleLoopClassic => classic_omega(set, r),
            PotentialConvention::MultiLoopNo2Pi => potential(set, r),
        }
    }
}

/// Potential, gradient and (optionally) Hessian at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// Potential, 2π-free convention (steradians).
    pub omega: f64,
    /// Gradient (steradians per length).
    pub grad: Vec3,
    /// Symmetrised Hessian (steradians per length²).
    pub hessian: Option<Tensor3>,
}

/// Spherical angle between consecutive segments `a` (arriving) and `b`
/// (leaving) as seen from an apex at offset `v` from the shared vertex.
///
/// Result in `(−π, π]`; positive when `a`, `b` turn counterclockwise seen from the apex.
pub fn kink_angle(a: Vec3, b: Vec3, v: Vec3) -> Result<f64> {
    let (y, x) = kink_parts(a, b, v)?;
    Ok(math::atan2(y, x))
}

/// Relative size of the kink numerator below which the apex counts as lying
/// in the plane of the two segments.
const IN_PLANE_REL: f64 = 1e-12;

fn kink_parts(a: Vec3, b: Vec3, v: Vec3) -> Result<(f64, f64)> {
    let vn = v.norm();
    if a.cross(v).norm() <= COLLINEAR_REL * a.norm() * vn
        || b.cross(v).norm() <= COLLINEAR_REL * b.norm() * vn
    {
        return Err(Error::ApexOnBoundaryLine { loop_index: 0, vertex: 0 });
    }
    // `+ 0.0` folds -0.0 into +0.0 so in-plane apexes land on +π, never -π
    let y = vn * a.cross(b).dot(v) + 0.0;
    let x = a.dot(b) * v.dot(v) - a.dot(v) * b.dot(v);
    Ok((y, x))
}

/// Kink angle inside a loop. When the apex sits in the plane of a reversing
/// kink, `±π` is chosen as the limit from the side the loop normal points
/// to, which keeps in-plane values at 2π inside and 0 outside for
/// non-convex planar loops too.
struct LoopKinks<'a> {
    lp: &'a BoundaryLoop,
    normal: Option<Vec3>,
}

impl<'a> LoopKinks<'a> {
    fn new(lp: &'a BoundaryLoop) -> Self {
        LoopKinks { lp, normal: None }
    }

    fn angle(&mut self, a: Vec3, b: Vec3, v: Vec3) -> Result<f64> {
        let (y, x) = kink_parts(a, b, v)?;
        if x < 0.0 && y.abs() <= IN_PLANE_REL * v.norm_sq() * a.norm() * b.norm() {
            let n = *self.normal.get_or_insert_with(|| self.lp.area_vector());
            return Ok(if a.cross(b).dot(n) < 0.0 { -PI } else { PI });
        }
        Ok(math::atan2(y, x))
    }
}

/// `Σ α_i` over the loop's vertices, accumulated with compensation.
pub fn loop_angle_sum(lp: &BoundaryLoop, r: Point3) -> Result<f64> {
    let pts = lp.vertices();
    let n = pts.len();
    let mut sum = CompensatedSum::new();
    let mut kinks = LoopKinks::new(lp);
    for i in 0..n {
        let prev = pts[(i + n - 1) % n];
        let next = pts[(i + 1) % n];
        let alpha = kinks.angle(pts[i] - prev, next - pts[i], r - pts[i]).map_err(|e| e.at(0, i))?;
        sum.add(alpha);
    }
    Ok(sum.total())
}

/// Classic solid angle `2π − Σ α_i` of a single loop (its current is ignored).
pub fn solid_angle_classic(lp: &BoundaryLoop, r: Point3) -> Result<f64> {
    Ok(2.0 * PI - loop_angle_sum(lp, r)?)
}

/// Closed-form solid angle of the straight-sided triangle `p1 p2 p3` at `r`.
///
/// Uses the vectors `r − p_k`, which makes the value agree with
/// [`solid_angle_classic`] of the loop `[p1, p2, p3]` modulo 4π. The result
/// lies in `(−2π, 2π]`.
pub fn triangle_solid_angle(p1: Point3, p2: Point3, p3: Point3, r: Point3) -> Result<f64> {
    let (u, v, w) = (r - p1, r - p2, r - p3);
    let (lu, lv, lw) = (u.norm(), v.norm(), w.norm());
    let scale = lu * lv * lw;
    let num = u.cross(v).dot(w) + 0.0;
    let den = scale + u.dot(v) * lw + v.dot(w) * lu + w.dot(u) * lv;
    let tol = 1e-14 * scale;
    if !(scale > 0.0) || (num.abs() <= tol && den.abs() <= tol) {
        return Err(Error::DegenerateTriangle);
    }
    Ok(2.0 * math::atan2(num, den))
}

/// Per-loop accumulation shared by the potential and gradient evaluators.
fn loop_field(
    lp: &BoundaryLoop,
    r: Point3,
    eps: f64,
    want_angle: bool,
    want_grad: bool,
) -> Result<(f64, Vec3)> {
    let pts = lp.vertices();
    let n = pts.len();
    let mut angle = CompensatedSum::new();
    let mut grad = CompensatedVecSum::new();
    let mut kinks = LoopKinks::new(lp);
    for i in 0..n {
        let p = pts[i];
        let next = pts[(i + 1) % n];
        if point_segment_distance(r, p, next) <= eps {
            return Err(Error::ApexOnBoundaryLine { loop_index: 0, vertex: i });
        }
        let v = r - p;
        if want_angle {
            let prev = pts[(i + n - 1) % n];
            angle.add(kinks.angle(p - prev, next - p, v).map_err(|e| e.at(0, i))?);
        }
        if want_grad {
            grad.add(segment_gradient_unchecked(v, r - next));
        }
    }
    Ok((angle.total(), grad.total()))
}

pub(crate) fn accumulate(set: &BoundarySet, r: Point3, want_potential: bool, want_grad: bool) -> Result<(f64, Vec3)> {
    if !r.is_finite() {
        return Err(Error::DegenerateInput("non-finite evaluation point"));
    }
    let eps = set.eps_boundary();
    let mut pot = CompensatedSum::new();
    let mut grad = CompensatedVecSum::new();
    for (li, lp) in set.loops().iter().enumerate() {
        let (s, g) = loop_field(lp, r, eps, want_potential, want_grad).map_err(|e| e.in_loop(li))?;
        pot.add(-lp.current() * s);
        grad.add(g * lp.current());
    }
    Ok((pot.total(), grad.total()))
}

/// Current-weighted, 2π-free potential `−Σ_w I_w Σ_i α_i`.
pub fn potential(set: &BoundarySet, r: Point3) -> Result<f64> {
    accumulate(set, r, true, false).map(|(p, _)| p)
}

/// Classic solid angle for a set that holds one loop with current 1.
pub fn classic_omega(set: &BoundarySet, r: Point3) -> Result<f64> {
    if !set.is_classic_eligible() {
        return Err(Error::NotClassicEligible);
    }
    Ok(potential(set, r)? + 2.0 * PI)
}

/// Potential and gradient in one pass; the Hessian on request.
pub fn sample(set: &BoundarySet, r: Point3, with_hessian: bool) -> Result<FieldSample> {
    let (omega, grad) = accumulate(set, r, true, true)?;
    let hessian = if with_hessian {
        Some(curvature::hessian(set, r)?)
    } else {
        None
    };
    Ok(FieldSample { omega, grad, hessian })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{make_circle, make_rectangle};
    use alloc::vec;

    fn unit_square() -> BoundaryLoop {
        make_rectangle(Vec3::ZERO, Vec3::X, Vec3::Y, 2.0, 2.0, 1, 1.0).unwrap()
    }

    #[test]
    fn non_convex_loop_in_plane() {
        let ell = BoundaryLoop::new(
            [(0.0, 0.0), (3.0, 0.0), (3.0, 1.0), (1.0, 1.0), (1.0, 3.0), (0.0, 3.0)]
                .iter()
                .map(|&(x, y)| Vec3::new(x, y, 0.0))
                .collect(),
            1.0,
            "ell",
        )
        .unwrap();
        for (x, y) in [(2.5, 0.5), (0.5, 2.5), (0.5, 0.5)] {
            let w = solid_angle_classic(&ell, Vec3::new(x, y, 0.0)).unwrap();
            assert!((w - 2.0 * PI).abs() < 1e-12, "({x}, {y}) {w}");
        }
        for (x, y) in [(2.0, 2.0), (-1.0, 1.7), (4.0, 0.5)] {
            let w = solid_angle_classic(&ell, Vec3::new(x, y, 0.0)).unwrap();
            assert!(w.abs() < 1e-12, "({x}, {y}) {w}");
        }
    }

    #[test]
    fn orthogonal_kink_is_quarter_turn() {
        let a = kink_angle(Vec3::X, Vec3::Y, Vec3::Z).unwrap();
        assert!((a - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn straight_through_has_no_kink() {
        let a = Vec3::new(1.0, 2.0, 0.5);
        assert_eq!(kink_angle(a, a, Vec3::new(0.3, -1.0, 2.0)).unwrap(), 0.0);
    }

    #[test]
    fn swapping_segments_negates() {
        let (a, b, v) = (Vec3::new(1.0, 0.2, 0.0), Vec3::new(-0.3, 1.0, 0.1), Vec3::new(0.2, 0.4, 1.5));
        let k1 = kink_angle(a, b, v).unwrap();
        let k2 = kink_angle(b, a, v).unwrap();
        assert!((k1 + k2).abs() < 1e-15);
    }

    #[test]
    fn kink_on_segment_line_is_rejected() {
        assert!(matches!(
            kink_angle(Vec3::X, Vec3::Y, Vec3::X * 3.0),
            Err(Error::ApexOnBoundaryLine { .. })
        ));
    }

    #[test]
    fn in_plane_values() {
        let sq = unit_square();
        let inside = solid_angle_classic(&sq, Vec3::new(0.3, -0.2, 0.0)).unwrap();
        let outside = solid_angle_classic(&sq, Vec3::new(2.5, 0.7, 0.0)).unwrap();
        assert!((inside - 2.0 * PI).abs() < 1e-12);
        assert!(outside.abs() < 1e-12);
    }

    #[test]
    fn far_above_and_below() {
        let sq = unit_square();
        let up = solid_angle_classic(&sq, Vec3::new(0.0, 0.0, 1e4)).unwrap();
        let down = solid_angle_classic(&sq, Vec3::new(0.0, 0.0, -1e4)).unwrap();
        assert!(up > 0.0 && up < 1e-7);
        assert!((down - 4.0 * PI).abs() < 1e-7);
    }

    #[test]
    fn octant_triangle() {
        // apex sees x, z, y counterclockwise
        let o = triangle_solid_angle(Vec3::X, Vec3::Z, Vec3::Y, Vec3::ZERO).unwrap();
        assert!((o - PI / 2.0).abs() < 1e-14);
        let flipped = triangle_solid_angle(Vec3::X, Vec3::Y, Vec3::Z, Vec3::ZERO).unwrap();
        assert!((flipped + PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn triangle_coplanar_outside_is_zero() {
        let o = triangle_solid_angle(Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::new(2.0, 2.0, 0.0)).unwrap();
        assert_eq!(o, 0.0);
    }

    #[test]
    fn triangle_apex_on_vertex_is_degenerate() {
        assert_eq!(
            triangle_solid_angle(Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::X),
            Err(Error::DegenerateTriangle)
        );
    }

    #[test]
    fn potential_is_classic_minus_two_pi() {
        let c = make_circle(Vec3::ZERO, Vec3::Z, 1.0, 64, 1.0).unwrap();
        let set = BoundarySet::single(c.clone()).unwrap();
        let r = Vec3::new(0.2, 0.1, 0.7);
        let classic = solid_angle_classic(&c, r).unwrap();
        assert!((potential(&set, r).unwrap() + 2.0 * PI - classic).abs() < 1e-13);
        assert!((classic_omega(&set, r).unwrap() - classic).abs() < 1e-13);
        let inside = potential(&set, Vec3::new(0.1, 0.0, 0.0)).unwrap();
        assert!(inside.abs() < 1e-12);
    }

    #[test]
    fn classic_needs_unit_single_loop() {
        let c = make_circle(Vec3::ZERO, Vec3::Z, 1.0, 16, 2.0).unwrap();
        let set = BoundarySet::single(c).unwrap();
        assert_eq!(classic_omega(&set, Vec3::Z), Err(Error::NotClassicEligible));
    }

    #[test]
    fn superposition_and_sign() {
        let c = make_circle(Vec3::ZERO, Vec3::Z, 1.0, 64, 1.0).unwrap();
        let one = BoundarySet::single(c.clone()).unwrap();
        let two = BoundarySet::new(vec![c.clone(), c.clone().with_label("twin")]).unwrap();
        let neg = BoundarySet::single(c.with_current(-1.0)).unwrap();
        let r = Vec3::new(0.0, 0.0, 0.8);
        let p1 = potential(&one, r).unwrap();
        assert!((potential(&two, r).unwrap() - 2.0 * p1).abs() < 1e-13);
        assert_eq!(potential(&neg, r).unwrap(), -p1);
    }

    #[test]
    fn rejects_points_on_wire() {
        let set = BoundarySet::single(unit_square()).unwrap();
        let err = potential(&set, Vec3::new(1.0, 0.3, 0.0)).unwrap_err();
        assert_eq!(err, Error::ApexOnBoundaryLine { loop_index: 0, vertex: 1 });
    }

    #[test]
    fn sample_combines_both() {
        let set = BoundarySet::single(make_circle(Vec3::ZERO, Vec3::Z, 1.0, 32, 1.0).unwrap()).unwrap();
        let r = Vec3::new(0.3, -0.2, 0.4);
        let s = sample(&set, r, true).unwrap();
        assert_eq!(s.omega, potential(&set, r).unwrap());
        assert_eq!(s.grad, crate::gradient::gradient(&set, r).unwrap());
        assert!(s.hessian.is_some());
    }
}

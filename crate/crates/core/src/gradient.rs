//! Gradient of the solid angle: a Biot-Savart sum over straight segments.
//!
//! Each segment `p → q` contributes
//!
//! ```text
//!   −(|v| + |w|) (v × w) / ( |v||w| (|v||w| + v·w) ),   v = r − p,  w = r − q
//! ```
//!
//! which keeps full relative accuracy when `v` and `w` are nearly parallel
//! (apex close to the segment's line but beyond its ends), where the
//! textbook end-angle form loses most of its digits.

use crate::boundary::{point_segment_distance, BoundarySet};
use crate::error::{Error, Result};
use crate::solid_angle::accumulate;
use crate::vec3::{Point3, Vec3};

/// Proximity tolerance of [`segment_gradient`], relative to the segment length.
pub const SEGMENT_PROXIMITY_REL: f64 = 1e-9;

#[inline]
pub(crate) fn segment_gradient_unchecked(v: Vec3, w: Vec3) -> Vec3 {
    let (lv, lw) = (v.norm(), w.norm());
    let vw = lv * lw;
    let denom = vw * (vw + v.dot(w));
    v.cross(w) * (-(lv + lw) / denom)
}

/// Unit-current contribution of the segment `p_i → p_next` to `∇Ω` at `r`.
pub fn segment_gradient(p_i: Point3, p_next: Point3, r: Point3) -> Result<Vec3> {
    let len = p_i.distance(p_next);
    if point_segment_distance(r, p_i, p_next) <= SEGMENT_PROXIMITY_REL * len {
        return Err(Error::ApexOnBoundaryLine { loop_index: 0, vertex: 0 });
    }
    Ok(segment_gradient_unchecked(r - p_i, r - p_next))
}

/// `∇Ω` of the weighted potential (equally of the classic solid angle).
pub fn gradient(set: &BoundarySet, r: Point3) -> Result<Vec3> {
    accumulate(set, r, false, true).map(|(_, g)| g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::make_circle;

    #[test]
    fn bisector_plane_direction() {
        let (p, q) = (Vec3::new(-1.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0));
        let r = Vec3::new(0.0, 0.3, 0.4);
        let g = segment_gradient(p, q, r).unwrap();
        let dir = (r - p).cross(r - q).normalized().unwrap();
        assert!(g.dot(Vec3::X).abs() < 1e-15);
        assert!(g.dot(r).abs() < 1e-15);
        assert!((g.normalized().unwrap().dot(dir).abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn collinear_outside_is_zero() {
        let g = segment_gradient(Vec3::ZERO, Vec3::X, Vec3::X * 3.0).unwrap();
        assert_eq!(g, Vec3::ZERO);
    }

    #[test]
    fn on_segment_is_rejected() {
        assert!(segment_gradient(Vec3::ZERO, Vec3::X, Vec3::X * 0.5).is_err());
    }

    #[test]
    fn axial_field_on_axis() {
        let set = BoundarySet::single(make_circle(Vec3::ZERO, Vec3::Z, 1.0, 97, 1.0).unwrap()).unwrap();
        let g = gradient(&set, Vec3::new(0.0, 0.0, 0.6)).unwrap();
        assert!(g.x.abs() < 1e-12 * g.norm() && g.y.abs() < 1e-12 * g.norm());
        // classic Ω decreases going up
        assert!(g.z < 0.0);
    }

    #[test]
    fn current_scales_gradient() {
        let c = make_circle(Vec3::ZERO, Vec3::Z, 1.0, 40, 1.0).unwrap();
        let one = BoundarySet::single(c.clone()).unwrap();
        let two = BoundarySet::single(c.with_current(2.0)).unwrap();
        let r = Vec3::new(0.4, 0.1, -0.3);
        let (g1, g2) = (gradient(&one, r).unwrap(), gradient(&two, r).unwrap());
        assert!((g2 - g1 * 2.0).norm() < 1e-15 * g1.norm());
    }
}

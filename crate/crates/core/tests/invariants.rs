use std::f64::consts::PI;

use omegasurf_core::boundary::{make_circle, make_rectangle, resample_loop, BoundaryLoop, BoundarySet};
use omegasurf_core::projection::{newton_step, project_point, SolverConfig};
use omegasurf_core::solid_angle::{potential, solid_angle_classic, triangle_solid_angle};
use omegasurf_core::Vec3;
use proptest::prelude::*;

fn vec3(s: f64) -> impl Strategy<Value = Vec3> {
    (-s..s, -s..s, -s..s).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn unit() -> impl Strategy<Value = Vec3> {
    vec3(1.0).prop_filter_map("zero", |v| v.normalized())
}

/// Star-shaped, possibly non-planar loop of 3..12 vertices.
fn wobbly_loop() -> impl Strategy<Value = BoundaryLoop> {
    prop::collection::vec((0.3f64..1.5, -0.4f64..0.4), 3..12).prop_filter_map("degenerate", |rs| {
        let n = rs.len();
        let pts = rs
            .iter()
            .enumerate()
            .map(|(i, &(rad, z))| {
                let t = 2.0 * PI * i as f64 / n as f64;
                Vec3::new(rad * t.cos(), rad * t.sin(), z)
            })
            .collect();
        BoundaryLoop::new(pts, 1.0, "w").ok()
    })
}

fn rotate(p: Vec3, axis: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    p * c + axis.cross(p) * s + axis * (axis.dot(p) * (1.0 - c))
}

fn far_enough(set: &BoundarySet, r: Vec3, d: f64) -> bool {
    set.distance_to_boundary(r).0 > d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reversing_a_loop_negates_its_potential(lp in wobbly_loop(), r in vec3(2.0)) {
        let set = BoundarySet::single(lp.clone()).unwrap();
        prop_assume!(far_enough(&set, r, 1e-3));
        let rev = BoundarySet::single(lp.reversed()).unwrap();
        let a = potential(&set, r).unwrap();
        let b = potential(&rev, r).unwrap();
        prop_assert!((a + b).abs() <= 1e-12 * (1.0 + a.abs()), "{a} {b}");
    }

    #[test]
    fn fan_split_is_additive(p1 in vec3(1.0), p2 in vec3(1.0), p3 in vec3(1.0), t in 0.05f64..0.95, r in vec3(2.0)) {
        let m = p2.lerp(p3, t);
        let whole = triangle_solid_angle(p1, p2, p3, r);
        let a = triangle_solid_angle(p1, p2, m, r);
        let b = triangle_solid_angle(p1, m, p3, r);
        if let (Ok(w), Ok(a), Ok(b)) = (whole, a, b) {
            let d = w - a - b;
            // parts can straddle the ±2π branch cut
            let d = d - 4.0 * PI * (d / (4.0 * PI)).round();
            prop_assert!(d.abs() < 1e-10, "{d:e}");
        }
    }

    #[test]
    fn potential_is_rigid_motion_invariant(lp in wobbly_loop(), r in vec3(2.0), axis in unit(), angle in -PI..PI, shift in vec3(5.0)) {
        let set = BoundarySet::single(lp).unwrap();
        prop_assume!(far_enough(&set, r, 1e-2));
        let moved = set.map_loops(|_, l| l.map_vertices(|p| rotate(p, axis, angle) + shift)).unwrap();
        let a = potential(&set, r).unwrap();
        let b = potential(&moved, rotate(r, axis, angle) + shift).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0) * 10.0, "{a} {b}");
    }

    #[test]
    fn potential_is_scale_invariant(lp in wobbly_loop(), r in vec3(2.0), s in 1e-3f64..1e3, c in vec3(3.0)) {
        let set = BoundarySet::single(lp).unwrap();
        prop_assume!(far_enough(&set, r, 1e-2));
        let scaled = set.map_loops(|_, l| l.map_vertices(|p| c + (p - c) * s)).unwrap();
        let a = potential(&set, r).unwrap();
        let b = potential(&scaled, c + (r - c) * s).unwrap();
        prop_assert!((a - b).abs() <= 1e-11 * a.abs().max(1.0), "{a} {b}");
    }

    #[test]
    fn loops_superpose(l1 in wobbly_loop(), l2 in wobbly_loop(), i1 in -2.0f64..2.0, i2 in -2.0f64..2.0, lift in 0.5f64..1.5, r in vec3(2.0)) {
        let l1 = l1.with_current(i1);
        let l2 = l2.map_vertices(|p| p + Vec3::new(0.0, 0.0, lift)).with_current(i2);
        let both = BoundarySet::new(vec![l1.clone(), l2.clone()]).unwrap();
        prop_assume!(far_enough(&both, r, 1e-3));
        let a = potential(&BoundarySet::single(l1.clone()).unwrap(), r).unwrap();
        let b = potential(&BoundarySet::single(l2.clone()).unwrap(), r).unwrap();
        let ab = potential(&both, r).unwrap();
        prop_assert!((ab - a - b).abs() <= 1e-12 * (1.0 + ab.abs()));

        let flipped = BoundarySet::new(vec![l1.clone().with_current(-i1), l2]).unwrap();
        let f = potential(&flipped, r).unwrap();
        prop_assert!((f - (b - a)).abs() <= 1e-12 * (1.0 + f.abs()));
        let single = potential(&BoundarySet::single(l1.with_current(-i1)).unwrap(), r).unwrap();
        prop_assert_eq!(single, -a);
    }

    #[test]
    fn repeated_evaluation_is_bit_identical(lp in wobbly_loop(), r in vec3(2.0)) {
        let set = BoundarySet::single(lp).unwrap();
        prop_assume!(far_enough(&set, r, 1e-6));
        prop_assert_eq!(potential(&set, r).unwrap().to_bits(), potential(&set, r).unwrap().to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Seeds within 0.05 × diagonal of the cap reach 1e-10 in at most 8 steps.
    #[test]
    fn newton_is_fast_near_the_surface(x in -0.8f64..0.8, y in -0.8f64..0.8, dz in -1.0f64..1.0) {
        let set = BoundarySet::single(make_circle(Vec3::ZERO, Vec3::Z, 1.0, 256, 1.0).unwrap()).unwrap();
        let mut cfg = SolverConfig::for_set(&set, -PI);
        cfg.tol_omega = 1e-10;
        let exact = project_point(&set, Vec3::new(x, y, 0.5), &cfg);
        prop_assume!(exact.converged());
        let seed = exact.point + Vec3::new(0.0, 0.0, dz * 0.05 * set.diagonal());
        prop_assume!(far_enough(&set, seed, 0.05));
        let res = project_point(&set, seed, &cfg);
        prop_assert!(res.converged());
        prop_assert!(res.iterations <= 8, "{} iterations", res.iterations);
    }

    /// Once the residual is below 0.1, a full Newton step lowers it.
    #[test]
    fn full_steps_reduce_small_residuals(x in -0.9f64..0.9, y in -0.9f64..0.9, z in 0.05f64..1.5, delta in -0.1f64..0.1) {
        let set = BoundarySet::single(make_circle(Vec3::ZERO, Vec3::Z, 1.0, 128, 1.0).unwrap()).unwrap();
        let r = Vec3::new(x, y, z);
        let target = potential(&set, r).unwrap() + delta;
        let cfg = SolverConfig::for_set(&set, target);
        let before = delta.abs();
        prop_assume!(before > 1e-12);
        let step = newton_step(&set, r, &cfg).unwrap();
        prop_assume!(step.norm() <= cfg.max_step);
        let after = (potential(&set, r + step).unwrap() - target).abs();
        prop_assert!(after < before, "{before:e} -> {after:e}");
    }
}

#[test]
fn circling_a_wire_changes_potential_by_4pi() {
    let current = 1.5;
    let set = BoundarySet::new(vec![
        make_rectangle(Vec3::ZERO, Vec3::X, Vec3::Y, 2.0, 1.0, 4, current).unwrap(),
        make_circle(Vec3::new(0.0, 0.0, 1.0), Vec3::Z, 0.4, 32, 1.0).unwrap(),
    ])
    .unwrap();
    let (p, q) = (Vec3::new(-1.0, -0.5, 0.0), Vec3::new(-0.5, -0.5, 0.0));
    let mid = p.lerp(q, 0.5);
    let radius = 1e-3 * p.distance(q);
    let (e1, e2) = (Vec3::Y, Vec3::Z);
    let n = 2000;
    let mut total = 0.0;
    let mut prev = potential(&set, mid + e1 * radius).unwrap();
    for k in 1..=n {
        let t = 2.0 * PI * k as f64 / n as f64;
        let cur = potential(&set, mid + (e1 * t.cos() + e2 * t.sin()) * radius).unwrap();
        // kink angles wrap one at a time, each by 2π·I
        let mut d = cur - prev;
        let wrap = 2.0 * PI * current;
        d -= wrap * (d / wrap).round();
        total += d;
        prev = cur;
    }
    assert!((total.abs() - 4.0 * PI * current).abs() < 1e-8, "{total}");
}

#[test]
fn classic_omega_falls_monotonically_along_the_axis() {
    let lp = make_circle(Vec3::ZERO, Vec3::Z, 1.0, 512, 1.0).unwrap();
    let mut prev = f64::INFINITY;
    for k in -400..=400 {
        let z = (k as f64 / 40.0).sinh();
        let w = solid_angle_classic(&lp, Vec3::new(0.0, 0.0, z)).unwrap();
        assert!(w < prev, "z = {z}");
        prev = w;
    }
    let far = solid_angle_classic(&lp, Vec3::new(0.0, 0.0, -1e6)).unwrap();
    let near_top = solid_angle_classic(&lp, Vec3::new(0.0, 0.0, 1e6)).unwrap();
    assert!((far - 4.0 * PI).abs() < 1e-5 && near_top.abs() < 1e-5);
}

#[test]
fn resampling_keeps_the_potential() {
    let lp = make_circle(Vec3::ZERO, Vec3::Z, 1.0, 8, 1.0).unwrap();
    let set = BoundarySet::single(lp.clone()).unwrap();
    let r = Vec3::new(0.2, -0.1, 0.7);
    let base = potential(&set, r).unwrap();
    for h in [0.4, 0.1, 0.025] {
        let fine = BoundarySet::single(resample_loop(&lp, h).unwrap()).unwrap();
        assert!((potential(&fine, r).unwrap() - base).abs() < 1e-12, "h = {h}");
    }
}

#[test]
fn finer_circles_converge_to_the_smooth_value() {
    let r = Vec3::new(0.0, 0.0, 0.5);
    let exact = 2.0 * PI * (1.0 - 0.5 / 1.25f64.sqrt());
    let errs: Vec<f64> = [16, 64, 256]
        .iter()
        .map(|&n| (solid_angle_classic(&make_circle(Vec3::ZERO, Vec3::Z, 1.0, n, 1.0).unwrap(), r).unwrap() - exact).abs())
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

use omegasurf::core::boundary::{BoundaryLoop, BoundarySet};
use omegasurf::core::surface::SurfaceMesh;
use omegasurf::core::Vec3;
use omegasurf::formats::{num, read_obj, read_points_csv, write_csv, write_obj_mesh, write_obj_polylines};
use omegasurf::scene::{parse_scene, scene_json};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Vec3> {
    (-1e6f64..1e6, -1e-6f64..1e-6, any::<i32>()).prop_map(|(x, y, k)| Vec3::new(x, y, f64::from(k) * 1e-3))
}

proptest! {
    #[test]
    fn csv_points_round_trip_exactly(pts in prop::collection::vec(point(), 0..40)) {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["x", "y", "z"], pts.iter().map(|p| vec![num(p.x), num(p.y), num(p.z)])).unwrap();
        let back = read_points_csv(&buf[..]).unwrap();
        prop_assert_eq!(back, pts);
    }

    #[test]
    fn obj_polylines_round_trip(lines in prop::collection::vec(prop::collection::vec(point(), 2..10), 1..5)) {
        let mut buf = Vec::new();
        write_obj_polylines(&mut buf, &lines).unwrap();
        let obj = read_obj(&buf[..]).unwrap();
        prop_assert_eq!(obj.polylines(), lines);
    }

    #[test]
    fn scene_round_trips(loops in prop::collection::vec((prop::collection::vec(point(), 3..8), -3.0f64..3.0), 1..4)) {
        let loops: Vec<BoundaryLoop> = loops
            .into_iter()
            .enumerate()
            .map(|(i, (pts, c))| {
                // spread the points so no two consecutive ones coincide
                let pts = pts.into_iter().enumerate().map(|(k, p)| p + Vec3::new(0.0, 10.0 * k as f64, 0.0)).collect();
                BoundaryLoop::new(pts, c, format!("l{i}")).unwrap()
            })
            .collect();
        let Ok(set) = BoundarySet::new(loops) else { return Ok(()) };
        let back = parse_scene(scene_json(&set).as_bytes()).unwrap().set;
        prop_assert_eq!(back, set);
    }
}

#[test]
fn obj_mesh_round_trips() {
    let vertices = vec![Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::new(1.0, 1.0, 0.25)];
    let mesh = SurfaceMesh::from_parts(vertices, vec![[0, 1, 2], [1, 3, 2]]).unwrap();
    let mut buf = Vec::new();
    write_obj_mesh(&mut buf, &mesh).unwrap();
    let back = read_obj(&buf[..]).unwrap().into_mesh().unwrap();
    assert_eq!(back.vertices, mesh.vertices);
    assert_eq!(back.faces, mesh.faces);
}

mod common;

use anycam_core::lut::build_lookup_table;
use anycam_core::scene::render;
use anycam_core::{LutConfig, Rotation, Scene, Vec3};
use common::{kb, perspective};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sphere_depth_is_pose_invariant(yaw in -3.0f64..3.0, pitch in -1.5f64..1.5, roll in -3.0f64..3.0) {
        let m = perspective(32);
        let pose = Rotation::about_y(yaw).compose(&Rotation::about_x(pitch)).compose(&Rotation::about_z(roll));
        let (_, a) = render(&Scene::ConcentricSphere { radius: 2.0 }, &m, 32, 32, &Rotation::IDENTITY, None).unwrap();
        let (_, b) = render(&Scene::ConcentricSphere { radius: 2.0 }, &m, 32, 32, &pose, None).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.values.data.iter().all(|&v| v == 2.0));
    }
}

#[test]
fn box_depth_matches_ray_march_on_fisheye() {
    let m = kb(32);
    let lut = build_lookup_table(&m, 32, 32, &LutConfig { search_resolution: 256, ..Default::default() }).unwrap();
    let h = Vec3::new(1.5, 1.0, 2.0);
    let pose = Rotation::about_y(0.5);
    let (_, d) = render(&Scene::AxisBox { half_extents: h }, &m, 32, 32, &pose, Some(&lut)).unwrap();
    let mut checked = 0;
    for y in 0..32 {
        for x in 0..32 {
            let (Some(t), Some(r)) = (d.at(x, y), lut.ray(x, y)) else { continue };
            let dir = pose.apply(r);
            let inside = |s: f64| {
                let p = dir * s;
                p.x.abs() <= h.x && p.y.abs() <= h.y && p.z.abs() <= h.z
            };
            // March to the wall, then bisect.
            let (mut lo, mut hi) = (0.0, 0.0);
            let mut s = 0.0;
            while inside(s) {
                lo = s;
                s += 0.01;
                hi = s;
            }
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if inside(mid) {
                    lo = mid
                } else {
                    hi = mid
                }
            }
            assert!((t - lo).abs() < 1e-6, "{x} {y} {t} {lo}");
            checked += 1;
        }
    }
    assert!(checked > 600);
}

#[test]
fn checker_sphere_depth_and_two_colors() {
    let m = perspective(64);
    let (img, d) =
        render(&Scene::CheckerSphere { radius: 3.0, period: 0.2 }, &m, 64, 64, &Rotation::IDENTITY, None).unwrap();
    assert!(d.values.data.iter().all(|&v| v == 3.0));
    let bright = img.data.iter().filter(|c| c[0] > 0.5).count();
    assert!(bright > 0 && bright < 64 * 64);
}

mod common;

use anycam_core::depth::{
    euclidean_to_z, pixel_rays, rescale_for_canonical, rescale_for_resize, unproject_depth, virtual_focal,
    z_to_euclidean,
};
use anycam_core::erp::build_image_to_erp_grid;
use anycam_core::lut::build_lookup_table;
use anycam_core::sample::sample_depth;
use anycam_core::scene::render;
use anycam_core::{
    AugmentParams, CameraModel, DepthMap, ErpPatchSpec, Interp, LookupTable, LutConfig, Raster, Rotation, Scene, Vec3,
};
use common::{kb, mei, nn_fraction, perspective};
use proptest::prelude::*;

fn lut_for(model: &CameraModel, w: usize, h: usize) -> Option<LookupTable> {
    model
        .is_distorted()
        .then(|| build_lookup_table(model, w, h, &LutConfig { search_resolution: 1024, ..Default::default() }).unwrap())
}

#[test]
fn plane_through_z_buffer_unprojects_onto_plane() {
    let m = perspective(256);
    let scene = Scene::Plane { normal: Vec3::Z, offset: 2.0 };
    let (_, euclid) = render(&scene, &m, 256, 256, &Rotation::IDENTITY, None).unwrap();
    let rays = pixel_rays(&m, 256, 256, None, None).unwrap();
    let z = euclidean_to_z(&euclid, &rays).unwrap();
    assert!(z.values.data.iter().all(|&v| (v - 2.0).abs() < 1e-12));
    let back = z_to_euclidean(&z, &rays).unwrap();
    let cloud = unproject_depth(&back, &m, None, None, None).unwrap();
    assert_eq!(cloud.len(), 256 * 256);
    assert!(cloud.points.iter().all(|p| (p.z - 2.0).abs() < 1e-3));
}

#[test]
fn sphere_clouds_have_radius_norm_for_every_model() {
    let scene = Scene::ConcentricSphere { radius: 2.0 };
    for m in [perspective(128), kb(128), mei(128)] {
        let lut = lut_for(&m, 128, 128);
        let (_, d) = render(&scene, &m, 128, 128, &Rotation::about_x(0.4), lut.as_ref()).unwrap();
        let cloud = unproject_depth(&d, &m, lut.as_ref(), None, None).unwrap();
        assert!(!cloud.is_empty());
        assert!(cloud.points.iter().all(|p| (p.norm() - 2.0).abs() < 1e-6), "{}", m.name());
    }
    let spec = ErpPatchSpec::new(700, 50, 70, 0.3, -0.2).unwrap();
    let d = DepthMap::from_values(Raster::filled(70, 50, 2.0));
    let cloud = unproject_depth(&d, &CameraModel::Erp { height: 700 }, None, Some(&spec), None).unwrap();
    assert_eq!(cloud.len(), 3500);
    assert!(cloud.points.iter().all(|p| (p.norm() - 2.0).abs() < 1e-6));
}

#[test]
fn box_render_then_unproject_lies_on_walls() {
    let h = Vec3::new(1.0, 0.8, 1.2);
    let m = kb(96);
    let lut = lut_for(&m, 96, 96);
    let (_, d) =
        render(&Scene::AxisBox { half_extents: h }, &m, 96, 96, &Rotation::about_y(0.7), lut.as_ref()).unwrap();
    let cloud = unproject_depth(&d, &m, lut.as_ref(), None, None).unwrap();
    let pose = Rotation::about_y(0.7);
    for p in &cloud.points {
        let w = pose.apply(*p);
        let on = (w.x.abs() - h.x).abs().min((w.y.abs() - h.y).abs()).min((w.z.abs() - h.z).abs());
        assert!(on < 1e-6, "{w:?}");
    }
}

#[test]
fn canonical_rescale_dataset_focals() {
    let d = DepthMap::from_values(Raster::from_fn(7, 5, |x, y| 0.5 + x as f64 * 1.7 + y as f64 * 0.31));
    for f_hat in [519.0, 721.0] {
        for f in [300.0, 519.0, 587.5, 721.0] {
            let r = rescale_for_canonical(&d, f, f_hat).unwrap();
            let k = f_hat / f;
            assert!(r.values.data.iter().zip(&d.values.data).all(|(a, b)| *a == b * k));
            assert_eq!(r.valid, d.valid);
        }
    }
    let z = DepthMap::from_values(Raster::filled(1, 1, 10.0));
    assert!((rescale_for_canonical(&z, 500.0, 721.0).unwrap().values.data[0] - 14.42).abs() < 1e-12);
    assert!(rescale_for_canonical(&z, 0.0, 721.0).is_err());
}

#[test]
fn resize_and_virtual_focal_values() {
    assert_eq!(rescale_for_resize(500.0, 250.0).unwrap(), 2.0);
    assert!((rescale_for_resize(700.0, 490.0).unwrap() - 10.0 / 7.0).abs() < 1e-15);
    assert!((virtual_focal(1400) - 445.63).abs() < 0.01);
    assert!((virtual_focal(4) - 1.0).abs() < 1e-15);
    assert!((519.0 / virtual_focal(1400) - 1.1646).abs() < 1e-4);
    for h in 4..3000 {
        assert!(virtual_focal(h + 1) > virtual_focal(h));
    }
}

proptest! {
    #[test]
    fn canonical_rescale_inverts(v in 0.01f64..100.0, f in 50.0f64..2000.0, f_hat in 50.0f64..2000.0) {
        let d = DepthMap::from_values(Raster::filled(1, 1, v));
        let there = rescale_for_canonical(&d, f, f_hat).unwrap();
        let back = rescale_for_canonical(&there, f_hat, f).unwrap();
        prop_assert!(((back.values.data[0] - v) / v).abs() < 1e-12);
    }

    #[test]
    fn z_round_trip(z in 0.1f64..50.0, x in 0usize..64, y in 0usize..64) {
        let m = perspective(64);
        let rays = pixel_rays(&m, 64, 64, None, None).unwrap();
        let mut values = Raster::filled(64, 64, 1.0);
        *values.get_mut(x, y) = z;
        let zmap = DepthMap::from_values(values);
        let back = euclidean_to_z(&z_to_euclidean(&zmap, &rays).unwrap(), &rays).unwrap();
        prop_assert!((back.at(x, y).unwrap() - z).abs() < 1e-9);
    }
}

/// Ground-truth room seen by a wide fisheye: Z-map to Euclidean, then
/// unprojected directly through the LUT and via an ERP patch.
#[test]
fn room_point_clouds_agree_between_paths() {
    let size = 1024;
    let m = kb(size);
    let lut = build_lookup_table(&m, size, size, &LutConfig::default()).unwrap();
    let room = Scene::AxisBox { half_extents: Vec3::new(1.0, 0.8, 1.2) };
    let pose = Rotation::about_y(0.3).compose(&Rotation::about_x(0.1));
    let (_, euclid) = render(&room, &m, size, size, &pose, Some(&lut)).unwrap();
    let rays = pixel_rays(&m, size, size, Some(&lut), None).unwrap();
    let zmap = euclidean_to_z(&euclid, &rays).unwrap();
    let depth = z_to_euclidean(&zmap, &rays).unwrap();

    let direct = unproject_depth(&depth, &m, Some(&lut), None, None).unwrap();

    let spec = ErpPatchSpec::new(1400, 500, 700, 0.0, 0.0).unwrap();
    let grid = build_image_to_erp_grid(&spec, &m, &AugmentParams::IDENTITY, size, size).unwrap();
    let erp_depth = sample_depth(&grid, &depth, Interp::Bilinear).unwrap();
    let via = unproject_depth(&erp_depth, &CameraModel::Erp { height: 1400 }, None, Some(&spec), None).unwrap();
    assert!(via.len() > 300_000, "{}", via.len());
    let frac = nn_fraction(&direct.points, &via.points, 0.005);
    assert!(frac >= 0.99, "{frac}");
}

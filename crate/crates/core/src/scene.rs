//! Analytic scenes with exact ground-truth distance, viewed from a camera at
//! the origin under a rotation-only pose.

use alloc::vec::Vec;

use crate::camera::{CameraModel, PixelCoord};
use crate::error::{Error, Result};
use crate::geometry::SphericalCoord;
use crate::lut::LookupTable;
use crate::math::{floor, Rotation, Vec3};
use crate::raster::{DepthMap, Raster, RgbImage};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scene {
    /// Sphere of this radius centered on the camera.
    ConcentricSphere { radius: f64 },
    /// Axis-aligned box `[-h, h]` per axis, seen from inside.
    AxisBox { half_extents: Vec3 },
    /// Points `x` with `normal · x = offset`.
    Plane { normal: Vec3, offset: f64 },
    /// Concentric sphere with a latitude/longitude checkerboard.
    CheckerSphere { radius: f64, period: f64 },
}

impl Scene {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Scene::ConcentricSphere { radius } if radius > 0.0 => Ok(()),
            Scene::CheckerSphere { radius, period } if radius > 0.0 && period > 0.0 => Ok(()),
            Scene::AxisBox { half_extents: h } if h.x > 0.0 && h.y > 0.0 && h.z > 0.0 => Ok(()),
            Scene::Plane { normal, offset } if normal.norm() > 0.0 && offset.is_finite() => Ok(()),
            _ => Err(Error::Domain("scene dimensions must be positive")),
        }
    }

    /// Distance along the unit world-frame ray `d` to the first hit.
    pub fn intersect(&self, d: Vec3) -> Option<f64> {
        match *self {
            Scene::ConcentricSphere { radius } | Scene::CheckerSphere { radius, .. } => Some(radius),
            Scene::AxisBox { half_extents: h } => {
                let t = [(d.x, h.x), (d.y, h.y), (d.z, h.z)]
                    .iter()
                    .filter(|(c, _)| *c != 0.0)
                    .map(|&(c, e)| e / c.abs())
                    .fold(f64::INFINITY, f64::min);
                t.is_finite().then_some(t)
            }
            Scene::Plane { normal, offset } => {
                let n = normal.normalized()?;
                let den = n.dot(d);
                let off = offset / normal.norm();
                let t = off / den;
                (den != 0.0 && t > 0.0 && t.is_finite()).then_some(t)
            }
        }
    }

    /// Flat analytic color for a hit along `d` at distance `t`.
    pub fn shade(&self, d: Vec3, t: f64) -> [f32; 3] {
        let normal_color = |n: Vec3| [(0.5 + 0.5 * n.x) as f32, (0.5 + 0.5 * n.y) as f32, (0.5 + 0.5 * n.z) as f32];
        match *self {
            Scene::ConcentricSphere { .. } => normal_color(d),
            Scene::AxisBox { half_extents: h } => {
                let p = d * t;
                let rel = [p.x / h.x, p.y / h.y, p.z / h.z];
                let axis = (0..3).max_by(|&a, &b| rel[a].abs().total_cmp(&rel[b].abs())).unwrap_or(2);
                let mut n = [0.0; 3];
                n[axis] = -rel[axis].signum();
                normal_color(Vec3::new(n[0], n[1], n[2]))
            }
            Scene::Plane { normal, .. } => normal_color(normal.normalized().unwrap_or(Vec3::Z)),
            Scene::CheckerSphere { period, .. } => {
                let s = SphericalCoord::from_unit(d);
                let k = floor(s.lat / period) as i64 + floor(s.lon / period) as i64;
                if k.rem_euclid(2) == 0 {
                    [0.8; 3]
                } else {
                    [0.2; 3]
                }
            }
        }
    }
}

/// Renders `scene` into a `width x height` image of `model`. `pose` rotates
/// camera-frame rays into the world frame. Distorted models need `lut`.
pub fn render(
    scene: &Scene,
    model: &CameraModel,
    width: usize,
    height: usize,
    pose: &Rotation,
    lut: Option<&LookupTable>,
) -> Result<(RgbImage, DepthMap)> {
    scene.validate()?;
    if model.is_distorted() && lut.is_none() {
        return Err(Error::MissingLut);
    }
    let cells: Vec<([f32; 3], f64)> = crate::map_rows(height, |y| {
        (0..width)
            .map(|x| {
                let px = PixelCoord::new(x as f64 + 0.5, y as f64 + 0.5);
                let Ok(ray) = model.unproject(px, lut) else { return ([0.0; 3], 0.0) };
                let d = pose.apply(ray);
                match scene.intersect(d) {
                    Some(t) => (scene.shade(d, t), t),
                    None => ([0.0; 3], 0.0),
                }
            })
            .collect()
    });
    let (color, depth): (Vec<_>, Vec<_>) = cells.into_iter().unzip();
    Ok((Raster { width, height, data: color }, DepthMap::from_values(Raster { width, height, data: depth })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::camera::Intrinsics;
    use core::f64::consts::FRAC_PI_4;

    #[test]
    fn sphere_depth_is_radius() {
        let m = CameraModel::Perspective(Intrinsics::new(20.0, 20.0, 16.0, 16.0));
        let (_, d) =
            render(&Scene::ConcentricSphere { radius: 2.0 }, &m, 32, 32, &Rotation::about_x(0.4), None).unwrap();
        assert!(d.values.data.iter().all(|&v| v == 2.0));
    }

    #[test]
    fn plane_center_and_oblique() {
        let plane = Scene::Plane { normal: Vec3::Z, offset: 2.0 };
        assert_eq!(plane.intersect(Vec3::Z), Some(2.0));
        let d = Vec3::new(FRAC_PI_4.sin(), 0.0, FRAC_PI_4.cos());
        assert!((plane.intersect(d).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(plane.intersect(-Vec3::Z), None);
    }

    #[test]
    fn box_matches_ray_march() {
        let h = Vec3::new(1.5, 1.0, 2.0);
        let scene = Scene::AxisBox { half_extents: h };
        let m = CameraModel::Perspective(Intrinsics::new(12.0, 12.0, 16.0, 16.0));
        let pose = Rotation::about_y(0.3).compose(&Rotation::about_x(-0.2));
        let (_, depth) = render(&scene, &m, 32, 32, &pose, None).unwrap();
        let inside = |p: Vec3| p.x.abs() <= h.x && p.y.abs() <= h.y && p.z.abs() <= h.z;
        for y in 0..32 {
            for x in 0..32 {
                let ray = pose.apply(crate::depth::center_ray(&m, x, y, None).unwrap());
                // March to the exit, then bisect the boundary.
                let mut t = 0.0;
                while inside(ray * (t + 0.01)) {
                    t += 0.01;
                }
                let (mut lo, mut hi) = (t, t + 0.01);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if inside(ray * mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                assert!((depth.at(x, y).unwrap() - lo).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn distorted_render_needs_lut() {
        let m = CameraModel::kannala_brandt(Intrinsics::new(10.0, 10.0, 4.0, 4.0), Default::default());
        let r = render(&Scene::ConcentricSphere { radius: 1.0 }, &m, 8, 8, &Rotation::IDENTITY, None);
        assert_eq!(r, Err(Error::MissingLut));
    }

    #[test]
    fn invalid_scene() {
        assert!(Scene::ConcentricSphere { radius: 0.0 }.validate().is_err());
        assert!(Scene::AxisBox { half_extents: Vec3::new(1.0, -1.0, 1.0) }.validate().is_err());
    }
}

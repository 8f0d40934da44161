//! Metric depth scaling rules, Z-buffer to Euclidean conversion, and
//! up-projection to point clouds.
//!
//! Depth maps hold Euclidean distance from the camera center throughout.

use alloc::vec::Vec;

use crate::camera::{CameraModel, PixelCoord};
use crate::erp::{patch_rays, ErpPatchSpec};
use crate::error::{Error, Result};
use crate::lut::LookupTable;
use crate::math::{tan, Vec3};
use crate::raster::{DepthMap, Raster, RgbImage};

/// Rays with a z-component at or below this are treated as grazing.
pub const GRAZING_Z: f64 = 1e-6;

/// Canonical-camera depth: every valid value times `f_hat / f`.
pub fn rescale_for_canonical(depth: &DepthMap, f: f64, f_hat: f64) -> Result<DepthMap> {
    if !(f > 0.0 && f_hat > 0.0) || !f.is_finite() || !f_hat.is_finite() {
        return Err(Error::Domain("focal lengths must be positive"));
    }
    Ok(depth.scaled(f_hat / f))
}

/// Depth factor `u / u'` for resizing an image dimension from `u` to `u'`.
pub fn rescale_for_resize(u: f64, u_prime: f64) -> Result<f64> {
    if !(u > 0.0 && u_prime > 0.0) {
        return Err(Error::Domain("image sizes must be positive"));
    }
    Ok(u / u_prime)
}

/// Pinhole focal length equivalent to one ERP pixel: `1 / tan(π / H_erp)`.
/// Meaningful for `erp_height >= 2`.
pub fn virtual_focal(erp_height: u32) -> f64 {
    1.0 / tan(core::f64::consts::PI / erp_height as f64)
}

/// Converts a Z-buffer map to Euclidean distance, `D = Z / z`, using the
/// undistorted ray of each pixel. Grazing rays become invalid.
pub fn z_to_euclidean(zmap: &DepthMap, rays: &LookupTable) -> Result<DepthMap> {
    convert(zmap, rays, |z, rz| z / rz)
}

/// Inverse of [`z_to_euclidean`]: `Z = D z`.
pub fn euclidean_to_z(depth: &DepthMap, rays: &LookupTable) -> Result<DepthMap> {
    convert(depth, rays, |d, rz| d * rz)
}

fn convert(src: &DepthMap, rays: &LookupTable, f: impl Fn(f64, f64) -> f64) -> Result<DepthMap> {
    if src.dims() != (rays.width, rays.height) {
        return Err(Error::DimensionMismatch { expected: src.dims(), found: (rays.width, rays.height) });
    }
    let mut values = Raster::filled(src.width(), src.height(), 0.0);
    let mut valid = Raster::filled(src.width(), src.height(), false);
    for i in 0..values.data.len() {
        if !src.valid.data[i] || !rays.valid[i] {
            continue;
        }
        let rz = rays.rays[i].z;
        if rz <= GRAZING_Z {
            continue;
        }
        values.data[i] = f(src.values.data[i], rz);
        valid.data[i] = true;
    }
    DepthMap::with_mask(values, valid)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    /// Camera-frame points, meters.
    pub points: Vec<Vec3>,
    pub colors: Option<Vec<[u8; 3]>>,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Ray field for every pixel center of a `width x height` image under `model`.
///
/// ERP models use `spec` for the patch placement (default: the full sphere);
/// distorted models require `lut`.
pub fn pixel_rays(
    model: &CameraModel,
    width: usize,
    height: usize,
    lut: Option<&LookupTable>,
    spec: Option<&ErpPatchSpec>,
) -> Result<LookupTable> {
    let table = match model {
        CameraModel::Erp { height: h } => {
            let spec = spec.copied().unwrap_or_else(|| ErpPatchSpec::full(*h));
            patch_rays(&spec)
        }
        CameraModel::Perspective(_) => LookupTable::closed_form(model, width, height)?,
        _ => {
            let lut = lut.ok_or(Error::MissingLut)?;
            lut.clone()
        }
    };
    if (table.width, table.height) != (width, height) {
        return Err(Error::DimensionMismatch { expected: (width, height), found: (table.width, table.height) });
    }
    Ok(table)
}

/// Up-projects valid depth pixels: `point = ray * distance`.
pub fn unproject_depth(
    depth: &DepthMap,
    model: &CameraModel,
    lut: Option<&LookupTable>,
    spec: Option<&ErpPatchSpec>,
    colors: Option<&RgbImage>,
) -> Result<PointCloud> {
    let (w, h) = depth.dims();
    let rays = pixel_rays(model, w, h, lut, spec)?;
    if let Some(img) = colors {
        if img.dims() != (w, h) {
            return Err(Error::DimensionMismatch { expected: (w, h), found: img.dims() });
        }
    }
    let mut points = Vec::new();
    let mut rgb = colors.map(|_| Vec::new());
    for y in 0..h {
        for x in 0..w {
            let (Some(d), Some(r)) = (depth.at(x, y), rays.ray(x, y)) else { continue };
            points.push(r * d);
            if let (Some(out), Some(img)) = (rgb.as_mut(), colors) {
                let c = img.get(x, y);
                out.push(c.map(|v| (v.clamp(0.0, 1.0) * 255.0 + 0.5) as u8));
            }
        }
    }
    Ok(PointCloud { points, colors: rgb })
}

/// Closed-form or LUT ray for a single pixel center.
pub fn center_ray(model: &CameraModel, x: usize, y: usize, lut: Option<&LookupTable>) -> Result<Vec3> {
    model.unproject(PixelCoord::new(x as f64 + 0.5, y as f64 + 0.5), lut)
}

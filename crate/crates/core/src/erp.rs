//! Image↔ERP warping: patch placement, tangent-plane augmentation, FoV
//! alignment and multi-resolution resampling.
//!
//! An ERP patch is a `patch_w x patch_h` window of a full equirectangular
//! image of height `erp_height` (width `2 * erp_height`). The camera's
//! optical axis points at the patch center; its frame is the tangent frame
//! there, so a patch pixel's [`SphereVec`] is directly a camera-frame ray.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::camera::{CameraModel, PixelCoord};
use crate::error::{Error, Result};
use crate::geometry::{gnomonic_inverse, sphere_vec, sphere_vec_to_spherical, SphereVec, SphericalCoord};
use crate::lut::LookupTable;
use crate::math::{cos, round, sin, wrap_pi, Vec3};
use crate::raster::{DepthMap, RgbImage};
use crate::sample::{sample_depth, sample_image, Interp};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErpPatchSpec {
    /// Full ERP height `H_E`; the full width is `2 * H_E`.
    pub erp_height: u32,
    pub patch_h: u32,
    pub patch_w: u32,
    /// Radians; positive is below the horizon.
    pub center_lat: f64,
    pub center_lon: f64,
}

impl ErpPatchSpec {
    pub fn new(erp_height: u32, patch_h: u32, patch_w: u32, center_lat: f64, center_lon: f64) -> Result<Self> {
        let s = Self { erp_height, patch_h, patch_w, center_lat, center_lon };
        s.validate()?;
        Ok(s)
    }

    /// Patch placed for a camera at `pitch` (positive looks up): the center
    /// latitude is `-pitch`.
    pub fn for_pitch(erp_height: u32, patch_h: u32, patch_w: u32, pitch: f64, yaw: f64) -> Result<Self> {
        Self::new(erp_height, patch_h, patch_w, -pitch, yaw)
    }

    /// The whole sphere, centered on `lat = 0, lon = 0`.
    pub fn full(erp_height: u32) -> Self {
        Self { erp_height, patch_h: erp_height, patch_w: 2 * erp_height, center_lat: 0.0, center_lon: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.erp_height == 0 || self.patch_h == 0 || self.patch_w == 0 {
            return Err(Error::Domain("ERP and patch sizes must be positive"));
        }
        if self.patch_h > self.erp_height || self.patch_w > self.erp_width() {
            return Err(Error::Domain("patch larger than the full ERP image"));
        }
        if self.center_lat.is_nan() || self.center_lat.abs() > FRAC_PI_2 || !self.center_lon.is_finite() {
            return Err(Error::Domain("patch center latitude must lie in [-π/2, π/2]"));
        }
        Ok(())
    }

    #[inline]
    pub fn erp_width(&self) -> u32 {
        2 * self.erp_height
    }

    #[inline]
    pub fn center(&self) -> SphericalCoord {
        SphericalCoord::new(self.center_lat, self.center_lon)
    }

    /// Radians per pixel, identical along both axes.
    #[inline]
    pub fn angular_step(&self) -> f64 {
        PI / self.erp_height as f64
    }

    /// Whether the patch spans all longitudes (and so wraps around).
    pub fn is_full_width(&self) -> bool {
        self.patch_w == self.erp_width()
    }

    /// Vertical field of view of the patch: `H_e π / H_E`.
    pub fn vertical_fov(&self) -> f64 {
        self.patch_h as f64 * PI / self.erp_height as f64
    }

    fn with_center_lat(mut self, lat: f64) -> Self {
        self.center_lat = lat;
        self
    }
}

/// Maps a continuous patch pixel coordinate (centers at `i + 0.5`) to a
/// spherical coordinate. The result is not folded: rows past a pole yield
/// `|lat| > π/2`, which still denotes the right direction.
#[inline]
pub fn erp_pixel_to_spherical(spec: &ErpPatchSpec, u_e: f64, v_e: f64) -> SphericalCoord {
    let step = spec.angular_step();
    SphericalCoord::new(
        step * (v_e - spec.patch_h as f64 / 2.0) + spec.center_lat,
        step * (u_e - spec.patch_w as f64 / 2.0) + spec.center_lon,
    )
}

/// Inverse of [`erp_pixel_to_spherical`], with the longitude offset wrapped
/// into `[-π, π)`.
#[inline]
pub fn spherical_to_erp_pixel(spec: &ErpPatchSpec, s: SphericalCoord) -> PixelCoord {
    let step = spec.angular_step();
    PixelCoord::new(
        wrap_pi(s.lon - spec.center_lon) / step + spec.patch_w as f64 / 2.0,
        (s.lat - spec.center_lat) / step + spec.patch_h as f64 / 2.0,
    )
}

/// Tangent-plane augmentation `(x', y') = s (R (x, y) + T)` plus a latitude
/// offset applied to the patch center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentParams {
    pub scale: f64,
    /// In-plane rotation, radians.
    pub rotation: f64,
    /// Tangent-plane units.
    pub translation: (f64, f64),
    /// Radians added to the patch center latitude.
    pub pitch_jitter: f64,
}

impl Default for AugmentParams {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl AugmentParams {
    pub const IDENTITY: AugmentParams =
        AugmentParams { scale: 1.0, rotation: 0.0, translation: (0.0, 0.0), pitch_jitter: 0.0 };

    pub fn with_scale(scale: f64) -> Self {
        Self { scale, ..Self::IDENTITY }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::Domain("augmentation scale must be positive"));
        }
        if !(self.rotation.is_finite()
            && self.translation.0.is_finite()
            && self.translation.1.is_finite()
            && self.pitch_jitter.is_finite())
        {
            return Err(Error::Domain("augmentation parameters must be finite"));
        }
        Ok(())
    }

    fn is_planar_identity(&self) -> bool {
        self.scale == 1.0 && self.rotation == 0.0 && self.translation == (0.0, 0.0)
    }

    /// Applies the affine map to `(x_t, y_t)`.
    pub fn apply_tangent(&self, x: f64, y: f64) -> (f64, f64) {
        let (s, c) = (sin(self.rotation), cos(self.rotation));
        let (tx, ty) = self.translation;
        (self.scale * (c * x - s * y + tx), self.scale * (s * x + c * y + ty))
    }

    /// Applies the affine map to the homogeneous point `(x̄, ȳ, cos c)`, i.e.
    /// to `(x_t, y_t, 1)` scaled by `cos c`. This agrees with
    /// [`apply_tangent`](Self::apply_tangent) in front of the tangent plane
    /// and stays defined at and behind it. The result is renormalized.
    pub fn apply(&self, v: SphereVec) -> SphereVec {
        if self.is_planar_identity() {
            return v;
        }
        let (s, c) = (sin(self.rotation), cos(self.rotation));
        let (tx, ty) = self.translation;
        let z = v.cos_c;
        let x = self.scale * (c * v.x_bar - s * v.y_bar + tx * z);
        let y = self.scale * (s * v.x_bar + c * v.y_bar + ty * z);
        renormalize(Vec3::new(x, y, z))
    }

    /// Inverse of [`apply`](Self::apply).
    pub fn invert(&self, v: SphereVec) -> SphereVec {
        if self.is_planar_identity() {
            return v;
        }
        let (s, c) = (sin(self.rotation), cos(self.rotation));
        let (tx, ty) = self.translation;
        let z = v.cos_c;
        let (x, y) = (v.x_bar / self.scale - tx * z, v.y_bar / self.scale - ty * z);
        renormalize(Vec3::new(c * x + s * y, -s * x + c * y, z))
    }
}

fn renormalize(v: Vec3) -> SphereVec {
    SphereVec::from_vec3(v.normalized().unwrap_or(Vec3::Z))
}

/// Source coordinates (continuous pixels) for each target pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpGrid {
    pub target_w: usize,
    pub target_h: usize,
    pub src_w: usize,
    pub src_h: usize,
    pub src_x: Vec<f64>,
    pub src_y: Vec<f64>,
    pub valid: Vec<bool>,
    /// Source is periodic in x (a full 360° ERP).
    pub wrap_x: bool,
}

impl WarpGrid {
    /// Builds a grid from a per-target-pixel function returning the source
    /// coordinate, or `None` for invalid cells. Coordinates outside the
    /// source (beyond the half-pixel border) are marked invalid, except in x
    /// when `wrap_x` is set, where they are wrapped.
    pub fn from_fn<F>(target_w: usize, target_h: usize, src_w: usize, src_h: usize, wrap_x: bool, f: F) -> Self
    where
        F: Fn(usize, usize) -> Option<(f64, f64)> + Sync + Send,
    {
        let (sw, sh) = (src_w as f64, src_h as f64);
        let cells = crate::map_rows(target_h, |y| {
            (0..target_w)
                .map(|x| {
                    let Some((mut sx, sy)) = f(x, y) else { return (0.0, 0.0, false) };
                    if wrap_x && sx.is_finite() {
                        sx = crate::math::rem_euclid(sx, sw);
                    }
                    let inside = sx >= 0.0 && sx <= sw && sy >= 0.0 && sy <= sh;
                    if inside {
                        (sx, sy, true)
                    } else {
                        (0.0, 0.0, false)
                    }
                })
                .collect::<Vec<_>>()
        });
        let mut src_x = Vec::with_capacity(cells.len());
        let mut src_y = Vec::with_capacity(cells.len());
        let mut valid = Vec::with_capacity(cells.len());
        for (x, y, v) in cells {
            src_x.push(x);
            src_y.push(y);
            valid.push(v);
        }
        Self { target_w, target_h, src_w, src_h, src_x, src_y, valid, wrap_x }
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> Option<(f64, f64)> {
        let i = y * self.target_w + x;
        self.valid[i].then(|| (self.src_x[i], self.src_y[i]))
    }
}

/// Patch spec after applying the augmentation's latitude jitter.
pub fn jittered_spec(spec: &ErpPatchSpec, aug: &AugmentParams) -> ErpPatchSpec {
    if aug.pitch_jitter == 0.0 {
        *spec
    } else {
        spec.with_center_lat(spec.center_lat + aug.pitch_jitter)
    }
}

/// Camera-frame ray of a patch pixel center, before augmentation.
#[inline]
pub fn patch_ray(spec: &ErpPatchSpec, x: usize, y: usize) -> SphereVec {
    let s = erp_pixel_to_spherical(spec, x as f64 + 0.5, y as f64 + 0.5);
    sphere_vec(s, spec.center())
}

/// Grid sampling a `src_w x src_h` camera image into the ERP patch.
///
/// Per patch pixel: spherical coordinate, gnomonic sphere vector about the
/// (jittered) patch center, tangent-plane augmentation, then the model's
/// distortion and projection.
pub fn build_image_to_erp_grid(
    spec: &ErpPatchSpec,
    model: &CameraModel,
    aug: &AugmentParams,
    src_w: usize,
    src_h: usize,
) -> Result<WarpGrid> {
    spec.validate()?;
    aug.validate()?;
    model.validate()?;
    let wrap_x = match model {
        CameraModel::Erp { height } => {
            let h = *height as usize;
            if (src_w, src_h) != (2 * h, h) {
                return Err(Error::DimensionMismatch { expected: (2 * h, h), found: (src_w, src_h) });
            }
            true
        }
        _ => false,
    };
    let eff = jittered_spec(spec, aug);
    Ok(WarpGrid::from_fn(spec.patch_w as usize, spec.patch_h as usize, src_w, src_h, wrap_x, |x, y| {
        let v = aug.apply(patch_ray(&eff, x, y));
        model.project(v.to_vec3()).map(|p| (p.u, p.v))
    }))
}

/// Grid sampling an ERP patch back into a `target_w x target_h` camera image.
///
/// Per target pixel: unprojected ray, inverse augmentation, inverse gnomonic
/// about the patch center, patch pixel. Distorted models need `lut`.
pub fn build_erp_to_image_grid(
    spec: &ErpPatchSpec,
    model: &CameraModel,
    lut: Option<&LookupTable>,
    aug: &AugmentParams,
    target_w: usize,
    target_h: usize,
) -> Result<WarpGrid> {
    spec.validate()?;
    aug.validate()?;
    model.validate()?;
    if model.is_distorted() {
        let lut = lut.ok_or(Error::MissingLut)?;
        if (lut.width, lut.height) != (target_w, target_h) {
            return Err(Error::DimensionMismatch { expected: (target_w, target_h), found: (lut.width, lut.height) });
        }
    }
    let eff = jittered_spec(spec, aug);
    let center = eff.center();
    let (pw, ph) = (spec.patch_w as f64, spec.patch_h as f64);
    let inside = |p: PixelCoord| p.u >= 0.0 && p.u <= pw && p.v >= 0.0 && p.v <= ph;
    let wrap_x = spec.is_full_width();
    Ok(WarpGrid::from_fn(target_w, target_h, spec.patch_w as usize, spec.patch_h as usize, wrap_x, |x, y| {
        let px = PixelCoord::new(x as f64 + 0.5, y as f64 + 0.5);
        let ray = model.unproject(px, lut).ok()?;
        let v = aug.invert(SphereVec::from_vec3(ray));
        let s = match v.tangent() {
            Some(t) => gnomonic_inverse(t, center),
            None => sphere_vec_to_spherical(v, center),
        };
        let p = spherical_to_erp_pixel(&eff, s);
        if wrap_x || inside(p) {
            return Some((p.u, p.v));
        }
        // Patches can extend past a pole; try the aliased coordinate there.
        for pole in [-PI, PI] {
            let alias = SphericalCoord::new(pole - s.lat, s.lon + PI);
            let q = spherical_to_erp_pixel(&eff, alias);
            if inside(q) {
                return Some((q.u, q.v));
            }
        }
        None
    }))
}

/// Scale that stretches a camera's vertical FoV over the patch height:
/// `s = Fov_c / Fov_e` with `Fov_e = H_e π / H_E`.
pub fn fov_align_scale(camera_vfov: f64, spec: &ErpPatchSpec) -> f64 {
    camera_vfov / spec.vertical_fov()
}

/// Camera-frame rays of every patch pixel center (no augmentation).
pub fn patch_rays(spec: &ErpPatchSpec) -> LookupTable {
    let (w, h) = (spec.patch_w as usize, spec.patch_h as usize);
    let rays: Vec<Vec3> = crate::map_rows(h, |y| (0..w).map(|x| patch_ray(spec, x, y).to_vec3()).collect());
    LookupTable { width: w, height: h, rays, valid: alloc::vec![true; w * h] }
}

/// Output dimension after resizing: `round(ratio * dim)`, at least 1.
pub fn resized_dim(dim: usize, ratio: f64) -> usize {
    (round(ratio * dim as f64) as usize).max(1)
}

/// Grid resampling a `src_w x src_h` raster to `dst_w x dst_h` (pixel-center
/// aligned).
pub fn resize_grid(src_w: usize, src_h: usize, dst_w: usize, dst_h: usize) -> WarpGrid {
    let (sx, sy) = (src_w as f64 / dst_w as f64, src_h as f64 / dst_h as f64);
    WarpGrid::from_fn(dst_w, dst_h, src_w, src_h, false, |x, y| Some(((x as f64 + 0.5) * sx, (y as f64 + 0.5) * sy)))
}

/// One resolution of a multi-resolution set.
#[derive(Debug, Clone, PartialEq)]
pub struct ResampledPatch {
    pub ratio: f64,
    pub image: RgbImage,
    pub depth: DepthMap,
    /// Metric factor `u / u'` induced by the resize (height based).
    pub depth_scale: f64,
}

/// Resizes a patch to each ratio in `(0, 1]`. The image is resampled
/// bilinearly, depth and its mask by nearest neighbour. When `apply_scale`
/// is set, depth values are multiplied by `depth_scale`.
pub fn multi_resolution_set(
    image: &RgbImage,
    depth: &DepthMap,
    ratios: &[f64],
    apply_scale: bool,
) -> Result<Vec<ResampledPatch>> {
    if ratios.is_empty() {
        return Err(Error::EmptyRatios);
    }
    if image.dims() != depth.dims() {
        return Err(Error::DimensionMismatch { expected: image.dims(), found: depth.dims() });
    }
    let (w, h) = image.dims();
    ratios
        .iter()
        .map(|&ratio| {
            if !(ratio > 0.0 && ratio <= 1.0) {
                return Err(Error::Domain("resize ratios must lie in (0, 1]"));
            }
            let (dw, dh) = (resized_dim(w, ratio), resized_dim(h, ratio));
            let depth_scale = crate::depth::rescale_for_resize(h as f64, dh as f64)?;
            let (image, depth) = if (dw, dh) == (w, h) {
                (image.clone(), depth.clone())
            } else {
                let grid = resize_grid(w, h, dw, dh);
                (sample_image(&grid, image, Interp::Bilinear)?.0, sample_depth(&grid, depth, Interp::Nearest)?)
            };
            let depth = if apply_scale && depth_scale != 1.0 { depth.scaled(depth_scale) } else { depth };
            Ok(ResampledPatch { ratio, image, depth, depth_scale })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::camera::Intrinsics;
    use crate::raster::Raster;

    #[test]
    fn patch_center_maps_to_center() {
        let spec = ErpPatchSpec::new(1400, 500, 700, 0.2, -0.4).unwrap();
        let s = erp_pixel_to_spherical(&spec, 350.0, 250.0);
        assert_eq!(s, SphericalCoord::new(0.2, -0.4));
    }

    #[test]
    fn top_row_latitude() {
        let spec = ErpPatchSpec::new(1400, 500, 700, 0.0, 0.0).unwrap();
        let s = erp_pixel_to_spherical(&spec, 350.0, 0.5);
        assert!((s.lat - (-249.5 * PI / 1400.0)).abs() < 1e-15);
    }

    #[test]
    fn full_erp_corners() {
        let spec = ErpPatchSpec::full(64);
        let a = erp_pixel_to_spherical(&spec, 0.0, 0.0);
        let b = erp_pixel_to_spherical(&spec, 128.0, 64.0);
        assert!((a.lat + FRAC_PI_2).abs() < 1e-15 && (a.lon + PI).abs() < 1e-15);
        assert!((b.lat - FRAC_PI_2).abs() < 1e-15 && (b.lon - PI).abs() < 1e-15);
    }

    #[test]
    fn pixel_mapping_round_trip() {
        let spec = ErpPatchSpec::new(200, 80, 120, -0.3, 3.0).unwrap();
        for (u, v) in [(0.5, 0.5), (119.5, 40.2), (60.0, 79.5)] {
            let p = spherical_to_erp_pixel(&spec, erp_pixel_to_spherical(&spec, u, v));
            assert!((p.u - u).abs() < 1e-9 && (p.v - v).abs() < 1e-9);
        }
    }

    #[test]
    fn pitch_convention() {
        let spec = ErpPatchSpec::for_pitch(100, 20, 30, 0.5, 0.0).unwrap();
        assert_eq!(spec.center_lat, -0.5);
    }

    #[test]
    fn patch_spec_validation() {
        assert!(ErpPatchSpec::new(100, 101, 10, 0.0, 0.0).is_err());
        assert!(ErpPatchSpec::new(100, 10, 201, 0.0, 0.0).is_err());
        assert!(ErpPatchSpec::new(100, 10, 10, 1.6, 0.0).is_err());
        assert!(ErpPatchSpec::new(100, 0, 10, 0.0, 0.0).is_err());
    }

    #[test]
    fn fov_align_constants() {
        let spec = ErpPatchSpec::new(1400, 500, 700, 0.0, 0.0).unwrap();
        assert_eq!(spec.vertical_fov(), 500.0 * PI / 1400.0);
        assert!((spec.vertical_fov().to_degrees() - 64.285_714_285_714_29).abs() < 1e-9);
        assert!((fov_align_scale(spec.vertical_fov(), &spec) - 1.0).abs() < 1e-15);
        assert!((fov_align_scale(FRAC_PI_2, &spec) - 1.4).abs() < 1e-12);
    }

    #[test]
    fn augmentation_inverse() {
        let aug = AugmentParams { scale: 1.3, rotation: 0.2, translation: (0.05, -0.1), pitch_jitter: 0.0 };
        let v = SphereVec::from_vec3(Vec3::new(0.3, -0.2, 0.9).normalized().unwrap());
        let back = aug.invert(aug.apply(v));
        assert!((back.to_vec3() - v.to_vec3()).norm() < 1e-14);
        // Homogeneous form agrees with the tangent-plane form.
        let t = v.tangent().unwrap();
        let (x, y) = aug.apply_tangent(t.x_t, t.y_t);
        let w = aug.apply(v).tangent().unwrap();
        assert!((w.x_t - x).abs() < 1e-14 && (w.y_t - y).abs() < 1e-14);
    }

    #[test]
    fn perspective_patch_center_hits_principal_point() {
        let spec = ErpPatchSpec::new(400, 101, 151, 0.0, 0.0).unwrap();
        let fy = 50.5 / (spec.vertical_fov() / 2.0).tan();
        let model = CameraModel::Perspective(Intrinsics::new(fy, fy, 80.0, 50.5));
        let grid = build_image_to_erp_grid(&spec, &model, &AugmentParams::IDENTITY, 160, 101).unwrap();
        let (sx, sy) = grid.at(75, 50).unwrap();
        assert!((sx - 80.0).abs() < 0.5 && (sy - 50.5).abs() < 0.5);
        for y in 0..101 {
            assert!(grid.at(75, y).is_some(), "row {y}");
        }
    }

    #[test]
    fn multires_dimensions_and_scale() {
        let img = RgbImage::filled(700, 500, [0.5; 3]);
        let depth = DepthMap::from_values(Raster::filled(700, 500, 2.0));
        let set = multi_resolution_set(&img, &depth, &[1.0, 0.5, 0.7, 0.4], true).unwrap();
        assert_eq!(set[0].image.dims(), (700, 500));
        assert_eq!(set[0].depth_scale, 1.0);
        assert_eq!(set[1].image.dims(), (350, 250));
        assert_eq!(set[1].depth_scale, 2.0);
        assert!((set[1].depth.at(10, 10).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(set[2].image.dims(), (490, 350));
        assert!((set[2].depth_scale - 10.0 / 7.0).abs() < 1e-12);
        assert_eq!(set[3].image.dims(), (280, 200));
        let raw = multi_resolution_set(&img, &depth, &[0.5], false).unwrap();
        assert_eq!(raw[0].depth.at(3, 3), Some(2.0));
        assert_eq!(multi_resolution_set(&img, &depth, &[], true), Err(Error::EmptyRatios));
        assert!(multi_resolution_set(&img, &depth, &[1.5], true).is_err());
    }

    #[test]
    fn resized_dim_minimum() {
        assert_eq!(resized_dim(3, 0.1), 1);
        assert_eq!(resized_dim(700, 0.7), 490);
    }
}

//! Per-pixel ray lookup tables approximating a camera's inverse projection.
//!
//! Construction is a two-pass search. A coarse azimuthal-equidistant grid of
//! directions `(p, q)` (incidence angle `θ = |(p, q)|`) is projected once and
//! binned into pixels, keeping the sample closest to each pixel center. Each
//! pixel's seed (its own best sample, or a neighbour's) is then refined with
//! damped Gauss-Newton on the reprojection residual.

use alloc::vec;
use alloc::vec::Vec;

use crate::camera::{CameraModel, PixelCoord};
use crate::error::{Error, Result};
use crate::math::{cos, floor, hypot, sin, Vec3};

/// Reprojection error (px) above which a refined pixel is marked invalid.
pub const LUT_MAX_ERROR_PX: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LutConfig {
    /// Coarse grid samples per axis over `[-θ_max, θ_max]²`.
    pub search_resolution: usize,
    /// Gauss-Newton iterations per pixel.
    pub refine_iters: usize,
    /// Chebyshev radius (px) searched for a seed when a pixel received no
    /// coarse sample.
    pub seed_radius: usize,
}

impl Default for LutConfig {
    fn default() -> Self {
        Self { search_resolution: 2048, refine_iters: 30, seed_radius: 2 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LookupTable {
    pub width: usize,
    pub height: usize,
    /// Row-major unit rays; zero for invalid pixels.
    pub rays: Vec<Vec3>,
    pub valid: Vec<bool>,
}

impl LookupTable {
    pub fn new(width: usize, height: usize, rays: Vec<Vec3>, valid: Vec<bool>) -> Result<Self> {
        if rays.len() != width * height || valid.len() != width * height {
            return Err(Error::DimensionMismatch { expected: (width, height), found: (rays.len(), valid.len()) });
        }
        Ok(Self { width, height, rays, valid })
    }

    /// Rays of pixel centers from a closed-form unprojection (perspective or
    /// ERP); used where a ray field is needed for models without a LUT.
    pub fn closed_form(model: &CameraModel, width: usize, height: usize) -> Result<Self> {
        if model.is_distorted() {
            return Err(Error::MissingLut);
        }
        let mut rays = Vec::with_capacity(width * height);
        let mut valid = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let px = PixelCoord::new(x as f64 + 0.5, y as f64 + 0.5);
                match model.unproject(px, None) {
                    Ok(r) => {
                        rays.push(r);
                        valid.push(true);
                    }
                    Err(_) => {
                        rays.push(Vec3::default());
                        valid.push(false);
                    }
                }
            }
        }
        Ok(Self { width, height, rays, valid })
    }

    #[inline]
    pub fn ray(&self, x: usize, y: usize) -> Option<Vec3> {
        let i = y * self.width + x;
        self.valid[i].then(|| self.rays[i])
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    /// Bilinear interpolation between the rays of neighbouring pixel centers,
    /// renormalized. Any neighbour with non-zero weight must be valid.
    pub fn ray_at(&self, pixel: PixelCoord) -> Result<Vec3> {
        let invalid = Error::InvalidPixel { u: pixel.u, v: pixel.v };
        if !(pixel.u >= 0.0 && pixel.v >= 0.0 && pixel.u <= self.width as f64 && pixel.v <= self.height as f64) {
            return Err(invalid);
        }
        let (w, h) = (self.width, self.height);
        let fx = (pixel.u - 0.5).clamp(0.0, (w - 1) as f64);
        let fy = (pixel.v - 0.5).clamp(0.0, (h - 1) as f64);
        let (x0, y0) = (floor(fx) as usize, floor(fy) as usize);
        let (x1, y1) = ((x0 + 1).min(w - 1), (y0 + 1).min(h - 1));
        let (ax, ay) = (fx - x0 as f64, fy - y0 as f64);
        let taps = [
            (x0, y0, (1.0 - ax) * (1.0 - ay)),
            (x1, y0, ax * (1.0 - ay)),
            (x0, y1, (1.0 - ax) * ay),
            (x1, y1, ax * ay),
        ];
        let mut acc = Vec3::default();
        for (x, y, wgt) in taps {
            if wgt == 0.0 {
                continue;
            }
            acc = acc + self.ray(x, y).ok_or(invalid.clone())? * wgt;
        }
        acc.normalized().ok_or(invalid)
    }
}

/// Direction for azimuthal-equidistant coordinates `(p, q)`.
#[inline]
fn direction(p: f64, q: f64) -> Vec3 {
    let theta = hypot(p, q);
    let sinc = if theta < 1e-8 { 1.0 - theta * theta / 6.0 } else { sin(theta) / theta };
    Vec3::new(sinc * p, sinc * q, cos(theta))
}

#[inline]
fn clamp_disk(p: f64, q: f64, theta_max: f64) -> (f64, f64) {
    let t = hypot(p, q);
    if t > theta_max {
        let s = theta_max / t;
        (p * s, q * s)
    } else {
        (p, q)
    }
}

/// Damped Gauss-Newton on the reprojection residual; returns the refined
/// `(p, q)` and its pixel error.
fn refine(
    model: &CameraModel,
    target: PixelCoord,
    seed: (f64, f64),
    theta_max: f64,
    iters: usize,
) -> Option<((f64, f64), f64)> {
    let residual = |p: f64, q: f64| -> Option<(f64, f64)> {
        model.project(direction(p, q)).map(|px| (px.u - target.u, px.v - target.v))
    };
    let (mut p, mut q) = seed;
    let mut r = residual(p, q)?;
    let mut err = hypot(r.0, r.1);
    const H: f64 = 1e-7;
    for _ in 0..iters {
        if err < 1e-10 {
            break;
        }
        // Central differences stepping inward near the domain edge.
        let diff = |dp: f64, dq: f64| -> Option<(f64, f64)> {
            let plus = clamp_disk(p + dp, q + dq, theta_max);
            let minus = clamp_disk(p - dp, q - dq, theta_max);
            let (a, b) = (residual(plus.0, plus.1)?, residual(minus.0, minus.1)?);
            let span = hypot(plus.0 - minus.0, plus.1 - minus.1);
            if span == 0.0 {
                return None;
            }
            Some(((a.0 - b.0) / span, (a.1 - b.1) / span))
        };
        let (Some(jp), Some(jq)) = (diff(H, 0.0), diff(0.0, H)) else {
            break;
        };
        // Solve [jp jq] d = -r.
        let det = jp.0 * jq.1 - jq.0 * jp.1;
        if det.abs() < 1e-18 {
            break;
        }
        let dp = (-r.0 * jq.1 + r.1 * jq.0) / det;
        let dq = (-jp.0 * r.1 + jp.1 * r.0) / det;
        let mut step = 1.0;
        let mut improved = false;
        for _ in 0..12 {
            let cand = clamp_disk(p + step * dp, q + step * dq, theta_max);
            if let Some(rc) = residual(cand.0, cand.1) {
                let e = hypot(rc.0, rc.1);
                if e < err {
                    p = cand.0;
                    q = cand.1;
                    r = rc;
                    err = e;
                    improved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    Some(((p, q), err))
}

/// Builds a lookup table of `width x height` pixel rays for a KB, MEI, or
/// perspective model. ERP models are refused: their inverse is closed form.
pub fn build_lookup_table(model: &CameraModel, width: usize, height: usize, config: &LutConfig) -> Result<LookupTable> {
    if let CameraModel::Erp { .. } = model {
        return Err(Error::LutNotApplicable("erp"));
    }
    model.validate()?;
    if width == 0 || height == 0 {
        return Err(Error::Domain("lookup table dimensions must be positive"));
    }
    if config.search_resolution < 2 {
        return Err(Error::Domain("search resolution must be at least 2"));
    }
    let theta_max = model.max_incidence();
    let n = config.search_resolution;
    let step = 2.0 * theta_max / n as f64;

    // Pass 1: coarse grid, best sample per pixel.
    let mut best: Vec<(f64, (f64, f64))> = vec![(f64::INFINITY, (0.0, 0.0)); width * height];
    for j in 0..n {
        let q = -theta_max + (j as f64 + 0.5) * step;
        for i in 0..n {
            let p = -theta_max + (i as f64 + 0.5) * step;
            if hypot(p, q) > theta_max {
                continue;
            }
            let Some(px) = model.project(direction(p, q)) else { continue };
            if !(px.u >= 0.0 && px.v >= 0.0 && px.u < width as f64 && px.v < height as f64) {
                continue;
            }
            let (x, y) = (px.u as usize, px.v as usize);
            let center = PixelCoord::new(x as f64 + 0.5, y as f64 + 0.5);
            let d = px.dist(center);
            let slot = &mut best[y * width + x];
            if d < slot.0 {
                *slot = (d, (p, q));
            }
        }
    }

    // Pass 2: local refinement.
    let radius = config.seed_radius as isize;
    let cells: Vec<(Vec3, bool)> = crate::map_rows(height, |y| {
        let mut row = Vec::with_capacity(width);
        for x in 0..width {
            let target = PixelCoord::new(x as f64 + 0.5, y as f64 + 0.5);
            let seed = if best[y * width + x].0.is_finite() {
                Some(best[y * width + x].1)
            } else {
                let mut found: Option<(f64, (f64, f64))> = None;
                for dy in -radius..=radius {
                    for dx in -radius..=radius {
                        let (nx, ny) = (x as isize + dx, y as isize + dy);
                        if nx < 0 || ny < 0 || nx >= width as isize || ny >= height as isize {
                            continue;
                        }
                        let cand = best[ny as usize * width + nx as usize];
                        let dist = (dx * dx + dy * dy) as f64;
                        if cand.0.is_finite() && found.is_none_or(|f| dist < f.0) {
                            found = Some((dist, cand.1));
                        }
                    }
                }
                found.map(|f| f.1)
            };
            let cell = seed
                .and_then(|s| refine(model, target, s, theta_max, config.refine_iters))
                .filter(|&(_, err)| err < LUT_MAX_ERROR_PX)
                .and_then(|((p, q), _)| direction(p, q).normalized())
                .map_or((Vec3::default(), false), |r| (r, true));
            row.push(cell);
        }
        row
    });
    let (rays, valid) = cells.into_iter().unzip();
    LookupTable::new(width, height, rays, valid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::camera::{Intrinsics, KbDistortion};

    #[test]
    fn erp_is_refused() {
        let r = build_lookup_table(&CameraModel::Erp { height: 8 }, 16, 8, &LutConfig::default());
        assert_eq!(r, Err(Error::LutNotApplicable("erp")));
    }

    #[test]
    fn single_pixel_at_principal_point_is_axis() {
        let m = CameraModel::kannala_brandt(Intrinsics::new(1.0, 1.0, 0.5, 0.5), KbDistortion::default());
        let lut = build_lookup_table(&m, 1, 1, &LutConfig { search_resolution: 64, ..Default::default() }).unwrap();
        let r = lut.ray(0, 0).unwrap();
        assert!((r - Vec3::Z).norm() < 1e-9, "{r:?}");
    }

    #[test]
    fn pixel_center_lookup_is_exact() {
        let m = CameraModel::Perspective(Intrinsics::new(20.0, 20.0, 8.0, 8.0));
        let lut = build_lookup_table(&m, 16, 16, &LutConfig { search_resolution: 256, ..Default::default() }).unwrap();
        assert_eq!(lut.ray_at(PixelCoord::new(3.5, 7.5)).unwrap(), lut.ray(3, 7).unwrap());
        assert!(lut.ray_at(PixelCoord::new(-0.1, 3.0)).is_err());
    }

    #[test]
    fn closed_form_refuses_distorted() {
        let m = CameraModel::kannala_brandt(Intrinsics::new(1.0, 1.0, 0.5, 0.5), KbDistortion::default());
        assert_eq!(LookupTable::closed_form(&m, 2, 2), Err(Error::MissingLut));
    }
}

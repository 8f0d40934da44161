//! Camera models: forward projection of camera-frame rays to pixels, and
//! unprojection (closed form for pinhole / ERP, lookup table for fisheye).
//!
//! Pixel centers sit at integer + 0.5; the continuous coordinate `(0, 0)` is
//! the top-left corner of the top-left pixel.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::geometry::{SphereVec, SphericalCoord, TANGENT_EPS};
use crate::lut::LookupTable;
use crate::math::{atan, atan2, hypot, sqrt, Vec3};

/// Default upper bound on the KB incidence angle: π/2 plus a 0.1 rad margin.
pub const DEFAULT_KB_MAX_THETA: f64 = FRAC_PI_2 + 0.1;

/// Continuous pixel coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PixelCoord {
    pub u: f64,
    pub v: f64,
}

impl PixelCoord {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn dist(self, o: PixelCoord) -> f64 {
        hypot(self.u - o.u, self.v - o.v)
    }
}

/// Pinhole intrinsics with skew: `u = fx (x + alpha y) + cx`, `v = fy y + cy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub alpha: f64,
}

impl Intrinsics {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64) -> Self {
        Self { fx, fy, cx, cy, alpha: 0.0 }
    }

    pub fn with_skew(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fx > 0.0 && self.fy > 0.0) || !self.fx.is_finite() || !self.fy.is_finite() {
            return Err(Error::Domain("focal lengths must be positive and finite"));
        }
        if !(self.cx.is_finite() && self.cy.is_finite() && self.alpha.is_finite()) {
            return Err(Error::Domain("principal point and skew must be finite"));
        }
        Ok(())
    }

    #[inline]
    pub fn to_pixel(&self, x: f64, y: f64) -> PixelCoord {
        PixelCoord::new(self.fx * (x + self.alpha * y) + self.cx, self.fy * y + self.cy)
    }

    #[inline]
    pub fn from_pixel(&self, p: PixelCoord) -> (f64, f64) {
        let y = (p.v - self.cy) / self.fy;
        let x = (p.u - self.cx) / self.fx - self.alpha * y;
        (x, y)
    }
}

/// Kannala-Brandt radial polynomial in the incidence angle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KbDistortion {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
}

impl KbDistortion {
    /// `θ_d = θ (1 + k1 θ² + k2 θ⁴ + k3 θ⁶ + k4 θ⁸)`
    #[inline]
    pub fn distort_angle(&self, theta: f64) -> f64 {
        let t2 = theta * theta;
        theta * (1.0 + t2 * (self.k1 + t2 * (self.k2 + t2 * (self.k3 + t2 * self.k4))))
    }
}

/// Unified (MEI) model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeiDistortion {
    pub xi: f64,
    pub k1: f64,
    pub k2: f64,
    pub p1: f64,
    pub p2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CameraModel {
    Perspective(Intrinsics),
    KannalaBrandt {
        intrinsics: Intrinsics,
        distortion: KbDistortion,
        /// Rays with incidence angle above this are not projectable.
        max_theta: f64,
    },
    Mei {
        intrinsics: Intrinsics,
        distortion: MeiDistortion,
    },
    /// Full equirectangular image of the given height; width is `2 * height`.
    Erp {
        height: u32,
    },
}

impl CameraModel {
    pub fn kannala_brandt(intrinsics: Intrinsics, distortion: KbDistortion) -> Self {
        CameraModel::KannalaBrandt { intrinsics, distortion, max_theta: DEFAULT_KB_MAX_THETA }
    }

    pub fn mei(intrinsics: Intrinsics, distortion: MeiDistortion) -> Self {
        CameraModel::Mei { intrinsics, distortion }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CameraModel::Perspective(_) => "perspective",
            CameraModel::KannalaBrandt { .. } => "kb",
            CameraModel::Mei { .. } => "mei",
            CameraModel::Erp { .. } => "erp",
        }
    }

    pub fn intrinsics(&self) -> Option<&Intrinsics> {
        match self {
            CameraModel::Perspective(k)
            | CameraModel::KannalaBrandt { intrinsics: k, .. }
            | CameraModel::Mei { intrinsics: k, .. } => Some(k),
            CameraModel::Erp { .. } => None,
        }
    }

    /// Whether unprojection needs a lookup table.
    pub fn is_distorted(&self) -> bool {
        matches!(self, CameraModel::KannalaBrandt { .. } | CameraModel::Mei { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CameraModel::Perspective(k) => k.validate(),
            CameraModel::KannalaBrandt { intrinsics, distortion, max_theta } => {
                intrinsics.validate()?;
                let d = distortion;
                if ![d.k1, d.k2, d.k3, d.k4].iter().all(|k| k.is_finite()) {
                    return Err(Error::Domain("KB coefficients must be finite"));
                }
                if !(*max_theta > 0.0 && *max_theta <= PI) {
                    return Err(Error::Domain("KB max_theta must lie in (0, π]"));
                }
                Ok(())
            }
            CameraModel::Mei { intrinsics, distortion } => {
                intrinsics.validate()?;
                let d = distortion;
                if ![d.xi, d.k1, d.k2, d.p1, d.p2].iter().all(|k| k.is_finite()) {
                    return Err(Error::Domain("MEI parameters must be finite"));
                }
                if d.xi < 0.0 {
                    return Err(Error::Domain("MEI xi must be non-negative"));
                }
                Ok(())
            }
            CameraModel::Erp { height } => {
                if *height == 0 {
                    Err(Error::Domain("ERP height must be positive"))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Largest incidence angle (from +z) the model can project.
    pub fn max_incidence(&self) -> f64 {
        match self {
            CameraModel::Perspective(_) => FRAC_PI_2 - 1e-6,
            CameraModel::KannalaBrandt { max_theta, .. } => *max_theta,
            CameraModel::Mei { distortion, .. } => {
                if distortion.xi >= 1.0 {
                    PI
                } else {
                    libm::acos(-distortion.xi) - 1e-6
                }
            }
            CameraModel::Erp { .. } => PI,
        }
    }

    /// Projects a unit camera-frame ray to a pixel, or `None` when the ray is
    /// outside the model's domain.
    pub fn project(&self, ray: Vec3) -> Option<PixelCoord> {
        let v = SphereVec::from_vec3(ray);
        let px = match self {
            CameraModel::Perspective(k) => {
                let t = v.tangent()?;
                k.to_pixel(t.x_t, t.y_t)
            }
            CameraModel::KannalaBrandt { intrinsics, distortion, max_theta } => {
                let (xd, yd) = kb_distort_stable(distortion, v, *max_theta)?;
                intrinsics.to_pixel(xd, yd)
            }
            CameraModel::Mei { intrinsics, distortion } => {
                let (xd, yd) = mei_distort(distortion, v)?;
                intrinsics.to_pixel(xd, yd)
            }
            CameraModel::Erp { height } => {
                let h = *height as f64;
                let s = SphericalCoord::from_unit(ray);
                PixelCoord::new((s.lon + PI) / (2.0 * PI) * 2.0 * h, (s.lat + FRAC_PI_2) / PI * h)
            }
        };
        (px.u.is_finite() && px.v.is_finite()).then_some(px)
    }

    /// Unit ray of a pixel. Perspective and ERP use closed forms; KB and MEI
    /// interpolate the lookup table.
    pub fn unproject(&self, pixel: PixelCoord, lut: Option<&LookupTable>) -> Result<Vec3> {
        match self {
            CameraModel::Perspective(k) => {
                let (x, y) = k.from_pixel(pixel);
                Vec3::new(x, y, 1.0).normalized().ok_or(Error::InvalidPixel { u: pixel.u, v: pixel.v })
            }
            CameraModel::Erp { height } => {
                let h = *height as f64;
                let lon = pixel.u / (2.0 * h) * 2.0 * PI - PI;
                let lat = pixel.v / h * PI - FRAC_PI_2;
                Ok(SphericalCoord::new(lat, lon).to_unit())
            }
            CameraModel::KannalaBrandt { .. } | CameraModel::Mei { .. } => lut.ok_or(Error::MissingLut)?.ray_at(pixel),
        }
    }

    /// Vertical field of view through the principal point for an image of
    /// `height` rows: sum of the incidence angles of the top and bottom edges.
    ///
    /// Edges beyond the projectable domain are capped at `max_incidence`.
    pub fn vertical_fov(&self, height: f64) -> f64 {
        match self {
            CameraModel::Erp { .. } => return PI,
            CameraModel::Perspective(k) => {
                return atan(k.cy / k.fy) + atan((height - k.cy) / k.fy);
            }
            _ => {}
        }
        let theta_max = self.max_incidence();
        // Incidence angle whose image row reaches `target` along the vertical
        // meridian. Bisection relies on the row moving monotonically away
        // from cy, which the KB/MEI domain caps are chosen to enforce.
        let edge = |sign: f64, target: f64| -> f64 {
            let row = |theta: f64| {
                let ray = Vec3::new(0.0, sign * libm::sin(theta), libm::cos(theta));
                self.project(ray).map(|p| p.v)
            };
            let reached = |theta: f64| match row(theta) {
                Some(v) => sign * (v - target) >= 0.0,
                None => true,
            };
            if !reached(theta_max) {
                return theta_max;
            }
            let (mut lo, mut hi) = (0.0, theta_max);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if reached(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        };
        edge(-1.0, 0.0) + edge(1.0, height)
    }
}

/// KB distortion using the numerators `(x̄, ȳ)`, valid up to and beyond 90°.
pub fn kb_distort_stable(d: &KbDistortion, v: SphereVec, max_theta: f64) -> Option<(f64, f64)> {
    let r = hypot(v.x_bar, v.y_bar);
    let theta = atan2(r, v.cos_c);
    if theta > max_theta {
        return None;
    }
    let theta_d = d.distort_angle(theta);
    // θ_d / r → 1/cos c as r → 0; only reached at the optical axis itself.
    let scale = if r > 1e-300 { theta_d / r } else { 1.0 / v.cos_c };
    Some((scale * v.x_bar, scale * v.y_bar))
}

/// KB distortion through tangent-plane coordinates (`θ = atan r`); breaks
/// down as `cos c → 0`. Kept for cross-checking the stable path.
pub fn kb_distort_tangent(d: &KbDistortion, v: SphereVec, max_theta: f64) -> Option<(f64, f64)> {
    let t = v.tangent()?;
    let r = hypot(t.x_t, t.y_t);
    let theta = atan(r);
    if theta > max_theta {
        return None;
    }
    let theta_d = d.distort_angle(theta);
    let scale = if r > 1e-300 { theta_d / r } else { 1.0 };
    Some((scale * t.x_t, scale * t.y_t))
}

/// MEI projection onto the shifted sphere, radial then tangential distortion.
pub fn mei_distort(d: &MeiDistortion, v: SphereVec) -> Option<(f64, f64)> {
    let denom = v.cos_c + d.xi;
    if denom <= TANGENT_EPS {
        return None;
    }
    let pu = v.x_bar / denom;
    let pv = v.y_bar / denom;
    let rho2 = pu * pu + pv * pv;
    let radial = 1.0 + d.k1 * rho2 + d.k2 * rho2 * rho2;
    let pu = pu * radial;
    let pv = pv * radial;
    // ρ² stays the pre-radial value, following the listed update order.
    let xd = pu + 2.0 * d.p1 * pu * pv + d.p2 * (rho2 + 2.0 * pu * pu);
    let yd = pv + d.p1 * (rho2 + 2.0 * pv * pv) + 2.0 * d.p2 * pu * pv;
    Some((xd, yd))
}

/// Unit ray for tangent-plane coordinates.
pub fn tangent_ray(x_t: f64, y_t: f64) -> Vec3 {
    let inv = 1.0 / sqrt(x_t * x_t + y_t * y_t + 1.0);
    Vec3::new(x_t * inv, y_t * inv, inv)
}

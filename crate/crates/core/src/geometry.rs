//! Spherical and gnomonic (tangent-plane) projection.
//!
//! Conventions used across the crate:
//!
//! * `lat` is elevation, `lon` is azimuth, both in radians.
//! * The camera frame is +x right, +y down, +z forward. The direction with
//!   `lat = 0, lon = 0` is +z, positive `lon` turns toward +x and positive
//!   `lat` toward +y, so latitude grows downward in image space just as ERP
//!   rows do.
//! * Unit vector of `(lat, lon)`: `(cos lat sin lon, sin lat, cos lat cos lon)`.
//!
//! A tangent plane centered on `(lat_c, lon_c)` has basis
//! `e_x = ∂/∂lon`, `e_y = ∂/∂lat` and normal `e_z` = the center direction. A
//! point's [`SphereVec`] is its unit vector expressed in that basis, which is
//! exactly the camera-frame ray of a camera looking at the tangent center.

use crate::math::{asin_clamped, atan2, cos, hypot, sin, sqrt, wrap_pi, Vec3};

/// Below this `cos c` the tangent-plane coordinate is reported as undefined.
pub const TANGENT_EPS: f64 = 1e-12;

/// A direction on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SphericalCoord {
    /// Elevation in radians, nominally `[-π/2, π/2]`.
    pub lat: f64,
    /// Azimuth in radians, nominally `[-π, π)`.
    pub lon: f64,
}

impl SphericalCoord {
    pub const fn new(lat: f64, lon: f64) -> Self {
        Self { lat, lon }
    }

    /// Canonical representative: `lat` folded into `[-π/2, π/2]`, `lon` into
    /// `[-π, π)`. Coordinates past a pole (as produced by ERP patches that
    /// straddle one) describe the same direction after folding.
    pub fn normalized(self) -> Self {
        Self::from_unit(self.to_unit())
    }

    pub fn to_unit(self) -> Vec3 {
        let (sl, cl) = (sin(self.lat), cos(self.lat));
        Vec3::new(cl * sin(self.lon), sl, cl * cos(self.lon))
    }

    /// Inverse of [`to_unit`](Self::to_unit); `v` need not be normalized.
    pub fn from_unit(v: Vec3) -> Self {
        let lat = atan2(v.y, hypot(v.x, v.z));
        let lon = wrap_pi(atan2(v.x, v.z));
        Self { lat, lon }
    }
}

/// Normalized tangent-plane coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TangentCoord {
    pub x_t: f64,
    pub y_t: f64,
}

impl TangentCoord {
    pub const fn new(x_t: f64, y_t: f64) -> Self {
        Self { x_t, y_t }
    }
}

/// Point on the unit sphere relative to a tangent center: `(x̄, ȳ, cos c)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SphereVec {
    pub x_bar: f64,
    pub y_bar: f64,
    pub cos_c: f64,
}

impl SphereVec {
    pub const fn new(x_bar: f64, y_bar: f64, cos_c: f64) -> Self {
        Self { x_bar, y_bar, cos_c }
    }

    pub fn from_vec3(v: Vec3) -> Self {
        Self::new(v.x, v.y, v.z)
    }

    pub fn to_vec3(self) -> Vec3 {
        Vec3::new(self.x_bar, self.y_bar, self.cos_c)
    }

    /// Tangent-plane coordinate, undefined at or behind the tangent horizon.
    pub fn tangent(self) -> Option<TangentCoord> {
        if self.cos_c > TANGENT_EPS {
            Some(TangentCoord::new(self.x_bar / self.cos_c, self.y_bar / self.cos_c))
        } else {
            None
        }
    }

    /// Angle `c` between this point and the tangent center.
    pub fn angle(self) -> f64 {
        atan2(hypot(self.x_bar, self.y_bar), self.cos_c)
    }
}

/// Cosine of the great-circle angle between `p` and `center`.
pub fn angular_distance(p: SphericalCoord, center: SphericalCoord) -> f64 {
    let v = sin(center.lat) * sin(p.lat) + cos(center.lat) * cos(p.lat) * cos(p.lon - center.lon);
    v.clamp(-1.0, 1.0)
}

/// Gnomonic projection of `p` onto the plane tangent at `center`.
///
/// Returns the tangent coordinate (`None` when `cos c <= TANGENT_EPS`) and the
/// sphere vector, which stays well defined for every direction.
pub fn gnomonic_forward(p: SphericalCoord, center: SphericalCoord) -> (Option<TangentCoord>, SphereVec) {
    let v = sphere_vec(p, center);
    (v.tangent(), v)
}

/// `(x̄, ȳ, cos c)` of `p` about `center`.
pub fn sphere_vec(p: SphericalCoord, center: SphericalCoord) -> SphereVec {
    let dlon = p.lon - center.lon;
    let (sp, cp) = (sin(p.lat), cos(p.lat));
    let (sc, cc) = (sin(center.lat), cos(center.lat));
    let cd = cos(dlon);
    SphereVec { x_bar: cp * sin(dlon), y_bar: cc * sp - sc * cp * cd, cos_c: sc * sp + cc * cp * cd }
}

/// Inverse gnomonic projection.
pub fn gnomonic_inverse(t: TangentCoord, center: SphericalCoord) -> SphericalCoord {
    let rho = hypot(t.x_t, t.y_t);
    if rho == 0.0 {
        return SphericalCoord::new(center.lat, wrap_pi(center.lon));
    }
    // c = atan(rho); sin c and cos c from rho directly.
    let inv = 1.0 / sqrt(1.0 + rho * rho);
    let cos_c = inv;
    let sin_c = rho * inv;
    let (s0, c0) = (sin(center.lat), cos(center.lat));
    let lat = asin_clamped(cos_c * s0 + t.y_t * sin_c * c0 / rho);
    let lon = center.lon + atan2(t.x_t * sin_c, rho * c0 * cos_c - t.y_t * s0 * sin_c);
    SphericalCoord::new(lat, wrap_pi(lon))
}

/// Tangent-frame basis `(e_x, e_y, e_z)` at `center`, in the sphere frame.
pub fn tangent_basis(center: SphericalCoord) -> [Vec3; 3] {
    let (s0, c0) = (sin(center.lat), cos(center.lat));
    let (sl, cl) = (sin(center.lon), cos(center.lon));
    [Vec3::new(cl, 0.0, -sl), Vec3::new(-s0 * sl, c0, -s0 * cl), Vec3::new(c0 * sl, s0, c0 * cl)]
}

/// Inverse of [`sphere_vec`]: works for any direction including those behind
/// the tangent plane, where [`gnomonic_inverse`] has no input.
pub fn sphere_vec_to_spherical(v: SphereVec, center: SphericalCoord) -> SphericalCoord {
    let [ex, ey, ez] = tangent_basis(center);
    let w = ex * v.x_bar + ey * v.y_bar + ez * v.cos_c;
    SphericalCoord::from_unit(w)
}

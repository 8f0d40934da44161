//! JSON configuration: cameras, scenes, and conversion sidecars.
//!
//! Camera and scene files use degrees for angles; sidecars record the
//! resolved patch spec and augmentation in radians so replays are exact.

use std::path::Path;

use anycam_core::camera::DEFAULT_KB_MAX_THETA;
use anycam_core::{AugmentParams, CameraModel, ErpPatchSpec, Intrinsics, KbDistortion, MeiDistortion, Scene, Vec3};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

fn zero() -> f64 {
    0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum CameraConfig {
    Perspective {
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        #[serde(default = "zero")]
        alpha: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        width: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        height: Option<usize>,
    },
    Kb {
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        #[serde(default = "zero")]
        alpha: f64,
        #[serde(default = "zero")]
        k1: f64,
        #[serde(default = "zero")]
        k2: f64,
        #[serde(default = "zero")]
        k3: f64,
        #[serde(default = "zero")]
        k4: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_theta_deg: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        width: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        height: Option<usize>,
    },
    Mei {
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        #[serde(default = "zero")]
        alpha: f64,
        xi: f64,
        #[serde(default = "zero")]
        k1: f64,
        #[serde(default = "zero")]
        k2: f64,
        #[serde(default = "zero")]
        p1: f64,
        #[serde(default = "zero")]
        p2: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        width: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        height: Option<usize>,
    },
    /// Full equirectangular image; `height` is the ERP height.
    Erp { height: u32 },
}

impl CameraConfig {
    pub fn model(&self) -> Result<CameraModel> {
        let model = match *self {
            CameraConfig::Perspective { fx, fy, cx, cy, alpha, .. } => {
                CameraModel::Perspective(Intrinsics::new(fx, fy, cx, cy).with_skew(alpha))
            }
            CameraConfig::Kb { fx, fy, cx, cy, alpha, k1, k2, k3, k4, max_theta_deg, .. } => {
                CameraModel::KannalaBrandt {
                    intrinsics: Intrinsics::new(fx, fy, cx, cy).with_skew(alpha),
                    distortion: KbDistortion { k1, k2, k3, k4 },
                    max_theta: max_theta_deg.map_or(DEFAULT_KB_MAX_THETA, f64::to_radians),
                }
            }
            CameraConfig::Mei { fx, fy, cx, cy, alpha, xi, k1, k2, p1, p2, .. } => CameraModel::Mei {
                intrinsics: Intrinsics::new(fx, fy, cx, cy).with_skew(alpha),
                distortion: MeiDistortion { xi, k1, k2, p1, p2 },
            },
            CameraConfig::Erp { height } => CameraModel::Erp { height },
        };
        model.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(model)
    }

    /// Image size stored in the file, if any (always known for ERP).
    pub fn image_size(&self) -> Option<(usize, usize)> {
        match *self {
            CameraConfig::Perspective { width, height, .. }
            | CameraConfig::Kb { width, height, .. }
            | CameraConfig::Mei { width, height, .. } => width.zip(height),
            CameraConfig::Erp { height } => Some((2 * height as usize, height as usize)),
        }
    }

    /// Resolves the image size from explicit flags or the file.
    pub fn resolve_size(&self, width: Option<usize>, height: Option<usize>) -> Result<(usize, usize)> {
        match (width, height, self.image_size()) {
            (Some(w), Some(h), _) => Ok((w, h)),
            (None, None, Some(s)) => Ok(s),
            _ => Err(CliError::Config(
                "image size needed: pass --width and --height or set them in the camera file".into(),
            )),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        load_json(path)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scene", rename_all = "snake_case", deny_unknown_fields)]
pub enum SceneConfig {
    Sphere { radius: f64 },
    Box { half_extents: [f64; 3] },
    Plane { normal: [f64; 3], offset: f64 },
    CheckerSphere { radius: f64, period_deg: f64 },
}

impl SceneConfig {
    pub fn scene(&self) -> Result<Scene> {
        let s = match *self {
            SceneConfig::Sphere { radius } => Scene::ConcentricSphere { radius },
            SceneConfig::Box { half_extents: [x, y, z] } => Scene::AxisBox { half_extents: Vec3::new(x, y, z) },
            SceneConfig::Plane { normal: [x, y, z], offset } => Scene::Plane { normal: Vec3::new(x, y, z), offset },
            SceneConfig::CheckerSphere { radius, period_deg } => {
                Scene::CheckerSphere { radius, period: period_deg.to_radians() }
            }
        };
        s.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        load_json(path)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchSpecRecord {
    pub erp_height: u32,
    pub patch_h: u32,
    pub patch_w: u32,
    pub center_lat_rad: f64,
    pub center_lon_rad: f64,
}

impl From<&ErpPatchSpec> for PatchSpecRecord {
    fn from(s: &ErpPatchSpec) -> Self {
        Self {
            erp_height: s.erp_height,
            patch_h: s.patch_h,
            patch_w: s.patch_w,
            center_lat_rad: s.center_lat,
            center_lon_rad: s.center_lon,
        }
    }
}

impl PatchSpecRecord {
    pub fn spec(&self) -> Result<ErpPatchSpec> {
        ErpPatchSpec::new(self.erp_height, self.patch_h, self.patch_w, self.center_lat_rad, self.center_lon_rad)
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AugmentRecord {
    pub scale: f64,
    pub rotation_rad: f64,
    pub translation: [f64; 2],
    pub pitch_jitter_rad: f64,
}

impl From<&AugmentParams> for AugmentRecord {
    fn from(a: &AugmentParams) -> Self {
        Self {
            scale: a.scale,
            rotation_rad: a.rotation,
            translation: [a.translation.0, a.translation.1],
            pitch_jitter_rad: a.pitch_jitter,
        }
    }
}

impl AugmentRecord {
    pub fn params(&self) -> Result<AugmentParams> {
        let a = AugmentParams {
            scale: self.scale,
            rotation: self.rotation_rad,
            translation: (self.translation[0], self.translation[1]),
            pitch_jitter: self.pitch_jitter_rad,
        };
        a.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(a)
    }
}

/// Everything needed to replay a conversion bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub camera: CameraConfig,
    pub source_width: usize,
    pub source_height: usize,
    pub spec: PatchSpecRecord,
    pub augment: AugmentRecord,
    /// Pitch given on the command line, degrees.
    pub pitch_deg: f64,
    pub seed: u64,
    pub fov_align: bool,
    /// Camera vertical FoV used for alignment, radians.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub camera_vfov_rad: Option<f64>,
    pub depth_interp: String,
    pub ratios: Vec<f64>,
    pub apply_resize_depth_scale: bool,
    /// Depth scale of each ratio, in order.
    #[serde(default)]
    pub depth_scales: Vec<f64>,
}

impl Sidecar {
    pub fn load(path: &Path) -> Result<Self> {
        load_json(path)
    }
}

pub fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("config types serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

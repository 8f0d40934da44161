//! Command-line front end.

use std::path::{Path, PathBuf};

use anycam_core::depth::{euclidean_to_z, pixel_rays, unproject_depth, z_to_euclidean};
use anycam_core::erp::{self, build_erp_to_image_grid, build_image_to_erp_grid, fov_align_scale, jittered_spec};
use anycam_core::lut::{build_lookup_table, LutConfig};
use anycam_core::sample::{sample_depth, sample_image, sample_raster};
use anycam_core::{
    metrics, scene, AugmentParams, CameraModel, DepthMap, ErpPatchSpec, Interp, LookupTable, PixelCoord, Raster,
    Rotation,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{AugmentRecord, CameraConfig, PatchSpecRecord, SceneConfig, Sidecar};
use crate::error::{CliError, Result};
use crate::{imageio, lutfile, pfm, ply};

#[derive(Debug, Parser)]
#[command(name = "anycam", version, about = "Convert images and metric depth between camera models and ERP space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Warp a camera image (and depth) into an ERP patch.
    Convert(ConvertArgs),
    /// Map an ERP patch (image and/or depth) back into camera space.
    Invert(InvertArgs),
    /// Build a ray lookup table for a camera.
    LutGen(LutGenArgs),
    /// Up-project a depth map to a PLY point cloud.
    Unproject(UnprojectArgs),
    /// Compare a predicted depth map against ground truth.
    Eval(EvalArgs),
    /// Write several randomly augmented ERP patches of one input.
    Augment(AugmentArgs),
    /// Render an analytic scene with exact depth.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InterpArg {
    Nearest,
    Bilinear,
}

impl From<InterpArg> for Interp {
    fn from(i: InterpArg) -> Self {
        match i {
            InterpArg::Nearest => Interp::Nearest,
            InterpArg::Bilinear => Interp::Bilinear,
        }
    }
}

impl InterpArg {
    fn name(self) -> &'static str {
        match self {
            InterpArg::Nearest => "nearest",
            InterpArg::Bilinear => "bilinear",
        }
    }

    fn parse_name(s: &str) -> Result<Self> {
        match s {
            "nearest" => Ok(InterpArg::Nearest),
            "bilinear" => Ok(InterpArg::Bilinear),
            other => Err(CliError::Config(format!("unknown interpolation '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchSize {
    pub h: u32,
    pub w: u32,
}

fn parse_patch(s: &str) -> std::result::Result<PatchSize, String> {
    let (h, w) = s.split_once(['x', 'X']).ok_or("expected HxW, e.g. 500x700")?;
    Ok(PatchSize {
        h: h.trim().parse().map_err(|_| "bad patch height")?,
        w: w.trim().parse().map_err(|_| "bad patch width")?,
    })
}

/// Comma-separated resize ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct Ratios(pub Vec<f64>);

fn parse_ratios(s: &str) -> std::result::Result<Ratios, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad ratio '{t}'")))
        .collect::<std::result::Result<_, _>>()
        .map(Ratios)
}

#[derive(Debug, Clone, Args)]
pub struct LutArgs {
    /// Directory for cached lookup tables (built on first use).
    #[arg(long)]
    pub lut_cache: Option<PathBuf>,
    /// Coarse search grid size per axis for lookup-table construction.
    #[arg(long, default_value_t = 2048)]
    pub lut_resolution: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub image: PathBuf,
    /// Euclidean-distance depth (PFM, meters).
    #[arg(long)]
    pub depth: Option<PathBuf>,
    /// The depth file holds Z-buffer values; convert to Euclidean first.
    #[arg(long)]
    pub z_buffer: bool,
    #[arg(long, required_unless_present = "sidecar")]
    pub camera: Option<PathBuf>,
    #[arg(long, default_value_t = 1400)]
    pub erp_height: u32,
    #[arg(long, value_parser = parse_patch, default_value = "500x700")]
    pub patch: PatchSize,
    /// Camera pitch in degrees (positive looks up); the patch is centered at latitude -pitch.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub pitch: f64,
    /// Camera yaw in degrees; the patch is centered at this longitude.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub yaw: f64,
    /// Uniform latitude jitter bound, degrees.
    #[arg(long, default_value_t = 0.0)]
    pub pitch_jitter: f64,
    /// Uniform in-plane rotation jitter bound, degrees.
    #[arg(long, default_value_t = 0.0)]
    pub rot_jitter: f64,
    /// Scale the tangent plane so the camera's vertical FoV fills the patch height.
    #[arg(long)]
    pub fov_align: bool,
    #[arg(long, value_parser = parse_ratios, default_value = "1.0")]
    pub ratios: Ratios,
    /// Keep raw depth values in resized copies instead of applying the resize scale.
    #[arg(long)]
    pub no_resize_depth_scale: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = InterpArg::Nearest)]
    pub depth_interp: InterpArg,
    /// Replay a previous conversion from its sidecar JSON.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
    #[command(flatten)]
    pub lut: LutArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct AugmentArgs {
    #[command(flatten)]
    pub convert: ConvertArgs,
    /// Number of augmented variants; variant i uses seed + i.
    #[arg(long, default_value_t = 4)]
    pub count: usize,
    /// Uniform scale jitter: scale drawn from [1 - j, 1 + j].
    #[arg(long, default_value_t = 0.0)]
    pub scale_jitter: f64,
    /// Uniform tangent-plane translation jitter bound.
    #[arg(long, default_value_t = 0.0)]
    pub shift_jitter: f64,
}

#[derive(Debug, Clone, Args)]
pub struct InvertArgs {
    #[arg(long, required_unless_present = "erp_image")]
    pub erp_depth: Option<PathBuf>,
    #[arg(long)]
    pub erp_image: Option<PathBuf>,
    #[arg(long)]
    pub camera: PathBuf,
    /// Sidecar from `convert`, or a bare patch-spec JSON.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long, value_enum, default_value_t = InterpArg::Nearest)]
    pub depth_interp: InterpArg,
    #[command(flatten)]
    pub lut: LutArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct LutGenArgs {
    #[arg(long)]
    pub camera: PathBuf,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long, default_value_t = 2048)]
    pub resolution: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct UnprojectArgs {
    #[arg(long)]
    pub depth: PathBuf,
    /// Camera JSON; optional for ERP patches described by `--spec`.
    #[arg(long, required_unless_present = "spec")]
    pub camera: Option<PathBuf>,
    /// Sidecar or patch-spec JSON placing an ERP patch.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Per-point colors from this PNG.
    #[arg(long)]
    pub image: Option<PathBuf>,
    /// Explicit lookup-table file.
    #[arg(long)]
    pub lut_file: Option<PathBuf>,
    #[command(flatten)]
    pub lut: LutArgs,
    #[arg(long)]
    pub z_buffer: bool,
    #[arg(long)]
    pub ascii: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long)]
    pub min_depth: f64,
    #[arg(long)]
    pub max_depth: f64,
    /// Also write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub scene: PathBuf,
    #[arg(long)]
    pub camera: PathBuf,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub pitch: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub yaw: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub roll: f64,
    /// Write Z-buffer depth instead of Euclidean distance.
    #[arg(long)]
    pub z_buffer: bool,
    #[command(flatten)]
    pub lut: LutArgs,
    #[arg(long)]
    pub out_image: PathBuf,
    #[arg(long)]
    pub out_depth: PathBuf,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Convert(a) => cmd_convert(&a).map(|_| ()),
        Command::Invert(a) => cmd_invert(&a),
        Command::LutGen(a) => cmd_lut_gen(&a),
        Command::Unproject(a) => cmd_unproject(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Augment(a) => cmd_augment(&a),
        Command::Render(a) => cmd_render(&a),
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn lut_config(resolution: usize) -> LutConfig {
    LutConfig { search_resolution: resolution, ..LutConfig::default() }
}

/// Cache file name: model, size, search resolution, and a digest of the
/// camera parameters.
pub fn lut_cache_path(dir: &Path, cfg: &CameraConfig, width: usize, height: usize, resolution: usize) -> PathBuf {
    let key = serde_json::to_string(cfg).expect("camera config serializes");
    let digest = Sha256::digest(format!("{key}|{width}x{height}|{resolution}").as_bytes());
    let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
    let name = cfg.model().map(|m| m.name()).unwrap_or("camera");
    dir.join(format!("{name}_{width}x{height}_r{resolution}_{hex}.lut"))
}

/// Loads or builds the lookup table a distorted model needs; `None` for
/// models with closed-form inverses. Built tables go through the file
/// encoding so cached and fresh runs agree bit for bit.
pub fn obtain_lut(
    cfg: &CameraConfig,
    model: &CameraModel,
    width: usize,
    height: usize,
    args: &LutArgs,
) -> Result<Option<LookupTable>> {
    if !model.is_distorted() {
        return Ok(None);
    }
    if let Some(dir) = &args.lut_cache {
        let path = lut_cache_path(dir, cfg, width, height, args.lut_resolution);
        if path.exists() {
            let lut = lutfile::read(&path)?;
            if (lut.width, lut.height) != (width, height) {
                return Err(CliError::Dimension(format!("cached LUT {} has the wrong size", path.display())));
            }
            return Ok(Some(lut));
        }
        let lut = build_lookup_table(model, width, height, &lut_config(args.lut_resolution))?;
        ensure_dir(dir)?;
        lutfile::write(&path, &lut)?;
        return Ok(Some(lutfile::quantize(&lut)));
    }
    let lut = build_lookup_table(model, width, height, &lut_config(args.lut_resolution))?;
    Ok(Some(lutfile::quantize(&lut)))
}

fn deg(d: f64) -> f64 {
    d.to_radians()
}

fn uniform(rng: &mut ChaCha8Rng, bound: f64) -> f64 {
    if bound > 0.0 {
        rng.random_range(-bound..=bound)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ExtraJitter {
    scale: f64,
    shift: f64,
}

/// Resolves the exact patch spec and augmentation for a conversion, either
/// from a sidecar or from flags + seed.
fn resolve_conversion(
    a: &ConvertArgs,
    extra: ExtraJitter,
    seed: u64,
) -> Result<(CameraConfig, ErpPatchSpec, AugmentParams, Option<f64>)> {
    if let Some(path) = &a.sidecar {
        let sc = Sidecar::load(path)?;
        return Ok((sc.camera.clone(), sc.spec.spec()?, sc.augment.params()?, sc.camera_vfov_rad));
    }
    let camera_path = a.camera.as_ref().ok_or_else(|| CliError::Config("--camera is required".into()))?;
    let cfg = CameraConfig::load(camera_path)?;
    let spec = ErpPatchSpec::for_pitch(a.erp_height, a.patch.h, a.patch.w, deg(a.pitch), deg(a.yaw))
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pitch_jitter = uniform(&mut rng, deg(a.pitch_jitter));
    let rotation = uniform(&mut rng, deg(a.rot_jitter));
    let scale_jitter = 1.0 + uniform(&mut rng, extra.scale);
    let tx = uniform(&mut rng, extra.shift);
    let ty = uniform(&mut rng, extra.shift);
    let mut vfov = None;
    let mut scale = scale_jitter;
    if a.fov_align {
        let model = cfg.model()?;
        let src = imageio::read_rgb(&a.image)?;
        let fov = model.vertical_fov(src.height as f64);
        vfov = Some(fov);
        scale *= fov_align_scale(fov, &spec);
    }
    let aug = AugmentParams { scale, rotation, translation: (tx, ty), pitch_jitter };
    aug.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok((cfg, spec, aug, vfov))
}

fn ratio_tag(r: f64) -> String {
    if r == 1.0 {
        "patch".to_string()
    } else {
        format!("patch_r{r:.2}")
    }
}

/// Runs one conversion into `out_dir`; returns the sidecar written.
fn convert_into(a: &ConvertArgs, extra: ExtraJitter, seed: u64, out_dir: &Path) -> Result<Sidecar> {
    let (cfg, spec, aug, vfov) = resolve_conversion(a, extra, seed)?;
    let replay = match &a.sidecar {
        Some(p) => Some(Sidecar::load(p)?),
        None => None,
    };
    let (ratios, apply_scale, depth_interp) = match &replay {
        Some(sc) => (sc.ratios.clone(), sc.apply_resize_depth_scale, InterpArg::parse_name(&sc.depth_interp)?),
        None => (a.ratios.0.clone(), !a.no_resize_depth_scale, a.depth_interp),
    };
    let model = cfg.model()?;
    let image = imageio::read_rgb(&a.image)?;
    let (sw, sh) = image.dims();
    if let Some(sc) = &replay {
        if (sc.source_width, sc.source_height) != (sw, sh) {
            return Err(CliError::Dimension("image size differs from the sidecar's source size".into()));
        }
    }
    let depth = match &a.depth {
        Some(p) => {
            let d = pfm::read(p)?;
            if d.dims() != (sw, sh) {
                return Err(CliError::Dimension(format!("depth {:?} vs image {:?}", d.dims(), (sw, sh))));
            }
            Some(if a.z_buffer {
                let lut = obtain_lut(&cfg, &model, sw, sh, &a.lut)?;
                z_to_euclidean(&d, &pixel_rays(&model, sw, sh, lut.as_ref(), None)?)?
            } else {
                d
            })
        }
        None => None,
    };

    let grid = build_image_to_erp_grid(&spec, &model, &aug, sw, sh)?;
    let (patch, mask) = sample_image(&grid, &image, Interp::Bilinear)?;
    let patch_depth = depth.as_ref().map(|d| sample_depth(&grid, d, depth_interp.into())).transpose()?;

    ensure_dir(out_dir)?;
    let base_depth = patch_depth.clone().unwrap_or_else(|| DepthMap::empty(patch.width, patch.height));
    let set = erp::multi_resolution_set(&patch, &base_depth, &ratios, apply_scale)?;
    let mask_f: Raster<f32> =
        Raster { width: mask.width, height: mask.height, data: mask.data.iter().map(|&m| m as u8 as f32).collect() };
    for item in &set {
        let tag = ratio_tag(item.ratio);
        let (w, h) = item.image.dims();
        let m = if (w, h) == mask.dims() {
            mask.clone()
        } else {
            let g = erp::resize_grid(mask.width, mask.height, w, h);
            let (r, _) = sample_raster(&g, &mask_f, None, Interp::Nearest)?;
            Raster { width: w, height: h, data: r.data.iter().map(|&v| v > 0.5).collect() }
        };
        imageio::write_rgb(&out_dir.join(format!("{tag}.png")), &item.image)?;
        imageio::write_mask(&out_dir.join(format!("{tag}_mask.png")), &m)?;
        if patch_depth.is_some() {
            pfm::write(&out_dir.join(format!("{tag}_depth.pfm")), &item.depth)?;
        }
    }

    let sidecar = Sidecar {
        camera: cfg,
        source_width: sw,
        source_height: sh,
        spec: PatchSpecRecord::from(&spec),
        augment: AugmentRecord::from(&aug),
        pitch_deg: replay.as_ref().map_or(a.pitch, |s| s.pitch_deg),
        seed: replay.as_ref().map_or(seed, |s| s.seed),
        fov_align: replay.as_ref().map_or(a.fov_align, |s| s.fov_align),
        camera_vfov_rad: vfov,
        depth_interp: depth_interp.name().to_string(),
        ratios,
        apply_resize_depth_scale: apply_scale,
        depth_scales: set.iter().map(|s| s.depth_scale).collect(),
    };
    crate::config::write_json(&out_dir.join("convert.json"), &sidecar)?;
    Ok(sidecar)
}

pub fn cmd_convert(a: &ConvertArgs) -> Result<Sidecar> {
    convert_into(a, ExtraJitter::default(), a.seed, &a.out_dir)
}

pub fn cmd_augment(a: &AugmentArgs) -> Result<()> {
    if a.convert.sidecar.is_some() {
        return Err(CliError::Config("augment samples new parameters; use convert --sidecar to replay".into()));
    }
    let extra = ExtraJitter { scale: a.scale_jitter, shift: a.shift_jitter };
    if !(0.0..1.0).contains(&extra.scale) {
        return Err(CliError::Config("--scale-jitter must lie in [0, 1)".into()));
    }
    for i in 0..a.count {
        let dir = a.convert.out_dir.join(format!("aug_{i:03}"));
        convert_into(&a.convert, extra, a.convert.seed.wrapping_add(i as u64), &dir)?;
    }
    Ok(())
}

/// Patch spec and augmentation from a sidecar or a bare patch-spec file.
fn load_spec(path: &Path) -> Result<(ErpPatchSpec, AugmentParams)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    if let Ok(sc) = serde_json::from_str::<Sidecar>(&text) {
        return Ok((sc.spec.spec()?, sc.augment.params()?));
    }
    let rec: PatchSpecRecord =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok((rec.spec()?, AugmentParams::IDENTITY))
}

pub fn cmd_invert(a: &InvertArgs) -> Result<()> {
    let cfg = CameraConfig::load(&a.camera)?;
    let model = cfg.model()?;
    let (w, h) = cfg.resolve_size(a.width, a.height)?;
    let (spec, aug) = load_spec(&a.spec)?;
    let lut = obtain_lut(&cfg, &model, w, h, &a.lut)?;
    let grid = build_erp_to_image_grid(&spec, &model, lut.as_ref(), &aug, w, h)?;
    ensure_dir(&a.out_dir)?;
    let mut mask = Raster { width: w, height: h, data: grid.valid.clone() };
    if let Some(p) = &a.erp_image {
        let img = imageio::read_rgb(p)?;
        let (out, m) = sample_image(&grid, &img, Interp::Bilinear)?;
        mask = m;
        imageio::write_rgb(&a.out_dir.join("image.png"), &out)?;
    }
    if let Some(p) = &a.erp_depth {
        let d = pfm::read(p)?;
        let out = sample_depth(&grid, &d, a.depth_interp.into())?;
        pfm::write(&a.out_dir.join("depth.pfm"), &out)?;
    }
    imageio::write_mask(&a.out_dir.join("mask.png"), &mask)
}

#[derive(Debug, Serialize)]
struct LutReport {
    width: usize,
    height: usize,
    valid: usize,
    max_reprojection_error_px: f64,
    path: String,
}

pub fn cmd_lut_gen(a: &LutGenArgs) -> Result<()> {
    let cfg = CameraConfig::load(&a.camera)?;
    let model = cfg.model()?;
    let (w, h) = cfg.resolve_size(a.width, a.height)?;
    let lut = lutfile::quantize(&build_lookup_table(&model, w, h, &lut_config(a.resolution))?);
    let mut max_err: f64 = 0.0;
    for y in 0..h {
        for x in 0..w {
            if let Some(r) = lut.ray(x, y) {
                if let Some(p) = model.project(r) {
                    max_err = max_err.max(p.dist(PixelCoord::new(x as f64 + 0.5, y as f64 + 0.5)));
                }
            }
        }
    }
    lutfile::write(&a.out, &lut)?;
    let report = LutReport {
        width: w,
        height: h,
        valid: lut.valid_count(),
        max_reprojection_error_px: max_err,
        path: a.out.display().to_string(),
    };
    println!("{}", serde_json::to_string(&report).expect("report serializes"));
    Ok(())
}

pub fn cmd_unproject(a: &UnprojectArgs) -> Result<()> {
    let depth = pfm::read(&a.depth)?;
    let (w, h) = depth.dims();
    let spec = match &a.spec {
        Some(p) => {
            let (s, aug) = load_spec(p)?;
            Some(jittered_spec(&s, &aug))
        }
        None => None,
    };
    let (cfg, model) = match (&a.camera, &spec) {
        (Some(p), _) => {
            let cfg = CameraConfig::load(p)?;
            let m = cfg.model()?;
            (cfg, m)
        }
        (None, Some(s)) => (CameraConfig::Erp { height: s.erp_height }, CameraModel::Erp { height: s.erp_height }),
        (None, None) => return Err(CliError::Config("--camera or --spec is required".into())),
    };
    let lut = match &a.lut_file {
        Some(p) => Some(lutfile::read(p)?),
        None => obtain_lut(&cfg, &model, w, h, &a.lut)?,
    };
    let colors = a.image.as_ref().map(|p| imageio::read_rgb(p)).transpose()?;
    let depth = if a.z_buffer {
        z_to_euclidean(&depth, &pixel_rays(&model, w, h, lut.as_ref(), spec.as_ref())?)?
    } else {
        depth
    };
    let cloud = unproject_depth(&depth, &model, lut.as_ref(), spec.as_ref(), colors.as_ref())?;
    let format = if a.ascii { ply::PlyFormat::Ascii } else { ply::PlyFormat::BinaryLittleEndian };
    ply::write(&a.out, &cloud, format)
}

#[derive(Debug, Serialize)]
pub struct EvalReport {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub abs_rel: f64,
    pub rmse: f64,
    pub log10: f64,
    pub valid_pixels: usize,
    pub total_pixels: usize,
}

pub fn cmd_eval(a: &EvalArgs) -> Result<()> {
    let pred = pfm::read(&a.pred)?;
    let gt = pfm::read(&a.gt)?;
    let m = metrics::evaluate(&pred, &gt, a.min_depth, a.max_depth)?;
    let report = EvalReport {
        delta1: m.delta1,
        delta2: m.delta2,
        delta3: m.delta3,
        abs_rel: m.abs_rel,
        rmse: m.rmse,
        log10: m.log10,
        valid_pixels: m.count,
        total_pixels: m.total,
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{text}");
    if let Some(out) = &a.out {
        std::fs::write(out, format!("{text}\n")).map_err(|e| CliError::io(out, e))?;
    }
    Ok(())
}

/// Camera-to-world rotation for yaw, then pitch (positive up), then roll.
pub fn pose_from_degrees(pitch: f64, yaw: f64, roll: f64) -> Rotation {
    Rotation::about_y(deg(yaw)).compose(&Rotation::about_x(deg(pitch))).compose(&Rotation::about_z(deg(roll)))
}

pub fn cmd_render(a: &RenderArgs) -> Result<()> {
    let scene = SceneConfig::load(&a.scene)?.scene()?;
    let cfg = CameraConfig::load(&a.camera)?;
    let model = cfg.model()?;
    let (w, h) = cfg.resolve_size(a.width, a.height)?;
    let lut = obtain_lut(&cfg, &model, w, h, &a.lut)?;
    let pose = pose_from_degrees(a.pitch, a.yaw, a.roll);
    let (img, mut depth) = scene::render(&scene, &model, w, h, &pose, lut.as_ref())?;
    if a.z_buffer {
        depth = euclidean_to_z(&depth, &pixel_rays(&model, w, h, lut.as_ref(), None)?)?;
    }
    imageio::write_rgb(&a.out_image, &img)?;
    pfm::write(&a.out_depth, &depth)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patch_and_ratio_parsing() {
        assert_eq!(parse_patch("500x700").unwrap(), PatchSize { h: 500, w: 700 });
        assert!(parse_patch("500").is_err());
        assert_eq!(parse_ratios("1.0,0.7,0.4").unwrap(), Ratios(vec![1.0, 0.7, 0.4]));
        assert!(parse_ratios("1.0,x").is_err());
        assert_eq!(ratio_tag(1.0), "patch");
        assert_eq!(ratio_tag(0.7), "patch_r0.70");
    }

    #[test]
    fn command_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn pitch_pose_matches_patch_center() {
        // Camera pitched up by 30° looks at latitude -30°.
        let axis = pose_from_degrees(30.0, 0.0, 0.0).apply(anycam_core::Vec3::Z);
        let s = anycam_core::SphericalCoord::from_unit(axis);
        assert!((s.lat + 30f64.to_radians()).abs() < 1e-12);
    }
}

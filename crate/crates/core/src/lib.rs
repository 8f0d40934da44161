//! Camera geometry for converting images and metric depth between
//! perspective, fisheye (Kannala-Brandt, MEI) and equirectangular (ERP)
//! representations.
//!
//! The crate is `no_std` (with `alloc`). The `parallel` feature spreads row
//! loops over a rayon pool; results are identical with or without it.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod camera;
pub mod depth;
pub mod erp;
pub mod error;
pub mod geometry;
pub mod lut;
pub mod math;
pub mod metrics;
pub mod raster;
pub mod sample;
pub mod scene;

pub use camera::{CameraModel, Intrinsics, KbDistortion, MeiDistortion, PixelCoord};
pub use depth::PointCloud;
pub use erp::{AugmentParams, ErpPatchSpec, WarpGrid};
pub use error::{Error, Result};
pub use geometry::{SphereVec, SphericalCoord, TangentCoord};
pub use lut::{LookupTable, LutConfig};
pub use math::{Rotation, Vec3};
pub use metrics::DepthMetrics;
pub use raster::{DepthMap, Mask, Raster, RgbImage};
pub use sample::Interp;
pub use scene::Scene;

use alloc::vec::Vec;

/// Evaluates `f` for every row and concatenates the rows in order.
pub(crate) fn map_rows<T, F>(height: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> Vec<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let rows: Vec<Vec<T>> = (0..height).into_par_iter().map(f).collect();
        rows.into_iter().flatten().collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..height).flat_map(f).collect()
    }
}

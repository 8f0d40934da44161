//! 8-bit RGB PNG images and grayscale validity masks.

use std::path::Path;

use anycam_core::{Mask, Raster, RgbImage};

use crate::error::{CliError, Result};

pub fn read_rgb(path: &Path) -> Result<RgbImage> {
    if !path.exists() {
        return Err(CliError::MissingInput(path.to_path_buf()));
    }
    let img = image::open(path).map_err(|e| CliError::format(path, e.to_string()))?.to_rgb8();
    let (w, h) = img.dimensions();
    let data = img.pixels().map(|p| p.0.map(|c| c as f32 / 255.0)).collect();
    Ok(Raster { width: w as usize, height: h as usize, data })
}

#[inline]
pub fn to_u8(v: f32) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

pub fn encode_rgb(img: &RgbImage) -> image::RgbImage {
    let data = img.data.iter().flat_map(|p| p.map(to_u8)).collect();
    image::RgbImage::from_raw(img.width as u32, img.height as u32, data).expect("buffer sized to image")
}

pub fn write_rgb(path: &Path, img: &RgbImage) -> Result<()> {
    encode_rgb(img).save(path).map_err(|e| CliError::format(path, e.to_string()))
}

pub fn write_mask(path: &Path, mask: &Mask) -> Result<()> {
    let data = mask.data.iter().map(|&m| if m { 255 } else { 0 }).collect();
    image::GrayImage::from_raw(mask.width as u32, mask.height as u32, data)
        .expect("buffer sized to mask")
        .save(path)
        .map_err(|e| CliError::format(path, e.to_string()))
}

pub fn read_mask(path: &Path) -> Result<Mask> {
    let img = image::open(path).map_err(|e| CliError::format(path, e.to_string()))?.to_luma8();
    let (w, h) = img.dimensions();
    Ok(Raster { width: w as usize, height: h as usize, data: img.pixels().map(|p| p.0[0] > 127).collect() })
}

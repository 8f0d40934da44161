//! Grid sampling: applies a [`WarpGrid`] to an image or depth map.

use alloc::vec::Vec;

use crate::erp::WarpGrid;
use crate::error::{Error, Result};
use crate::math::floor;
use crate::raster::{DepthMap, Mask, Raster, RgbImage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interp {
    #[default]
    Nearest,
    Bilinear,
}

/// Pixel types that can be blended with bilinear weights.
pub trait Texel: Copy + Default + Send + Sync {
    fn blend(taps: &[(Self, f64)]) -> Self;
}

impl Texel for f64 {
    fn blend(taps: &[(Self, f64)]) -> Self {
        taps.iter().map(|&(v, w)| v * w).sum()
    }
}

impl Texel for f32 {
    fn blend(taps: &[(Self, f64)]) -> Self {
        taps.iter().map(|&(v, w)| v as f64 * w).sum::<f64>() as f32
    }
}

impl Texel for [f32; 3] {
    fn blend(taps: &[(Self, f64)]) -> Self {
        let mut acc = [0.0f64; 3];
        for &(v, w) in taps {
            for c in 0..3 {
                acc[c] += v[c] as f64 * w;
            }
        }
        [acc[0] as f32, acc[1] as f32, acc[2] as f32]
    }
}

#[inline]
fn tap_index(i: isize, n: usize, wrap: bool) -> usize {
    if wrap {
        i.rem_euclid(n as isize) as usize
    } else {
        i.clamp(0, n as isize - 1) as usize
    }
}

/// Samples `src` at every grid position. Cells are invalid when the grid cell
/// is invalid or any contributing source pixel is masked out.
pub fn sample_raster<T: Texel>(
    grid: &WarpGrid,
    src: &Raster<T>,
    src_valid: Option<&Mask>,
    interp: Interp,
) -> Result<(Raster<T>, Mask)> {
    if src.dims() != (grid.src_w, grid.src_h) {
        return Err(Error::DimensionMismatch { expected: (grid.src_w, grid.src_h), found: src.dims() });
    }
    if let Some(m) = src_valid {
        if m.dims() != src.dims() {
            return Err(Error::DimensionMismatch { expected: src.dims(), found: m.dims() });
        }
    }
    let (w, h) = (src.width, src.height);
    let ok = |x: usize, y: usize| src_valid.is_none_or(|m| *m.get(x, y));
    let cells: Vec<(T, bool)> = crate::map_rows(grid.target_h, |ty| {
        (0..grid.target_w)
            .map(|tx| {
                let i = ty * grid.target_w + tx;
                if !grid.valid[i] {
                    return (T::default(), false);
                }
                let (sx, sy) = (grid.src_x[i], grid.src_y[i]);
                match interp {
                    Interp::Nearest => {
                        let x = tap_index(floor(sx) as isize, w, grid.wrap_x);
                        let y = tap_index(floor(sy) as isize, h, false);
                        if ok(x, y) {
                            (*src.get(x, y), true)
                        } else {
                            (T::default(), false)
                        }
                    }
                    Interp::Bilinear => {
                        let (fx, fy) = (sx - 0.5, sy - 0.5);
                        let (x0f, y0f) = (floor(fx), floor(fy));
                        let (ax, ay) = (fx - x0f, fy - y0f);
                        let (x0, y0) = (x0f as isize, y0f as isize);
                        let mut taps: [(T, f64); 4] = [(T::default(), 0.0); 4];
                        let mut n = 0;
                        for (dx, dy, wgt) in [
                            (0, 0, (1.0 - ax) * (1.0 - ay)),
                            (1, 0, ax * (1.0 - ay)),
                            (0, 1, (1.0 - ax) * ay),
                            (1, 1, ax * ay),
                        ] {
                            if wgt == 0.0 {
                                continue;
                            }
                            let x = tap_index(x0 + dx, w, grid.wrap_x);
                            let y = tap_index(y0 + dy, h, false);
                            if !ok(x, y) {
                                return (T::default(), false);
                            }
                            taps[n] = (*src.get(x, y), wgt);
                            n += 1;
                        }
                        (T::blend(&taps[..n]), true)
                    }
                }
            })
            .collect()
    });
    let (data, valid): (Vec<T>, Vec<bool>) = cells.into_iter().unzip();
    Ok((
        Raster { width: grid.target_w, height: grid.target_h, data },
        Raster { width: grid.target_w, height: grid.target_h, data: valid },
    ))
}

/// Samples an RGB image; invalid cells are black.
pub fn sample_image(grid: &WarpGrid, src: &RgbImage, interp: Interp) -> Result<(RgbImage, Mask)> {
    sample_raster(grid, src, None, interp)
}

/// Samples a depth map, propagating its validity mask.
pub fn sample_depth(grid: &WarpGrid, src: &DepthMap, interp: Interp) -> Result<DepthMap> {
    let (values, valid) = sample_raster(grid, &src.values, Some(&src.valid), interp)?;
    DepthMap::with_mask(values, valid)
}

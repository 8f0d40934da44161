//! Row-major 2D buffers: RGB images, masks, and metric depth maps.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Raster<T> {
    pub width: usize,
    pub height: usize,
    pub data: Vec<T>,
}

impl<T: Clone> Raster<T> {
    pub fn filled(width: usize, height: usize, value: T) -> Self {
        Self { width, height, data: vec![value; width * height] }
    }
}

impl<T> Raster<T> {
    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::DimensionMismatch { expected: (width, height), found: (data.len(), 1) });
        }
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> &T {
        &self.data[y * self.width + x]
    }

    #[inline]
    pub fn get_mut(&mut self, x: usize, y: usize) -> &mut T {
        &mut self.data[y * self.width + x]
    }
}

/// RGB image with channels in `[0, 1]`.
pub type RgbImage = Raster<[f32; 3]>;

/// Per-pixel validity.
pub type Mask = Raster<bool>;

/// Euclidean distance from the camera center, meters. Invalid pixels hold 0.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthMap {
    pub values: Raster<f64>,
    pub valid: Mask,
}

impl DepthMap {
    /// Treats every positive finite value as valid.
    pub fn from_values(values: Raster<f64>) -> Self {
        let valid = Raster {
            width: values.width,
            height: values.height,
            data: values.data.iter().map(|&v| v > 0.0 && v.is_finite()).collect(),
        };
        let mut d = Self { values, valid };
        d.zero_invalid();
        d
    }

    /// Pairs values with an explicit mask; mask entries whose value is not
    /// positive and finite are cleared.
    pub fn with_mask(values: Raster<f64>, valid: Mask) -> Result<Self> {
        if values.dims() != valid.dims() {
            return Err(Error::DimensionMismatch { expected: values.dims(), found: valid.dims() });
        }
        let mut d = Self { values, valid };
        for (m, &v) in d.valid.data.iter_mut().zip(&d.values.data) {
            *m = *m && v > 0.0 && v.is_finite();
        }
        d.zero_invalid();
        Ok(d)
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self { values: Raster::filled(width, height, 0.0), valid: Raster::filled(width, height, false) }
    }

    fn zero_invalid(&mut self) {
        for (v, &m) in self.values.data.iter_mut().zip(&self.valid.data) {
            if !m {
                *v = 0.0;
            }
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.values.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.values.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        self.values.dims()
    }

    /// Value at a pixel if valid.
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> Option<f64> {
        let i = y * self.width() + x;
        self.valid.data[i].then(|| self.values.data[i])
    }

    pub fn valid_count(&self) -> usize {
        self.valid.data.iter().filter(|&&m| m).count()
    }

    /// Multiplies every valid value by `factor`.
    pub fn scaled(&self, factor: f64) -> DepthMap {
        let mut out = self.clone();
        for (v, &m) in out.values.data.iter_mut().zip(&out.valid.data) {
            if m {
                *v *= factor;
            }
        }
        out
    }
}

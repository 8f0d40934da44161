//! Metric depth accuracy measures.

use crate::error::{Error, Result};
use crate::math::{log10, sqrt};
use crate::raster::DepthMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthMetrics {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub abs_rel: f64,
    pub rmse: f64,
    pub log10: f64,
    /// Pixels that entered the evaluation.
    pub count: usize,
    /// Pixels in each map.
    pub total: usize,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct Sum {
    sum: f64,
    comp: f64,
}

impl Sum {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// `1.25`, `1.25²`, `1.25³`; δ comparisons are strict.
pub const DELTA_THRESHOLDS: [f64; 3] = [1.25, 1.5625, 1.953125];

/// Evaluates `pred` against `gt` over pixels valid in both maps whose ground
/// truth lies in `[min_depth, max_depth]`.
pub fn evaluate(pred: &DepthMap, gt: &DepthMap, min_depth: f64, max_depth: f64) -> Result<DepthMetrics> {
    if pred.dims() != gt.dims() {
        return Err(Error::DimensionMismatch { expected: gt.dims(), found: pred.dims() });
    }
    if min_depth.is_nan() || max_depth.is_nan() || min_depth > max_depth {
        return Err(Error::Domain("min_depth must not exceed max_depth"));
    }
    let mut n = 0usize;
    let mut hits = [0usize; 3];
    let (mut rel, mut sq, mut lg) = (Sum::default(), Sum::default(), Sum::default());
    for i in 0..gt.values.data.len() {
        if !(pred.valid.data[i] && gt.valid.data[i]) {
            continue;
        }
        let (p, g) = (pred.values.data[i], gt.values.data[i]);
        if g < min_depth || g > max_depth {
            continue;
        }
        n += 1;
        let ratio = if p > g { p / g } else { g / p };
        for (k, &t) in DELTA_THRESHOLDS.iter().enumerate() {
            if ratio < t {
                hits[k] += 1;
            }
        }
        let diff = p - g;
        rel.add(diff.abs() / g);
        sq.add(diff * diff);
        lg.add((log10(p) - log10(g)).abs());
    }
    if n == 0 {
        return Err(Error::EmptyIntersection);
    }
    let nf = n as f64;
    Ok(DepthMetrics {
        delta1: hits[0] as f64 / nf,
        delta2: hits[1] as f64 / nf,
        delta3: hits[2] as f64 / nf,
        abs_rel: rel.value() / nf,
        rmse: sqrt(sq.value() / nf),
        log10: lg.value() / nf,
        count: n,
        total: gt.values.data.len(),
    })
}

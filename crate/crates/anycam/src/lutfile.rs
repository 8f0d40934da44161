//! Lookup-table cache files.
//!
//! Layout (little endian): magic `LUT1`, `u32` width, `u32` height, then
//! `width * height` row-major `f32` ray triples, then a validity bitmap of
//! `ceil(width * height / 8)` bytes, pixel `i` at bit `i % 8` of byte `i / 8`.

use std::path::Path;

use anycam_core::{LookupTable, Vec3};

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 4] = b"LUT1";

pub fn encode(lut: &LookupTable) -> Vec<u8> {
    let n = lut.width * lut.height;
    let mut out = Vec::with_capacity(12 + n * 12 + n.div_ceil(8));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(lut.width as u32).to_le_bytes());
    out.extend_from_slice(&(lut.height as u32).to_le_bytes());
    for r in &lut.rays {
        for v in [r.x, r.y, r.z] {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    let mut bits = vec![0u8; n.div_ceil(8)];
    for (i, _) in lut.valid.iter().enumerate().filter(|(_, v)| **v) {
        bits[i / 8] |= 1 << (i % 8);
    }
    out.extend_from_slice(&bits);
    out
}

/// Decodes a cache file; rays are widened to `f64` and renormalized.
pub fn decode(bytes: &[u8], path: &Path) -> Result<LookupTable> {
    let bad = |m: &str| CliError::format(path, m);
    if bytes.len() < 12 || &bytes[..4] != MAGIC {
        return Err(bad("not a lookup-table file"));
    }
    let w = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let h = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let n = w * h;
    if bytes.len() != 12 + n * 12 + n.div_ceil(8) {
        return Err(bad("lookup-table size does not match its header"));
    }
    let f = |k: usize| f32::from_le_bytes(bytes[12 + 4 * k..16 + 4 * k].try_into().unwrap()) as f64;
    let bits = &bytes[12 + n * 12..];
    let mut rays = Vec::with_capacity(n);
    let mut valid = Vec::with_capacity(n);
    for i in 0..n {
        let ok = bits[i / 8] >> (i % 8) & 1 == 1;
        let r = Vec3::new(f(3 * i), f(3 * i + 1), f(3 * i + 2));
        match r.normalized().filter(|_| ok) {
            Some(r) => {
                rays.push(r);
                valid.push(true);
            }
            None => {
                rays.push(Vec3::default());
                valid.push(false);
            }
        }
    }
    Ok(LookupTable::new(w, h, rays, valid)?)
}

pub fn read(path: &Path) -> Result<LookupTable> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    decode(&bytes, path)
}

pub fn write(path: &Path, lut: &LookupTable) -> Result<()> {
    std::fs::write(path, encode(lut)).map_err(|e| CliError::io(path, e))
}

/// The table as it will be after a write/read cycle, so freshly built and
/// cached tables give identical results.
pub fn quantize(lut: &LookupTable) -> LookupTable {
    decode(&encode(lut), Path::new("<memory>")).expect("encoded table decodes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_round_trip() {
        let lut = LookupTable::new(
            3,
            3,
            (0..9).map(|i| Vec3::new(i as f64, 1.0, 2.0).normalized().unwrap()).collect(),
            (0..9).map(|i| i != 4).collect(),
        )
        .unwrap();
        let bytes = encode(&lut);
        assert_eq!(bytes.len(), 12 + 9 * 12 + 2);
        assert_eq!(&bytes[..4], b"LUT1");
        assert_eq!(bytes[12 + 108], 0b1110_1111);
        assert_eq!(bytes[12 + 109], 0b0000_0001);
        let back = decode(&bytes, Path::new("x")).unwrap();
        assert_eq!(back.valid, lut.valid);
        for (a, b) in back.rays.iter().zip(&lut.rays).filter(|(a, _)| a.norm() > 0.0) {
            assert!((*a - *b).norm() < 1e-6);
        }
        assert_eq!(quantize(&back), back);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(decode(b"NOPE00000000", Path::new("x")).is_err());
        let mut bytes = encode(&LookupTable::new(1, 1, vec![Vec3::Z], vec![true]).unwrap());
        bytes.pop();
        assert!(decode(&bytes, Path::new("x")).is_err());
    }
}

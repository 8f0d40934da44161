//! Single-channel PFM (`Pf`) depth files. Rows are stored bottom to top; a
//! negative scale marks little-endian data. Invalid depth is written as 0.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use anycam_core::{DepthMap, Raster};

use crate::error::{CliError, Result};

pub fn encode(depth: &DepthMap) -> Vec<u8> {
    let (w, h) = depth.dims();
    let mut out = format!("Pf\n{w} {h}\n-1.0\n").into_bytes();
    out.reserve(w * h * 4);
    for y in (0..h).rev() {
        for x in 0..w {
            let v = depth.at(x, y).unwrap_or(0.0) as f32;
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

fn header_token(r: &mut impl BufRead) -> std::io::Result<String> {
    let mut tok = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        if r.read(&mut byte)? == 0 {
            break;
        }
        if byte[0].is_ascii_whitespace() {
            if tok.is_empty() {
                continue;
            }
            break;
        }
        tok.push(byte[0]);
    }
    Ok(String::from_utf8_lossy(&tok).into_owned())
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<DepthMap> {
    let bad = |msg: &str| CliError::format(path, msg);
    let mut r = BufReader::new(bytes);
    let io = |e| CliError::io(path, e);
    let magic = header_token(&mut r).map_err(io)?;
    if magic != "Pf" {
        return Err(bad("expected single-channel PFM (Pf)"));
    }
    let w: usize = header_token(&mut r).map_err(io)?.parse().map_err(|_| bad("bad width"))?;
    let h: usize = header_token(&mut r).map_err(io)?.parse().map_err(|_| bad("bad height"))?;
    let scale: f64 = header_token(&mut r).map_err(io)?.parse().map_err(|_| bad("bad scale"))?;
    if scale == 0.0 {
        return Err(bad("scale must be non-zero"));
    }
    let little = scale < 0.0;
    let mut raw = vec![0u8; w * h * 4];
    r.read_exact(&mut raw).map_err(|_| bad("truncated pixel data"))?;
    let mut values = vec![0.0f64; w * h];
    for (i, chunk) in raw.chunks_exact(4).enumerate() {
        let b = [chunk[0], chunk[1], chunk[2], chunk[3]];
        let v = if little { f32::from_le_bytes(b) } else { f32::from_be_bytes(b) };
        let (x, row) = (i % w, i / w);
        values[(h - 1 - row) * w + x] = v as f64;
    }
    Ok(DepthMap::from_values(Raster { width: w, height: h, data: values }))
}

pub fn read(path: &Path) -> Result<DepthMap> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    decode(&bytes, path)
}

pub fn write(path: &Path, depth: &DepthMap) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(&encode(depth)).map_err(|e| CliError::io(path, e))
}

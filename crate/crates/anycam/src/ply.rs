//! PLY point-cloud writer: `x y z` as float32, optional `red green blue`
//! as uchar.

use std::io::Write;
use std::path::Path;

use anycam_core::PointCloud;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlyFormat {
    Ascii,
    BinaryLittleEndian,
}

pub fn encode(cloud: &PointCloud, format: PlyFormat) -> Vec<u8> {
    let colors = cloud.colors.as_deref().filter(|c| c.len() == cloud.points.len());
    let mut out = Vec::new();
    let fmt = match format {
        PlyFormat::Ascii => "ascii",
        PlyFormat::BinaryLittleEndian => "binary_little_endian",
    };
    let _ = write!(out, "ply\nformat {fmt} 1.0\nelement vertex {}\n", cloud.len());
    out.extend_from_slice(b"property float x\nproperty float y\nproperty float z\n");
    if colors.is_some() {
        out.extend_from_slice(b"property uchar red\nproperty uchar green\nproperty uchar blue\n");
    }
    out.extend_from_slice(b"end_header\n");
    for (i, p) in cloud.points.iter().enumerate() {
        let xyz = [p.x as f32, p.y as f32, p.z as f32];
        match format {
            PlyFormat::Ascii => {
                let _ = write!(out, "{} {} {}", xyz[0], xyz[1], xyz[2]);
                if let Some(c) = colors {
                    let _ = write!(out, " {} {} {}", c[i][0], c[i][1], c[i][2]);
                }
                out.push(b'\n');
            }
            PlyFormat::BinaryLittleEndian => {
                for v in xyz {
                    out.extend_from_slice(&v.to_le_bytes());
                }
                if let Some(c) = colors {
                    out.extend_from_slice(&c[i]);
                }
            }
        }
    }
    out
}

pub fn write(path: &Path, cloud: &PointCloud, format: PlyFormat) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(&encode(cloud, format)).map_err(|e| CliError::io(path, e))
}

/// Reads back the vertex positions of a file produced by [`encode`].
pub fn read_points(bytes: &[u8]) -> Option<Vec<[f32; 3]>> {
    let end = bytes.windows(11).position(|w| w == b"end_header\n")? + 11;
    let header = std::str::from_utf8(&bytes[..end]).ok()?;
    let count: usize = header.lines().find_map(|l| l.strip_prefix("element vertex "))?.trim().parse().ok()?;
    let has_color = header.contains("property uchar red");
    let body = &bytes[end..];
    if header.contains("format ascii") {
        let text = std::str::from_utf8(body).ok()?;
        text.lines()
            .take(count)
            .map(|l| {
                let mut it = l.split_whitespace().map(|t| t.parse::<f32>());
                Some([it.next()?.ok()?, it.next()?.ok()?, it.next()?.ok()?])
            })
            .collect()
    } else {
        let stride = 12 + if has_color { 3 } else { 0 };
        (0..count)
            .map(|i| {
                let b = body.get(i * stride..i * stride + 12)?;
                let f = |k: usize| f32::from_le_bytes(b[k * 4..k * 4 + 4].try_into().unwrap());
                Some([f(0), f(1), f(2)])
            })
            .collect()
    }
}

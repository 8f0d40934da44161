#![allow(dead_code)]

use anycam_core::{CameraModel, Intrinsics, KbDistortion, MeiDistortion, Vec3};
use rand::Rng;

pub fn perspective(size: usize) -> CameraModel {
    let s = size as f64 / 512.0;
    CameraModel::Perspective(Intrinsics::new(300.0 * s, 300.0 * s, 256.0 * s, 256.0 * s))
}

/// Roughly 190° fisheye filling most of the frame.
pub fn kb(size: usize) -> CameraModel {
    let s = size as f64 / 512.0;
    CameraModel::kannala_brandt(
        Intrinsics::new(150.0 * s, 150.0 * s, 256.0 * s, 256.0 * s),
        KbDistortion { k1: -0.01, k2: 0.001, k3: 0.0, k4: 0.0 },
    )
}

pub fn mei(size: usize) -> CameraModel {
    let s = size as f64 / 512.0;
    CameraModel::mei(
        Intrinsics::new(200.0 * s, 200.0 * s, 256.0 * s, 256.0 * s),
        MeiDistortion { xi: 0.9, k1: -0.1, k2: 0.02, p1: 1e-4, p2: -1e-4 },
    )
}

pub fn unit_vec(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}

pub fn angle(a: Vec3, b: Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Fraction of `query` points with a `reference` point within `tol`.
pub fn nn_fraction(reference: &[Vec3], query: &[Vec3], tol: f64) -> f64 {
    use std::collections::HashMap;
    let key = |p: Vec3| ((p.x / tol).floor() as i64, (p.y / tol).floor() as i64, (p.z / tol).floor() as i64);
    let mut cells: HashMap<(i64, i64, i64), Vec<Vec3>> = HashMap::new();
    for &p in reference {
        cells.entry(key(p)).or_default().push(p);
    }
    let hits = query
        .iter()
        .filter(|&&q| {
            let (x, y, z) = key(q);
            (-1..=1).any(|dx| {
                (-1..=1).any(|dy| {
                    (-1..=1).any(|dz| {
                        cells.get(&(x + dx, y + dy, z + dz)).is_some_and(|v| v.iter().any(|&p| (p - q).norm() < tol))
                    })
                })
            })
        })
        .count();
    hits as f64 / query.len() as f64
}

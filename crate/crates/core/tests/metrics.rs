use anycam_core::metrics::evaluate;
use anycam_core::{DepthMap, Mask, Raster};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Reference {
    d: [f64; 3],
    abs_rel: f64,
    rmse: f64,
    log10: f64,
    n: usize,
}

/// Straightforward per-pixel loop.
fn reference(pred: &[f64], gt: &[f64], pv: &[bool], gv: &[bool], lo: f64, hi: f64) -> Option<Reference> {
    let (mut n, mut d, mut rel, mut sq, mut lg) = (0usize, [0usize; 3], 0.0, 0.0, 0.0);
    for i in 0..gt.len() {
        if !pv[i] || !gv[i] || gt[i] < lo || gt[i] > hi {
            continue;
        }
        let (p, g) = (pred[i], gt[i]);
        n += 1;
        let r = (p / g).max(g / p);
        for (k, dk) in d.iter_mut().enumerate() {
            if r < 1.25f64.powi(k as i32 + 1) {
                *dk += 1;
            }
        }
        rel += (p - g).abs() / g;
        sq += (p - g) * (p - g);
        lg += (p.log10() - g.log10()).abs();
    }
    (n > 0).then(|| {
        let nf = n as f64;
        Reference { d: d.map(|c| c as f64 / nf), abs_rel: rel / nf, rmse: (sq / nf).sqrt(), log10: lg / nf, n }
    })
}

fn random_map(rng: &mut ChaCha8Rng, w: usize, h: usize) -> (Vec<f64>, Vec<bool>) {
    let v: Vec<f64> = (0..w * h).map(|_| rng.random_range(0.1..20.0)).collect();
    let m: Vec<bool> = (0..w * h).map(|_| rng.random_bool(0.85)).collect();
    (v, m)
}

fn depth(w: usize, h: usize, v: Vec<f64>, m: Vec<bool>) -> DepthMap {
    DepthMap::with_mask(Raster::from_vec(w, h, v).unwrap(), Mask::from_vec(w, h, m).unwrap()).unwrap()
}

#[test]
fn matches_scalar_loop_on_random_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let (gv, gm) = random_map(&mut rng, 8, 8);
        // Predictions near the truth so every δ bucket gets exercised.
        let pv: Vec<f64> = gv.iter().map(|g| g * rng.random_range(0.5..2.0)).collect();
        let pm: Vec<bool> = (0..64).map(|_| rng.random_bool(0.9)).collect();
        let (lo, hi) = (rng.random_range(0.0..2.0), rng.random_range(10.0..25.0));
        let pred = depth(8, 8, pv.clone(), pm.clone());
        let gt = depth(8, 8, gv.clone(), gm.clone());
        let r = reference(&pv, &gv, &pm, &gm, lo, hi).unwrap();
        let m = evaluate(&pred, &gt, lo, hi).unwrap();
        assert_eq!(m.count, r.n);
        assert_eq!(m.total, 64);
        for (a, b) in [
            (m.delta1, r.d[0]),
            (m.delta2, r.d[1]),
            (m.delta3, r.d[2]),
            (m.abs_rel, r.abs_rel),
            (m.rmse, r.rmse),
            (m.log10, r.log10),
        ] {
            assert!((a - b).abs() < 1e-12, "{a} {b}");
        }
    }
}

#[test]
fn constant_ratio_closed_form() {
    let gt = DepthMap::from_values(Raster::from_fn(16, 16, |x, y| 0.5 + 0.25 * (x + 16 * y) as f64));
    let pred = gt.scaled(1.3);
    let m = evaluate(&pred, &gt, 0.0, 1e3).unwrap();
    assert_eq!((m.delta1, m.delta2, m.delta3), (0.0, 1.0, 1.0));
    assert!((m.abs_rel - 0.3).abs() < 1e-12, "{}", m.abs_rel);
    assert!((m.log10 - 1.3f64.log10()).abs() < 1e-12);
}

#[test]
fn empty_intersection_and_mismatch_are_errors() {
    let a = DepthMap::empty(4, 4);
    let b = DepthMap::from_values(Raster::filled(4, 4, 1.0));
    assert!(evaluate(&a, &b, 0.0, 10.0).is_err());
    assert!(evaluate(&b, &b, 5.0, 10.0).is_err());
    assert!(evaluate(&DepthMap::empty(3, 4), &b, 0.0, 10.0).is_err());
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    prop::collection::vec((0.1f64..30.0, 0.3f64..3.0), 1..80)
        .prop_map(|v| v.into_iter().map(|(g, r)| (g * r, g)).unzip())
}

fn line(v: Vec<f64>) -> DepthMap {
    let n = v.len();
    DepthMap::from_values(Raster::from_vec(n, 1, v).unwrap())
}

proptest! {
    #[test]
    fn joint_scaling_invariance((p, g) in pair(), s in 0.1f64..10.0) {
        let a = evaluate(&line(p.clone()), &line(g.clone()), 0.0, 1e6).unwrap();
        let b = evaluate(&line(p).scaled(s), &line(g).scaled(s), 0.0, 1e6).unwrap();
        prop_assert!((a.abs_rel - b.abs_rel).abs() < 1e-12);
        prop_assert!((a.rmse * s - b.rmse).abs() < 1e-9 * (1.0 + b.rmse));
        prop_assert!((a.log10 - b.log10).abs() < 1e-12);
        // δ ratios can flip only when a ratio sits on a threshold to rounding.
        prop_assert!((a.delta1 - b.delta1).abs() <= 1.0 / a.count as f64);
    }

    #[test]
    fn permutation_invariance((p, g) in pair(), seed in any::<u64>()) {
        let mut idx: Vec<usize> = (0..p.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..idx.len()).rev() {
            idx.swap(i, rng.random_range(0..=i));
        }
        let a = evaluate(&line(p.clone()), &line(g.clone()), 0.0, 1e6).unwrap();
        let b = evaluate(&line(idx.iter().map(|&i| p[i]).collect()), &line(idx.iter().map(|&i| g[i]).collect()), 0.0, 1e6).unwrap();
        prop_assert_eq!(a.delta1, b.delta1);
        prop_assert_eq!(a.delta3, b.delta3);
        prop_assert!((a.abs_rel - b.abs_rel).abs() < 1e-12);
        prop_assert!((a.rmse - b.rmse).abs() < 1e-12 * (1.0 + a.rmse));
        prop_assert!((a.log10 - b.log10).abs() < 1e-12);
    }

    #[test]
    fn deltas_are_monotone((p, g) in pair()) {
        let m = evaluate(&line(p), &line(g), 0.0, 1e6).unwrap();
        prop_assert!(m.delta1 <= m.delta2 && m.delta2 <= m.delta3);
        prop_assert!(m.abs_rel >= 0.0 && m.rmse >= 0.0 && m.log10 >= 0.0);
    }
}

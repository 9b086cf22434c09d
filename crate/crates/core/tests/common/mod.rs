//! Reference implementations used as test oracles. They deliberately take
//! the slow, literal route and share no code with the library.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use texnet::{Angle, GrayImage};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_gray(rng: &mut ChaCha8Rng, max_side: usize, max_levels: usize) -> GrayImage {
    let w = rng.gen_range(1..=max_side);
    let h = rng.gen_range(1..=max_side);
    let levels = rng.gen_range(2..=max_levels);
    let px = (0..w * h).map(|_| rng.gen_range(0..levels) as u8).collect();
    GrayImage::new(w, h, levels, px).unwrap()
}

pub fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/synthetic")
}

/// (Δrow, Δcol) for each angle, rows increasing downward.
pub fn oracle_displacement(angle: Angle, d: isize) -> (isize, isize) {
    match angle.degrees() {
        0 => (0, d),
        45 => (-d, d),
        90 => (-d, 0),
        135 => (-d, -d),
        _ => unreachable!(),
    }
}

/// Counts every ordered pixel pair whose coordinate difference equals the
/// displacement, by comparing all pairs of positions.
pub fn oracle_counts(img: &GrayImage, angle: Angle, d: usize, symmetric: bool) -> Vec<u64> {
    let n = img.levels();
    let (dr, dc) = oracle_displacement(angle, d as isize);
    let mut counts = vec![0u64; n * n];
    for r1 in 0..img.height() {
        for c1 in 0..img.width() {
            for r2 in 0..img.height() {
                for c2 in 0..img.width() {
                    if r2 as isize - r1 as isize == dr && c2 as isize - c1 as isize == dc {
                        let a = img.get(r1, c1) as usize;
                        let b = img.get(r2, c2) as usize;
                        counts[a * n + b] += 1;
                    }
                }
            }
        }
    }
    if symmetric {
        let t: Vec<u64> = (0..n * n).map(|k| counts[(k % n) * n + k / n]).collect();
        counts.iter().zip(t).map(|(a, b)| a + b).collect()
    } else {
        counts
    }
}

/// `[contrast, dissimilarity, homogeneity, asm, energy, correlation]` from
/// the textbook formulas on the probability matrix.
pub fn oracle_features(counts: &[u64], n: usize) -> [f64; 6] {
    let total: u64 = counts.iter().sum();
    let p = |i: usize, j: usize| counts[i * n + j] as f64 / total as f64;
    let mut mu_i = 0.0;
    let mut mu_j = 0.0;
    for i in 0..n {
        for j in 0..n {
            mu_i += i as f64 * p(i, j);
            mu_j += j as f64 * p(i, j);
        }
    }
    let (mut var_i, mut var_j) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            var_i += (i as f64 - mu_i).powi(2) * p(i, j);
            var_j += (j as f64 - mu_j).powi(2) * p(i, j);
        }
    }
    let mut f = [0.0; 6];
    let mut cov = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = i as f64 - j as f64;
            f[0] += p(i, j) * d * d;
            f[1] += p(i, j) * d.abs();
            f[2] += p(i, j) / (1.0 + d * d);
            f[3] += p(i, j) * p(i, j);
            cov += p(i, j) * (i as f64 - mu_i) * (j as f64 - mu_j);
        }
    }
    f[4] = f[3].sqrt();
    // marginal variances below ~1e-20 only arise from rounding on a
    // degenerate marginal
    f[5] = if var_i * var_j > 1e-20 {
        cov / (var_i * var_j).sqrt()
    } else {
        1.0
    };
    f
}

/// `[median, mean, std, kurtosis, skew]` straight from raw pixel values.
pub fn oracle_moments(pixels: &[u8]) -> [f64; 5] {
    let n = pixels.len() as f64;
    let xs: Vec<f64> = pixels.iter().map(|&p| p as f64).collect();
    let mean = xs.iter().sum::<f64>() / n;
    let m = |k: i32| xs.iter().map(|x| (x - mean).powi(k)).sum::<f64>() / n;
    let (m2, m3, m4) = (m(2), m(3), m(4));
    let std = m2.sqrt();
    let (skew, kurt) = if m2 > 0.0 {
        (m3 / std.powi(3), m4 / (m2 * m2) - 3.0)
    } else {
        (0.0, 0.0)
    };
    let mut sorted = pixels.to_vec();
    sorted.sort_unstable();
    let median = sorted[(sorted.len() - 1) / 2] as f64;
    [median, mean, std, kurt, skew]
}

pub fn close_rel(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

pub fn naive_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..a.len() {
        s += (a[k] - b[k]) * (a[k] - b[k]);
    }
    s.sqrt()
}

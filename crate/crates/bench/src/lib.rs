//! Seeded input generators shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use texnet::{FeatureVector, GrayImage, Label, RgbImage};

pub fn random_gray(width: usize, height: usize, levels: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pixels = (0..width * height)
        .map(|_| rng.gen_range(0..levels) as u8)
        .collect();
    GrayImage::new(width, height, levels, pixels).expect("valid dimensions")
}

pub fn random_rgb(width: usize, height: usize, seed: u64) -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let planes = [(); 3].map(|_| (0..width * height).map(|_| rng.gen()).collect());
    RgbImage::from_planes(width, height, planes).expect("valid dimensions")
}

pub fn random_vectors(n: usize, dim: usize, seed: u64) -> Vec<FeatureVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|id| {
            let values = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            FeatureVector::new(id, Label::Positive, values)
        })
        .collect()
}

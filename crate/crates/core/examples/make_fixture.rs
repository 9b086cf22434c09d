//! Regenerates the synthetic 12-image fixture under `tests/fixtures/synthetic`.
//!
//! Positive samples are speckled, high-contrast textures; negative samples
//! are smooth gradients with mild noise. Two files use other PNG color types
//! (grayscale and RGBA) to exercise channel promotion.
//!
//!     cargo run -p texnet-core --example make_fixture

use std::path::PathBuf;

use image::{GrayImage, ImageBuffer, Rgb, Rgba};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIZE: u32 = 40;
const PER_CLASS: usize = 6;

fn positive(rng: &mut ChaCha8Rng, x: u32, y: u32, phase: f64) -> [u8; 3] {
    let wave = ((x as f64 * 0.9 + phase).sin() * (y as f64 * 0.7).cos() + 1.0) * 0.5;
    let speck: f64 = rng.gen_range(0.0..1.0);
    let base = if speck > 0.8 { 230.0 } else { 40.0 + 150.0 * wave };
    let v = (base + rng.gen_range(-25.0..25.0)).clamp(0.0, 255.0);
    [v as u8, (v * 0.9) as u8, (v * 0.8) as u8]
}

fn negative(rng: &mut ChaCha8Rng, x: u32, y: u32, tilt: f64) -> [u8; 3] {
    let g = 60.0 + 100.0 * (x as f64 + tilt * y as f64) / (SIZE as f64 * (1.0 + tilt));
    let v = (g + rng.gen_range(-4.0..4.0)).clamp(0.0, 255.0);
    [v as u8, v as u8, (v * 0.95) as u8]
}

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/synthetic");
    std::fs::create_dir_all(&dir).unwrap();
    let mut manifest = String::from("path,label\n");

    for i in 0..PER_CLASS * 2 {
        // interleave the classes so file order is not grouped by label
        let label = u8::from(i % 2 == 0);
        let k = i / 2;
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        let pixel = |rng: &mut ChaCha8Rng, x, y| {
            if label == 1 {
                positive(rng, x, y, k as f64 * 0.8)
            } else {
                negative(rng, x, y, k as f64 * 0.3)
            }
        };
        let name = format!("{}_{k}.png", if label == 1 { "pos" } else { "neg" });
        let path = dir.join(&name);
        match (label, k) {
            (1, 5) => {
                let img = GrayImage::from_fn(SIZE, SIZE, |x, y| image::Luma([pixel(&mut rng, x, y)[0]]));
                img.save(&path).unwrap();
            }
            (0, 5) => {
                let img: ImageBuffer<Rgba<u8>, Vec<u8>> = ImageBuffer::from_fn(SIZE, SIZE, |x, y| {
                    let [r, g, b] = pixel(&mut rng, x, y);
                    Rgba([r, g, b, 200 + (x % 56) as u8])
                });
                img.save(&path).unwrap();
            }
            _ => {
                let img: ImageBuffer<Rgb<u8>, Vec<u8>> =
                    ImageBuffer::from_fn(SIZE, SIZE, |x, y| Rgb(pixel(&mut rng, x, y)));
                img.save(&path).unwrap();
            }
        }
        manifest.push_str(&format!("{name},{label}\n"));
    }
    std::fs::write(dir.join("manifest.csv"), manifest).unwrap();
    println!("wrote fixture to {}", dir.display());
}

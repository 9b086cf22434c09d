//! Manifest loading, PNG decoding and grayscale conversion.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use image::DynamicImage;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::Label;

/// Number of grey levels in an 8-bit image.
pub const FULL_LEVELS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRecord {
    pub sample_id: usize,
    pub path: PathBuf,
    pub label: Label,
}

/// Ordered list of labelled image paths. `sample_id` always equals the
/// record's position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SampleManifest {
    records: Vec<ManifestRecord>,
}

impl SampleManifest {
    /// Builds a manifest from `(path, label)` pairs, assigning ids in order.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (PathBuf, Label)>,
    {
        let records = pairs
            .into_iter()
            .enumerate()
            .map(|(sample_id, (path, label))| ManifestRecord {
                sample_id,
                path,
                label,
            })
            .collect();
        SampleManifest { records }
    }

    pub fn records(&self) -> &[ManifestRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        self.records.iter().filter(|r| r.label == label).count()
    }

    /// Keeps exactly `per_class` records of each label, chosen with a seeded
    /// PRNG. Retained records keep their file order and are renumbered.
    pub fn balanced(&self, per_class: usize, seed: u64) -> Result<SampleManifest> {
        let mut by_label: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
        for (pos, r) in self.records.iter().enumerate() {
            by_label.entry(r.label).or_default().push(pos);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut keep = Vec::with_capacity(per_class * 2);
        // Negative first, then positive: fixed order keeps the RNG stream stable.
        for label in [Label::Negative, Label::Positive] {
            let positions = by_label.get(&label).map(Vec::as_slice).unwrap_or(&[]);
            if positions.len() < per_class {
                return Err(Error::InsufficientSamples {
                    label: label.as_u8(),
                    requested: per_class,
                    available: positions.len(),
                });
            }
            keep.extend(
                index::sample(&mut rng, positions.len(), per_class)
                    .into_iter()
                    .map(|i| positions[i]),
            );
        }
        keep.sort_unstable();
        Ok(SampleManifest::from_pairs(keep.into_iter().map(|pos| {
            let r = &self.records[pos];
            (r.path.clone(), r.label)
        })))
    }
}

/// Reads a `path,label` CSV. Relative image paths are resolved against the
/// manifest's directory.
pub fn load_manifest(
    path: &Path,
    per_class: Option<usize>,
    seed: Option<u64>,
) -> Result<SampleManifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    let manifest = parse_manifest(&text, base)?;
    match per_class {
        Some(k) => manifest.balanced(k, seed.unwrap_or(0)),
        None => Ok(manifest),
    }
}

/// Parses manifest text; `base` is prepended to relative paths.
pub fn parse_manifest(text: &str, base: &Path) -> Result<SampleManifest> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header = rdr.headers()?.clone();
    if header.len() != 2 || &header[0] != "path" || &header[1] != "label" {
        if header.is_empty() {
            return Err(Error::EmptyManifest);
        }
        return Err(Error::BadManifestHeader(
            header.iter().collect::<Vec<_>>().join(","),
        ));
    }

    let mut pairs = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() != 2 {
            return Err(Error::MalformedRow {
                line,
                reason: format!("expected 2 fields, found {}", rec.len()),
            });
        }
        if rec[0].is_empty() {
            return Err(Error::MalformedRow {
                line,
                reason: "empty path".into(),
            });
        }
        let label = rec[1]
            .parse::<u8>()
            .ok()
            .and_then(Label::from_u8)
            .ok_or_else(|| Error::InvalidLabel {
                line,
                value: rec[1].to_string(),
            })?;
        let p = PathBuf::from(&rec[0]);
        let p = if p.is_relative() { base.join(p) } else { p };
        pairs.push((p, label));
    }
    if pairs.is_empty() {
        return Err(Error::EmptyManifest);
    }
    Ok(SampleManifest::from_pairs(pairs))
}

/// An 8-bit RGB image stored as three planes in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    planes: [Vec<u8>; 3],
}

impl RgbImage {
    pub fn from_planes(width: usize, height: usize, planes: [Vec<u8>; 3]) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if planes.iter().any(|p| p.len() != width * height) {
            return Err(Error::InvalidImage(
                "channel planes do not match the image dimensions".into(),
            ));
        }
        Ok(RgbImage {
            width,
            height,
            planes,
        })
    }

    /// Builds an image from interleaved `[r, g, b]` pixels.
    pub fn from_pixels(width: usize, height: usize, pixels: &[[u8; 3]]) -> Result<Self> {
        let planes = [0, 1, 2].map(|c| pixels.iter().map(|p| p[c]).collect());
        Self::from_planes(width, height, planes)
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        Self::from_planes(width, height, rgb.map(|v| vec![v; width * height]))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn red(&self) -> &[u8] {
        &self.planes[0]
    }

    pub fn green(&self) -> &[u8] {
        &self.planes[1]
    }

    pub fn blue(&self) -> &[u8] {
        &self.planes[2]
    }

    pub fn planes(&self) -> &[Vec<u8>; 3] {
        &self.planes
    }
}

/// A single-channel image whose pixels lie in `0..levels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    levels: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, levels: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if !(2..=FULL_LEVELS).contains(&levels) {
            return Err(Error::LevelsOutOfRange(levels));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "expected {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        if let Some(&p) = pixels.iter().find(|&&p| usize::from(p) >= levels) {
            return Err(Error::InvalidImage(format!(
                "pixel value {p} exceeds {levels} levels"
            )));
        }
        Ok(GrayImage {
            width,
            height,
            levels,
            pixels,
        })
    }

    /// Builds an image from rows of equal length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R], levels: usize) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != width) {
            return Err(Error::InvalidImage("ragged rows".into()));
        }
        let pixels = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::new(width, height, levels, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }
}

/// Luma weighting `0.3 R + 0.59 G + 0.11 B`, rounded half up.
///
/// Evaluated in integer hundredths so the half-up rounding is exact.
#[inline]
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    let weighted = 30 * u32::from(r) + 59 * u32::from(g) + 11 * u32::from(b);
    ((weighted + 50) / 100).min(255) as u8
}

pub fn to_grayscale(img: &RgbImage) -> GrayImage {
    let pixels = img
        .red()
        .iter()
        .zip(img.green())
        .zip(img.blue())
        .map(|((&r, &g), &b)| luma(r, g, b))
        .collect();
    GrayImage {
        width: img.width,
        height: img.height,
        levels: FULL_LEVELS,
        pixels,
    }
}

/// Maps each pixel to `floor(pixel * levels / 256)`.
///
/// The input is assumed to span the full 8-bit range regardless of its own
/// `levels` field.
pub fn quantize(img: &GrayImage, levels: usize) -> Result<GrayImage> {
    if !(2..=FULL_LEVELS).contains(&levels) {
        return Err(Error::LevelsOutOfRange(levels));
    }
    let pixels = img
        .pixels
        .iter()
        .map(|&p| (usize::from(p) * levels / FULL_LEVELS) as u8)
        .collect();
    Ok(GrayImage {
        width: img.width,
        height: img.height,
        levels,
        pixels,
    })
}

/// Decodes a PNG file into RGB. Grayscale inputs are replicated across the
/// three channels; alpha is composited over black.
pub fn load_rgb(path: &Path) -> Result<RgbImage> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let img = image::load_from_memory_with_format(&bytes, image::ImageFormat::Png).map_err(
        |source| Error::Decode {
            path: path.to_path_buf(),
            source,
        },
    )?;
    dynamic_to_rgb(img, path)
}

fn over_black(c: u8, a: u8) -> u8 {
    ((u32::from(c) * u32::from(a) + 127) / 255) as u8
}

fn dynamic_to_rgb(img: DynamicImage, path: &Path) -> Result<RgbImage> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let pixels: Vec<[u8; 3]> = match img {
        DynamicImage::ImageRgb8(buf) => buf.pixels().map(|p| p.0).collect(),
        DynamicImage::ImageRgba8(buf) => buf
            .pixels()
            .map(|p| {
                let [r, g, b, a] = p.0;
                [over_black(r, a), over_black(g, a), over_black(b, a)]
            })
            .collect(),
        DynamicImage::ImageLuma8(buf) => buf.pixels().map(|p| [p.0[0]; 3]).collect(),
        DynamicImage::ImageLumaA8(buf) => buf
            .pixels()
            .map(|p| [over_black(p.0[0], p.0[1]); 3])
            .collect(),
        other => {
            return Err(Error::UnsupportedPixelFormat {
                path: path.to_path_buf(),
                format: format!("{:?}", other.color()),
            })
        }
    };
    RgbImage::from_pixels(w, h, &pixels)
}

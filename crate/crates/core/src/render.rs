//! Grayscale rasterization of adjacency heatmaps and histogram plots.

use std::io::Write;
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::{ExtendedColorType, ImageEncoder};
use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::histfeat::{ChannelHistogram, BINS};

pub const HISTOGRAM_WIDTH: usize = 512;
pub const HISTOGRAM_HEIGHT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Png,
    /// Binary portable graymap (P5).
    Pgm,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Png => "png",
            OutputFormat::Pgm => "pgm",
        }
    }

    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "png" => Some(OutputFormat::Png),
            "pgm" => Some(OutputFormat::Pgm),
            _ => None,
        }
    }
}

/// An 8-bit single-channel raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Raster {
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn transpose(&self) -> Raster {
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for x in 0..self.width {
            for y in 0..self.height {
                pixels.push(self.get(x, y));
            }
        }
        Raster {
            width: self.height,
            height: self.width,
            pixels,
        }
    }

    pub fn encode(&self, format: OutputFormat) -> Result<Vec<u8>> {
        match format {
            OutputFormat::Pgm => {
                let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
                out.extend_from_slice(&self.pixels);
                Ok(out)
            }
            OutputFormat::Png => {
                let mut out = Vec::new();
                PngEncoder::new(&mut out)
                    .write_image(
                        &self.pixels,
                        self.width as u32,
                        self.height as u32,
                        ExtendedColorType::L8,
                    )
                    .map_err(|source| Error::Encode {
                        path: Default::default(),
                        source,
                    })?;
                Ok(out)
            }
        }
    }

    /// Encodes and writes the raster, returning the bytes written.
    pub fn write(&self, path: &Path, format: OutputFormat) -> Result<Vec<u8>> {
        let bytes = self.encode(format).map_err(|e| match e {
            Error::Encode { source, .. } => Error::Encode {
                path: path.to_path_buf(),
                source,
            },
            other => other,
        })?;
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(&bytes).map_err(|e| Error::io(path, e))?;
        Ok(bytes)
    }
}

/// Intensity mapping for heatmaps. `None` bounds default to the matrix
/// minimum and maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapOptions {
    pub vmin: Option<f64>,
    pub vmax: Option<f64>,
    pub invert: bool,
    /// Integer upscaling factor; each cell becomes `scale × scale` pixels.
    pub scale: usize,
}

impl Default for HeatmapOptions {
    fn default() -> Self {
        HeatmapOptions {
            vmin: None,
            vmax: None,
            invert: false,
            scale: 1,
        }
    }
}

/// Maps `v` linearly from `[vmin, vmax]` onto `0..=255`. A degenerate range
/// maps everything to 0.
#[inline]
pub fn intensity(v: f64, vmin: f64, vmax: f64) -> u8 {
    if vmax <= vmin {
        return 0;
    }
    (255.0 * (v - vmin) / (vmax - vmin)).round().clamp(0.0, 255.0) as u8
}

pub fn heatmap_raster(m: ArrayView2<'_, f64>, opts: &HeatmapOptions) -> Result<Raster> {
    let (rows, cols) = m.dim();
    if rows == 0 || rows != cols {
        return Err(Error::BadMatrixShape { rows, cols });
    }
    if let Some(((row, col), _)) = m.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFiniteMatrix { row, col });
    }
    let vmin = opts
        .vmin
        .unwrap_or_else(|| m.iter().copied().fold(f64::INFINITY, f64::min));
    let vmax = opts
        .vmax
        .unwrap_or_else(|| m.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    if vmin.is_nan() || vmax.is_nan() || vmin > vmax {
        return Err(Error::BadRange { vmin, vmax });
    }

    let scale = opts.scale.max(1);
    let size = rows * scale;
    let mut pixels = vec![0u8; size * size];
    for ((r, c), &v) in m.indexed_iter() {
        let mut p = intensity(v, vmin, vmax);
        if opts.invert {
            p = 255 - p;
        }
        for y in r * scale..(r + 1) * scale {
            pixels[y * size + c * scale..y * size + (c + 1) * scale].fill(p);
        }
    }
    Ok(Raster {
        width: size,
        height: size,
        pixels,
    })
}

/// Renders `m` to `out`; the format follows the file extension (PNG unless
/// it is `.pgm`). Returns the encoded bytes.
pub fn render_heatmap(m: ArrayView2<'_, f64>, out: &Path, opts: &HeatmapOptions) -> Result<Vec<u8>> {
    let format = OutputFormat::from_path(out).unwrap_or_default();
    heatmap_raster(m, opts)?.write(out, format)
}

/// Bar height in pixels for a bin with `count`, relative to the tallest bin.
pub fn bar_height(count: u64, max_count: u64) -> usize {
    if max_count == 0 {
        return 0;
    }
    ((count as f64 / max_count as f64) * HISTOGRAM_HEIGHT as f64).round() as usize
}

/// White bars on black, two pixels per bin, bars growing from the bottom.
pub fn histogram_raster(h: &ChannelHistogram) -> Raster {
    let bar_width = HISTOGRAM_WIDTH / BINS;
    let max = h.max_count();
    let mut pixels = vec![0u8; HISTOGRAM_WIDTH * HISTOGRAM_HEIGHT];
    for (bin, &count) in h.bins.iter().enumerate() {
        let height = bar_height(count, max);
        for y in HISTOGRAM_HEIGHT - height..HISTOGRAM_HEIGHT {
            let row = y * HISTOGRAM_WIDTH;
            pixels[row + bin * bar_width..row + (bin + 1) * bar_width].fill(255);
        }
    }
    Raster {
        width: HISTOGRAM_WIDTH,
        height: HISTOGRAM_HEIGHT,
        pixels,
    }
}

pub fn render_histogram(h: &ChannelHistogram, out: &Path) -> Result<Vec<u8>> {
    let format = OutputFormat::from_path(out).unwrap_or_default();
    histogram_raster(h).write(out, format)
}

//! Per-channel intensity histograms and their moment statistics.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{to_grayscale, RgbImage};
use crate::types::{FeatureVector, Label};

pub const BINS: usize = 256;

/// Names of the per-channel statistics, in vector order.
pub const STAT_NAMES: [&str; 5] = ["median", "mean", "std", "kurtosis", "skew"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    R,
    G,
    B,
    Gray,
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::R => "R",
            Channel::G => "G",
            Channel::B => "B",
            Channel::Gray => "Gray",
        })
    }
}

/// Which image representation the histogram features are computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HistSource {
    #[default]
    Rgb,
    Gray,
}

impl HistSource {
    pub fn channels(self) -> &'static [Channel] {
        match self {
            HistSource::Rgb => &[Channel::R, Channel::G, Channel::B],
            HistSource::Gray => &[Channel::Gray],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelHistogram {
    pub channel: Channel,
    pub bins: [u64; BINS],
    pub pixel_count: u64,
}

impl ChannelHistogram {
    pub fn max_count(&self) -> u64 {
        self.bins.iter().copied().max().unwrap_or(0)
    }

    /// Bin counts divided by the pixel count.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.pixel_count.max(1) as f64;
        self.bins.iter().map(|&c| c as f64 / n).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistStats {
    pub median: f64,
    pub mean: f64,
    pub std: f64,
    /// Fisher (excess) kurtosis.
    pub kurtosis: f64,
    pub skew: f64,
}

impl HistStats {
    pub fn to_array(self) -> [f64; 5] {
        [self.median, self.mean, self.std, self.kurtosis, self.skew]
    }
}

pub fn compute_histogram(plane: &[u8], channel: Channel) -> ChannelHistogram {
    let mut bins = [0u64; BINS];
    for &v in plane {
        bins[usize::from(v)] += 1;
    }
    ChannelHistogram {
        channel,
        bins,
        pixel_count: plane.len() as u64,
    }
}

/// Moments of the pixel-intensity distribution described by `h`.
///
/// Population standard deviation, moment skewness and excess kurtosis; the
/// median is the lower median. A zero-variance distribution reports zero
/// skew and kurtosis.
pub fn histogram_stats(h: &ChannelHistogram) -> Result<HistStats> {
    if h.pixel_count == 0 {
        return Err(Error::EmptyHistogram);
    }
    let n = h.pixel_count as f64;
    let occupied = || {
        h.bins
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(v, &c)| (v as f64, c as f64))
    };

    let mean = occupied().map(|(v, c)| v * c).sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for (v, c) in occupied() {
        let d = v - mean;
        let d2 = d * d;
        m2 += c * d2;
        m3 += c * d2 * d;
        m4 += c * d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    let std = m2.sqrt();
    let (skew, kurtosis) = if m2 > 0.0 {
        (m3 / (m2 * std), m4 / (m2 * m2) - 3.0)
    } else {
        (0.0, 0.0)
    };

    let mut cumulative = 0u64;
    let mut median = 0.0;
    for (v, &c) in h.bins.iter().enumerate() {
        cumulative += c;
        if 2 * cumulative >= h.pixel_count {
            median = v as f64;
            break;
        }
    }

    Ok(HistStats {
        median,
        mean,
        std,
        kurtosis,
        skew,
    })
}

/// Histograms of every channel of `source` for one image.
pub fn channel_histograms(img: &RgbImage, source: HistSource) -> Vec<ChannelHistogram> {
    match source {
        HistSource::Rgb => [Channel::R, Channel::G, Channel::B]
            .iter()
            .zip(img.planes())
            .map(|(&ch, plane)| compute_histogram(plane, ch))
            .collect(),
        HistSource::Gray => vec![compute_histogram(to_grayscale(img).pixels(), Channel::Gray)],
    }
}

/// Column names for a histogram-statistics vector, e.g. `R_median`.
pub fn feature_names(source: HistSource) -> Vec<String> {
    source
        .channels()
        .iter()
        .flat_map(|ch| STAT_NAMES.iter().map(move |s| format!("{ch}_{s}")))
        .collect()
}

pub fn hist_features(img: &RgbImage, source: HistSource) -> Vec<f64> {
    channel_histograms(img, source)
        .iter()
        .flat_map(|h| {
            histogram_stats(h)
                .expect("image planes are never empty")
                .to_array()
        })
        .collect()
}

/// Statistics vector `[median, mean, std, kurtosis, skew]` per R, G, B channel.
pub fn hist_feature_vector(img: &RgbImage, sample_id: usize, label: Label) -> FeatureVector {
    FeatureVector::new(sample_id, label, hist_features(img, HistSource::Rgb))
}

//! Grey-level co-occurrence matrices and the texture statistics derived from
//! them.
//!
//! Rows grow downward. The displacement for distance `d` is
//!
//! | angle | (Δrow, Δcol) |
//! |-------|--------------|
//! | 0°    | (0, +d)      |
//! | 45°   | (−d, +d)     |
//! | 90°   | (−d, 0)      |
//! | 135°  | (−d, −d)     |

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::GrayImage;
use crate::types::{FeatureVector, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Angle {
    Deg0,
    Deg45,
    Deg90,
    Deg135,
}

impl Angle {
    pub const ALL: [Angle; 4] = [Angle::Deg0, Angle::Deg45, Angle::Deg90, Angle::Deg135];

    pub fn degrees(self) -> u32 {
        match self {
            Angle::Deg0 => 0,
            Angle::Deg45 => 45,
            Angle::Deg90 => 90,
            Angle::Deg135 => 135,
        }
    }

    /// Unit `(Δrow, Δcol)` step.
    pub fn unit_step(self) -> (isize, isize) {
        match self {
            Angle::Deg0 => (0, 1),
            Angle::Deg45 => (-1, 1),
            Angle::Deg90 => (-1, 0),
            Angle::Deg135 => (-1, -1),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", self.degrees())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GlcmOffset {
    distance: usize,
    angle: Angle,
}

impl GlcmOffset {
    pub fn new(distance: usize, angle: Angle) -> Result<Self> {
        if distance == 0 {
            return Err(Error::ZeroDistance);
        }
        Ok(GlcmOffset { distance, angle })
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn angle(&self) -> Angle {
        self.angle
    }

    pub fn displacement(&self) -> (isize, isize) {
        let (dr, dc) = self.angle.unit_step();
        let d = self.distance as isize;
        (dr * d, dc * d)
    }
}

/// Co-occurrence matrix for a single offset, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Glcm {
    levels: usize,
    offset: GlcmOffset,
    symmetric: bool,
    normalized: bool,
    counts: Vec<u64>,
    total: u64,
    p: Vec<f64>,
}

impl Glcm {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn offset(&self) -> GlcmOffset {
        self.offset
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Pair counts (already symmetrized when the matrix is symmetric).
    pub fn raw_counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.levels + j]
    }

    /// Matrix entries: probabilities when normalized, otherwise counts.
    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.levels + j]
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

pub fn compute_glcm(
    img: &GrayImage,
    offset: GlcmOffset,
    symmetric: bool,
    normalize: bool,
) -> Result<Glcm> {
    let levels = img.levels();
    let (h, w) = (img.height() as isize, img.width() as isize);
    let (dr, dc) = offset.displacement();

    // Range of source coordinates whose displaced partner stays in bounds.
    let rows = dr.min(0).unsigned_abs() as isize..h - dr.max(0);
    let cols = dc.min(0).unsigned_abs() as isize..w - dc.max(0);
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::NoValidPixelPairs {
            distance: offset.distance(),
            angle: offset.angle().to_string(),
        });
    }

    let mut counts = vec![0u64; levels * levels];
    let px = img.pixels();
    for r in rows {
        let src = (r * w) as usize;
        let dst = ((r + dr) * w) as usize;
        for c in cols.clone() {
            let a = usize::from(px[src + c as usize]);
            let b = usize::from(px[(dst as isize + c + dc) as usize]);
            counts[a * levels + b] += 1;
        }
    }

    if symmetric {
        for i in 0..levels {
            for j in i + 1..levels {
                let s = counts[i * levels + j] + counts[j * levels + i];
                counts[i * levels + j] = s;
                counts[j * levels + i] = s;
            }
            counts[i * levels + i] *= 2;
        }
    }

    let total: u64 = counts.iter().sum();
    let p = if normalize {
        let t = total as f64;
        counts.iter().map(|&c| c as f64 / t).collect()
    } else {
        counts.iter().map(|&c| c as f64).collect()
    };

    Ok(Glcm {
        levels,
        offset,
        symmetric,
        normalized: normalize,
        counts,
        total,
        p,
    })
}

/// Names of the six texture statistics, in vector order.
pub const FEATURE_NAMES: [&str; 6] = [
    "contrast",
    "dissimilarity",
    "homogeneity",
    "ASM",
    "energy",
    "correlation",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlcmFeatures {
    pub contrast: f64,
    pub dissimilarity: f64,
    pub homogeneity: f64,
    pub asm: f64,
    pub energy: f64,
    pub correlation: f64,
}

impl GlcmFeatures {
    pub fn to_array(self) -> [f64; 6] {
        [
            self.contrast,
            self.dissimilarity,
            self.homogeneity,
            self.asm,
            self.energy,
            self.correlation,
        ]
    }
}

/// Texture statistics of a normalized GLCM.
///
/// Marginal moments are taken from the integer row and column counts so a
/// degenerate marginal has exactly zero variance; in that case correlation
/// is reported as 1.
pub fn glcm_features(g: &Glcm) -> Result<GlcmFeatures> {
    if !g.normalized {
        return Err(Error::Unnormalized);
    }
    let n = g.levels;
    let total = g.total as f64;

    let row_counts: Vec<u64> = g.counts.chunks(n).map(|row| row.iter().sum()).collect();
    let mut col_counts = vec![0u64; n];
    for row in g.counts.chunks(n) {
        for (acc, &c) in col_counts.iter_mut().zip(row) {
            *acc += c;
        }
    }
    let moments = |marginal: &[u64]| {
        let mean = marginal
            .iter()
            .enumerate()
            .map(|(k, &c)| k as f64 * c as f64)
            .sum::<f64>()
            / total;
        let var = marginal
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let d = k as f64 - mean;
                d * d * c as f64
            })
            .sum::<f64>()
            / total;
        (mean, var)
    };
    let (mu_i, var_i) = moments(&row_counts);
    let (mu_j, var_j) = moments(&col_counts);

    let (mut contrast, mut dissimilarity, mut homogeneity, mut asm, mut cov) =
        (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let p = g.p[i * n + j];
            if p == 0.0 {
                continue;
            }
            let diff = i as f64 - j as f64;
            let d2 = diff * diff;
            contrast += p * d2;
            dissimilarity += p * diff.abs();
            homogeneity += p / (1.0 + d2);
            asm += p * p;
            cov += p * (i as f64 - mu_i) * (j as f64 - mu_j);
        }
    }

    let denom = var_i * var_j;
    let correlation = if denom > 0.0 { cov / denom.sqrt() } else { 1.0 };

    Ok(GlcmFeatures {
        contrast,
        dissimilarity,
        homogeneity,
        asm,
        energy: asm.sqrt(),
        correlation,
    })
}

/// Offset distance and symmetry used when building feature vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlcmParams {
    pub distance: usize,
    pub symmetric: bool,
}

impl Default for GlcmParams {
    fn default() -> Self {
        GlcmParams {
            distance: 1,
            symmetric: true,
        }
    }
}

/// Column names `contrast_0 … correlation_135`, feature-major.
pub fn feature_names() -> Vec<String> {
    FEATURE_NAMES
        .iter()
        .flat_map(|f| Angle::ALL.iter().map(move |a| format!("{f}_{}", a.degrees())))
        .collect()
}

/// The six statistics at all four angles, feature-major and angle-minor.
pub fn glcm_features_all_angles(img: &GrayImage, params: GlcmParams) -> Result<Vec<f64>> {
    let per_angle = Angle::ALL
        .iter()
        .map(|&angle| {
            let offset = GlcmOffset::new(params.distance, angle)?;
            glcm_features(&compute_glcm(img, offset, params.symmetric, true)?)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut values = Vec::with_capacity(FEATURE_NAMES.len() * Angle::ALL.len());
    for k in 0..FEATURE_NAMES.len() {
        values.extend(per_angle.iter().map(|f| f.to_array()[k]));
    }
    Ok(values)
}

pub fn glcm_feature_vector(
    img: &GrayImage,
    params: GlcmParams,
    sample_id: usize,
    label: Label,
) -> Result<FeatureVector> {
    Ok(FeatureVector::new(
        sample_id,
        label,
        glcm_features_all_angles(img, params)?,
    ))
}

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to decode image {path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("failed to encode image {path}: {source}")]
    Encode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("unsupported pixel format in {path}: {format}")]
    UnsupportedPixelFormat { path: PathBuf, format: String },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("empty manifest")]
    EmptyManifest,

    #[error("manifest header must be `path,label`, found `{0}`")]
    BadManifestHeader(String),

    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },

    #[error("invalid label `{value}` at line {line}; expected 0 or 1")]
    InvalidLabel { line: usize, value: String },

    #[error("requested {requested} samples per class but label {label} has only {available}")]
    InsufficientSamples {
        label: u8,
        requested: usize,
        available: usize,
    },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("levels must be in 2..=256, got {0}")]
    LevelsOutOfRange(usize),

    #[error("glcm distance must be at least 1")]
    ZeroDistance,

    #[error("no valid pixel pairs for offset {distance}px at {angle}")]
    NoValidPixelPairs { distance: usize, angle: String },

    #[error("glcm is not normalized")]
    Unnormalized,

    #[error("empty histogram")]
    EmptyHistogram,

    #[error("feature vectors carry mixed labels")]
    MixedLabels,

    #[error("feature vectors have mixed dimensions ({expected} vs {found})")]
    MixedDimensions { expected: usize, found: usize },

    #[error("a graph needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("non-finite value {value} at sample {sample_id}, index {index}")]
    NonFinite {
        sample_id: usize,
        index: usize,
        value: f64,
    },

    #[error("graph has already been filtered")]
    AlreadyFiltered,

    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    BadMatrixShape { rows: usize, cols: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFiniteMatrix { row: usize, col: usize },

    #[error("invalid heatmap range: vmin {vmin} > vmax {vmax}")]
    BadRange { vmin: f64, vmax: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("sample {sample_id}: {source}")]
    Sample {
        sample_id: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn for_sample(self, sample_id: usize) -> Self {
        Error::Sample {
            sample_id,
            source: Box::new(self),
        }
    }

    /// True for errors caused by an invalid configuration rather than bad data.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::LevelsOutOfRange(_) | Error::ZeroDistance
        )
    }
}

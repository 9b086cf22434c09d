//! Texture features and per-class distance networks for labelled image sets.
//!
//! The pipeline converts each image to frequency-histogram statistics and
//! grey-level co-occurrence (GLCM) texture features, builds one complete
//! Euclidean-distance graph per class, sparsifies it at the median edge
//! weight and renders the adjacency matrices as grayscale heatmaps.

pub mod error;
pub mod export;
pub mod glcm;
pub mod histfeat;
pub mod ingest;
pub mod netbuild;
pub mod pipeline;
pub mod render;
mod types;

pub use error::{Error, Result};
pub use glcm::{
    compute_glcm, glcm_feature_vector, glcm_features, Angle, Glcm, GlcmFeatures, GlcmOffset,
    GlcmParams,
};
pub use histfeat::{
    compute_histogram, hist_feature_vector, histogram_stats, Channel, ChannelHistogram,
    HistSource, HistStats,
};
pub use ingest::{load_manifest, quantize, to_grayscale, GrayImage, RgbImage, SampleManifest};
pub use netbuild::{
    adjacency_matrix, median_filter, pairwise_distances, DistanceGraph, FilterMode, Scaling,
};
pub use pipeline::{run_pipeline, FeatureSet, PipelineConfig, RunManifest};
pub use render::{render_heatmap, render_histogram, HeatmapOptions, OutputFormat};
pub use types::{FeatureVector, Label};

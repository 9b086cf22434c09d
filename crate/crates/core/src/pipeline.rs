//! End-to-end run: manifest → features → per-class networks → artifacts.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::export::{edge_list_csv, features_csv};
use crate::glcm::{self, GlcmParams};
use crate::histfeat::{self, channel_histograms, HistSource};
use crate::ingest::{load_manifest, load_rgb, quantize, to_grayscale, RgbImage, SampleManifest};
use crate::netbuild::{adjacency_matrix, class_graphs, median_filter, FilterMode, Scaling};
use crate::render::{heatmap_raster, histogram_raster, HeatmapOptions, OutputFormat};
use crate::types::FeatureVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureSet {
    Histogram,
    Glcm,
    #[default]
    Both,
}

impl FeatureSet {
    pub fn kinds(self) -> &'static [FeatureKind] {
        match self {
            FeatureSet::Histogram => &[FeatureKind::Histogram],
            FeatureSet::Glcm => &[FeatureKind::Glcm],
            FeatureSet::Both => &[FeatureKind::Histogram, FeatureKind::Glcm],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Histogram,
    Glcm,
}

impl FeatureKind {
    pub fn name(self) -> &'static str {
        match self {
            FeatureKind::Histogram => "histogram",
            FeatureKind::Glcm => "glcm",
        }
    }
}

/// Points used for histogram-network distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceSpace {
    /// The five statistics per channel.
    #[default]
    Stats,
    /// The 256 relative bin frequencies per channel.
    Bins,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub manifest: PathBuf,
    pub per_class: usize,
    pub seed: u64,
    pub feature_set: FeatureSet,
    pub glcm_distance: usize,
    pub levels: usize,
    pub symmetric: bool,
    pub scaling: Scaling,
    pub filter_mode: FilterMode,
    pub hist_source: HistSource,
    pub hist_distance_space: DistanceSpace,
    pub image_format: OutputFormat,
    pub heatmap_scale: usize,
    pub out_dir: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            manifest: PathBuf::from("manifest.csv"),
            per_class: 50,
            seed: 0,
            feature_set: FeatureSet::Both,
            glcm_distance: 1,
            levels: 256,
            symmetric: true,
            scaling: Scaling::None,
            filter_mode: FilterMode::KeepBelow,
            hist_source: HistSource::Rgb,
            hist_distance_space: DistanceSpace::Stats,
            image_format: OutputFormat::Png,
            heatmap_scale: 1,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.per_class < 2 {
            return Err(Error::Config(format!(
                "per_class must be at least 2 (a graph needs two nodes), got {}",
                self.per_class
            )));
        }
        if !(2..=256).contains(&self.levels) {
            return Err(Error::Config(format!(
                "levels must be in 2..=256, got {}",
                self.levels
            )));
        }
        if self.glcm_distance == 0 {
            return Err(Error::Config("glcm_distance must be at least 1".into()));
        }
        if self.heatmap_scale == 0 {
            return Err(Error::Config("heatmap_scale must be at least 1".into()));
        }
        Ok(())
    }

    pub fn glcm_params(&self) -> GlcmParams {
        GlcmParams {
            distance: self.glcm_distance,
            symmetric: self.symmetric,
        }
    }
}

/// Features of one kind for every sample.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub kind: FeatureKind,
    pub names: Vec<String>,
    /// Vectors written to the feature CSV.
    pub vectors: Vec<FeatureVector>,
    /// Points the networks are built from; usually equal to `vectors`.
    pub points: Vec<FeatureVector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSummary {
    pub feature_set: FeatureKind,
    pub label: u8,
    pub nodes: usize,
    pub edges: usize,
    pub kept_edges: usize,
    pub median_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleEntry {
    pub sample_id: usize,
    pub path: PathBuf,
    pub label: u8,
}

/// Contents of `run.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: PipelineConfig,
    pub samples: Vec<SampleEntry>,
    pub networks: Vec<NetworkSummary>,
    /// Every emitted file except `run.json`, paths relative to `out_dir`.
    pub artifacts: Vec<Artifact>,
}

/// Writes files under one directory and remembers them so a failed run can
/// remove what it produced.
pub struct ArtifactWriter {
    root: PathBuf,
    written: Vec<Artifact>,
    created_dirs: Vec<PathBuf>,
}

impl ArtifactWriter {
    pub fn new(root: &Path) -> Result<Self> {
        let mut w = ArtifactWriter {
            root: root.to_path_buf(),
            written: Vec::new(),
            created_dirs: Vec::new(),
        };
        w.ensure_dir(root)?;
        Ok(w)
    }

    fn ensure_dir(&mut self, dir: &Path) -> Result<()> {
        if !dir.exists() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            self.created_dirs.push(dir.to_path_buf());
        }
        Ok(())
    }

    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            self.ensure_dir(parent)?;
        }
        // record before writing so a partial file is also cleaned up
        self.written.push(Artifact {
            path: rel.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
            bytes: bytes.len(),
        });
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))
    }

    pub fn artifacts(&self) -> &[Artifact] {
        &self.written
    }

    pub fn into_artifacts(self) -> Vec<Artifact> {
        self.written
    }

    /// Removes every file written so far and any directory this writer made.
    pub fn rollback(self) {
        for a in &self.written {
            let _ = std::fs::remove_file(self.root.join(&a.path));
        }
        for dir in self.created_dirs.iter().rev() {
            let _ = std::fs::remove_dir(dir);
        }
    }
}

pub fn load_images(manifest: &SampleManifest) -> Result<Vec<RgbImage>> {
    manifest
        .records()
        .par_iter()
        .map(|r| load_rgb(&r.path).map_err(|e| e.for_sample(r.sample_id)))
        .collect()
}

pub fn histogram_table(
    manifest: &SampleManifest,
    images: &[RgbImage],
    source: HistSource,
    space: DistanceSpace,
) -> FeatureTable {
    let rows: Vec<(FeatureVector, FeatureVector)> = manifest
        .records()
        .par_iter()
        .zip(images)
        .map(|(r, img)| {
            let stats = histfeat::hist_features(img, source);
            let points = match space {
                DistanceSpace::Stats => stats.clone(),
                DistanceSpace::Bins => channel_histograms(img, source)
                    .iter()
                    .flat_map(|h| h.frequencies())
                    .collect(),
            };
            (
                FeatureVector::new(r.sample_id, r.label, stats),
                FeatureVector::new(r.sample_id, r.label, points),
            )
        })
        .collect();
    let (vectors, points) = rows.into_iter().unzip();
    FeatureTable {
        kind: FeatureKind::Histogram,
        names: histfeat::feature_names(source),
        vectors,
        points,
    }
}

pub fn glcm_table(
    manifest: &SampleManifest,
    images: &[RgbImage],
    levels: usize,
    params: GlcmParams,
) -> Result<FeatureTable> {
    let vectors: Vec<FeatureVector> = manifest
        .records()
        .par_iter()
        .zip(images)
        .map(|(r, img)| {
            let gray = to_grayscale(img);
            let gray = if levels == 256 { gray } else { quantize(&gray, levels)? };
            glcm::glcm_feature_vector(&gray, params, r.sample_id, r.label)
                .map_err(|e| e.for_sample(r.sample_id))
        })
        .collect::<Result<_>>()?;
    Ok(FeatureTable {
        kind: FeatureKind::Glcm,
        names: glcm::feature_names(),
        points: vectors.clone(),
        vectors,
    })
}

/// Computes every feature table requested by `cfg`.
pub fn extract_features(
    cfg: &PipelineConfig,
    manifest: &SampleManifest,
    images: &[RgbImage],
) -> Result<Vec<FeatureTable>> {
    cfg.feature_set
        .kinds()
        .iter()
        .map(|kind| match kind {
            FeatureKind::Histogram => Ok(histogram_table(
                manifest,
                images,
                cfg.hist_source,
                cfg.hist_distance_space,
            )),
            FeatureKind::Glcm => glcm_table(manifest, images, cfg.levels, cfg.glcm_params()),
        })
        .collect()
}

pub fn features_file_name(kind: FeatureKind) -> String {
    format!("features_{}.csv", kind.name())
}

/// Builds per-class networks for one table and writes edge lists, plus
/// heatmaps when `heatmaps` is set, for both the complete and the
/// median-filtered graph.
pub fn emit_networks(
    kind: FeatureKind,
    points: &[FeatureVector],
    scaling: Scaling,
    filter_mode: FilterMode,
    heatmaps: Option<(OutputFormat, &HeatmapOptions)>,
    writer: &mut ArtifactWriter,
) -> Result<Vec<NetworkSummary>> {
    let mut summaries = Vec::new();
    for graph in class_graphs(points, scaling)? {
        let filtered = median_filter(&graph, filter_mode)?;
        let stem = format!("{}_{}", kind.name(), graph.label().slug());
        writer.write(&format!("edges_{stem}.csv"), &edge_list_csv(&graph)?)?;
        writer.write(&format!("edges_{stem}_filtered.csv"), &edge_list_csv(&filtered)?)?;
        if let Some((format, opts)) = heatmaps {
            for (suffix, g, masked) in [("", &graph, false), ("_filtered", &filtered, true)] {
                let raster = heatmap_raster(adjacency_matrix(g, masked).view(), opts)?;
                writer.write(
                    &format!("heatmap_{stem}{suffix}.{}", format.extension()),
                    &raster.encode(format)?,
                )?;
            }
        }
        summaries.push(NetworkSummary {
            feature_set: kind,
            label: graph.label().as_u8(),
            nodes: graph.n(),
            edges: graph.edge_count(),
            kept_edges: filtered.kept_edge_count(),
            median_distance: graph.median_distance(),
        });
    }
    Ok(summaries)
}

fn emit_histogram_plots(
    manifest: &SampleManifest,
    images: &[RgbImage],
    source: HistSource,
    format: OutputFormat,
    writer: &mut ArtifactWriter,
) -> Result<()> {
    let plots: Vec<(String, Vec<u8>)> = manifest
        .records()
        .par_iter()
        .zip(images)
        .map(|(r, img)| {
            channel_histograms(img, source)
                .iter()
                .map(|h| {
                    let name = format!(
                        "histograms/sample_{:04}_{}.{}",
                        r.sample_id,
                        h.channel,
                        format.extension()
                    );
                    Ok((name, histogram_raster(h).encode(format)?))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for (name, bytes) in plots {
        writer.write(&name, &bytes)?;
    }
    Ok(())
}

fn run_inner(cfg: &PipelineConfig, writer: &mut ArtifactWriter) -> Result<RunManifest> {
    let manifest = load_manifest(&cfg.manifest, Some(cfg.per_class), Some(cfg.seed))?;
    let images = load_images(&manifest)?;
    let tables = extract_features(cfg, &manifest, &images)?;
    let heatmap = HeatmapOptions {
        scale: cfg.heatmap_scale,
        ..Default::default()
    };

    let mut networks = Vec::new();
    for table in &tables {
        writer.write(
            &features_file_name(table.kind),
            &features_csv(&table.names, &table.vectors)?,
        )?;
        networks.extend(emit_networks(
            table.kind,
            &table.points,
            cfg.scaling,
            cfg.filter_mode,
            Some((cfg.image_format, &heatmap)),
            writer,
        )?);
        if table.kind == FeatureKind::Histogram {
            emit_histogram_plots(&manifest, &images, cfg.hist_source, cfg.image_format, writer)?;
        }
    }

    Ok(RunManifest {
        config: cfg.clone(),
        samples: manifest
            .records()
            .iter()
            .map(|r| SampleEntry {
                sample_id: r.sample_id,
                path: r.path.clone(),
                label: r.label.as_u8(),
            })
            .collect(),
        networks,
        artifacts: writer.artifacts().to_vec(),
    })
}

/// Runs the whole pipeline and writes `run.json` into `cfg.out_dir`.
///
/// On failure every file written by this run is removed.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunManifest> {
    cfg.validate()?;
    let mut writer = ArtifactWriter::new(&cfg.out_dir)?;
    let result = run_inner(cfg, &mut writer).and_then(|run| {
        let mut json = serde_json::to_vec_pretty(&run)?;
        json.push(b'\n');
        writer.write("run.json", &json)?;
        Ok(run)
    });
    if result.is_err() {
        writer.rollback();
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let mut cfg = PipelineConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.per_class = 1;
        let err = cfg.validate().unwrap_err();
        assert!(err.is_config());
        cfg.per_class = 2;
        cfg.levels = 1;
        assert!(cfg.validate().is_err());
        cfg.levels = 16;
        cfg.glcm_distance = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_serde_uses_defaults() {
        let cfg: PipelineConfig =
            serde_json::from_str(r#"{"per_class": 6, "filter_mode": "keep_above"}"#).unwrap();
        assert_eq!(cfg.per_class, 6);
        assert_eq!(cfg.filter_mode, FilterMode::KeepAbove);
        assert_eq!(cfg.levels, 256);
        assert!(cfg.symmetric);
        assert!(serde_json::from_str::<PipelineConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn writer_rollback_removes_files() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().join("out");
        let mut w = ArtifactWriter::new(&root).unwrap();
        w.write("a.txt", b"a").unwrap();
        w.write("sub/b.txt", b"b").unwrap();
        assert!(root.join("sub/b.txt").exists());
        w.rollback();
        assert!(!root.exists());
    }

    #[test]
    fn missing_manifest_cleans_up() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = PipelineConfig {
            manifest: dir.path().join("nope.csv"),
            out_dir: dir.path().join("out"),
            ..Default::default()
        };
        assert!(matches!(run_pipeline(&cfg), Err(Error::Io { .. })));
        assert!(!cfg.out_dir.exists());
    }
}

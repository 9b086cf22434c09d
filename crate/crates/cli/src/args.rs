use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use texnet::pipeline::DistanceSpace;
use texnet::{FeatureSet, FilterMode, HistSource, OutputFormat, PipelineConfig, Scaling};

#[derive(Debug, Parser)]
#[command(name = "texnet", version, about = "Texture features and per-class distance networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract feature tables from a manifest.
    Features(PipelineArgs),
    /// Build per-class networks from a feature table and write edge lists.
    Network(NetworkArgs),
    /// Render a heatmap from an edge list, or histogram plots for an image.
    #[command(subcommand)]
    Render(RenderCommand),
    /// Run the full pipeline and write run.json.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FeatureSetArg {
    Histogram,
    Glcm,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScalingArg {
    None,
    Zscore,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FilterModeArg {
    KeepBelow,
    KeepAbove,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum HistSourceArg {
    Rgb,
    Gray,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DistanceSpaceArg {
    Stats,
    Bins,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Png,
    Pgm,
}

impl From<ScalingArg> for Scaling {
    fn from(a: ScalingArg) -> Self {
        match a {
            ScalingArg::None => Scaling::None,
            ScalingArg::Zscore => Scaling::Zscore,
        }
    }
}

impl From<FilterModeArg> for FilterMode {
    fn from(a: FilterModeArg) -> Self {
        match a {
            FilterModeArg::KeepBelow => FilterMode::KeepBelow,
            FilterModeArg::KeepAbove => FilterMode::KeepAbove,
        }
    }
}

impl From<FormatArg> for OutputFormat {
    fn from(a: FormatArg) -> Self {
        match a {
            FormatArg::Png => OutputFormat::Png,
            FormatArg::Pgm => OutputFormat::Pgm,
        }
    }
}

impl From<HistSourceArg> for HistSource {
    fn from(a: HistSourceArg) -> Self {
        match a {
            HistSourceArg::Rgb => HistSource::Rgb,
            HistSourceArg::Gray => HistSource::Gray,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// key = value config file; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub per_class: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub feature_set: Option<FeatureSetArg>,
    #[arg(long)]
    pub glcm_distance: Option<usize>,
    #[arg(long)]
    pub levels: Option<usize>,
    /// Count each pixel pair in one direction only.
    #[arg(long)]
    pub asymmetric: bool,
    #[arg(long, value_enum)]
    pub scaling: Option<ScalingArg>,
    #[arg(long, value_enum)]
    pub filter_mode: Option<FilterModeArg>,
    #[arg(long, value_enum)]
    pub hist_source: Option<HistSourceArg>,
    #[arg(long, value_enum)]
    pub hist_distance_space: Option<DistanceSpaceArg>,
    #[arg(long, value_enum)]
    pub image_format: Option<FormatArg>,
    #[arg(long)]
    pub heatmap_scale: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

impl PipelineArgs {
    /// Applies command-line overrides on top of `cfg`.
    pub fn apply(&self, cfg: &mut PipelineConfig) {
        if let Some(v) = &self.manifest {
            cfg.manifest = v.clone();
        }
        if let Some(v) = self.per_class {
            cfg.per_class = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.feature_set {
            cfg.feature_set = match v {
                FeatureSetArg::Histogram => FeatureSet::Histogram,
                FeatureSetArg::Glcm => FeatureSet::Glcm,
                FeatureSetArg::Both => FeatureSet::Both,
            };
        }
        if let Some(v) = self.glcm_distance {
            cfg.glcm_distance = v;
        }
        if let Some(v) = self.levels {
            cfg.levels = v;
        }
        if self.asymmetric {
            cfg.symmetric = false;
        }
        if let Some(v) = self.scaling {
            cfg.scaling = v.into();
        }
        if let Some(v) = self.filter_mode {
            cfg.filter_mode = v.into();
        }
        if let Some(v) = self.hist_source {
            cfg.hist_source = v.into();
        }
        if let Some(v) = self.hist_distance_space {
            cfg.hist_distance_space = match v {
                DistanceSpaceArg::Stats => DistanceSpace::Stats,
                DistanceSpaceArg::Bins => DistanceSpace::Bins,
            };
        }
        if let Some(v) = self.image_format {
            cfg.image_format = v.into();
        }
        if let Some(v) = self.heatmap_scale {
            cfg.heatmap_scale = v;
        }
        if let Some(v) = &self.out_dir {
            cfg.out_dir = v.clone();
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct NetworkArgs {
    /// Feature table written by `features` or `pipeline`.
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long, value_enum, default_value = "none")]
    pub scaling: ScalingArg,
    #[arg(long, value_enum, default_value = "keep-below")]
    pub filter_mode: FilterModeArg,
    /// Also render adjacency heatmaps in this format.
    #[arg(long, value_enum)]
    pub heatmaps: Option<FormatArg>,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum RenderCommand {
    /// Adjacency heatmap from an edge list; format follows the output extension.
    Heatmap {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Zero out edges marked as removed.
        #[arg(long)]
        filtered: bool,
        #[arg(long, default_value_t = 1)]
        scale: usize,
        #[arg(long)]
        vmin: Option<f64>,
        #[arg(long)]
        vmax: Option<f64>,
        #[arg(long)]
        invert: bool,
    },
    /// Per-channel histogram plots for one PNG.
    Histogram {
        #[arg(long)]
        image: PathBuf,
        #[arg(long, value_enum, default_value = "rgb")]
        source: HistSourceArg,
        #[arg(long, value_enum, default_value = "png")]
        format: FormatArg,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
}

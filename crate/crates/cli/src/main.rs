mod args;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use texnet::export::{read_edge_list, read_features};
use texnet::histfeat::channel_histograms;
use texnet::ingest::load_rgb;
use texnet::pipeline::{
    emit_networks, extract_features, features_file_name, load_images, ArtifactWriter, FeatureKind,
};
use texnet::render::{histogram_raster, render_heatmap};
use texnet::{load_manifest, run_pipeline, HeatmapOptions, OutputFormat, PipelineConfig};

use args::{Cli, Command, NetworkArgs, PipelineArgs, RenderCommand};

const EXIT_CONFIG: u8 = 2;
const EXIT_DATA: u8 = 3;

enum Failure {
    Config(String),
    Data(texnet::Error),
}

impl From<texnet::Error> for Failure {
    fn from(e: texnet::Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Data(e)
        }
    }
}

fn load_config(args: &PipelineArgs) -> Result<PipelineConfig, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        None => PipelineConfig::default(),
    };
    args.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

fn features(args: &PipelineArgs) -> Result<(), Failure> {
    let cfg = load_config(args)?;
    let manifest = load_manifest(&cfg.manifest, Some(cfg.per_class), Some(cfg.seed))?;
    let images = load_images(&manifest)?;
    let tables = extract_features(&cfg, &manifest, &images)?;
    let mut writer = ArtifactWriter::new(&cfg.out_dir)?;
    for t in &tables {
        let bytes = texnet::export::features_csv(&t.names, &t.vectors)?;
        if let Err(e) = writer.write(&features_file_name(t.kind), &bytes) {
            writer.rollback();
            return Err(e.into());
        }
    }
    for a in writer.artifacts() {
        println!("{}  {}", a.sha256, cfg.out_dir.join(&a.path).display());
    }
    Ok(())
}

fn kind_from_path(path: &Path) -> FeatureKind {
    match path.file_stem().and_then(|s| s.to_str()) {
        Some(s) if s.contains("histogram") => FeatureKind::Histogram,
        _ => FeatureKind::Glcm,
    }
}

fn network(args: &NetworkArgs) -> Result<(), Failure> {
    let (_, vectors) = read_features(&args.features)?;
    let mut writer = ArtifactWriter::new(&args.out_dir)?;
    let opts = HeatmapOptions::default();
    let result = emit_networks(
        kind_from_path(&args.features),
        &vectors,
        args.scaling.into(),
        args.filter_mode.into(),
        args.heatmaps.map(|f| (OutputFormat::from(f), &opts)),
        &mut writer,
    );
    let summaries = match result {
        Ok(s) => s,
        Err(e) => {
            writer.rollback();
            return Err(e.into());
        }
    };
    for s in summaries {
        println!(
            "label {}: {} nodes, {} edges, {} kept, median distance {}",
            s.label, s.nodes, s.edges, s.kept_edges, s.median_distance
        );
    }
    Ok(())
}

fn render(cmd: &RenderCommand) -> Result<(), Failure> {
    match cmd {
        RenderCommand::Heatmap {
            edges,
            out,
            filtered,
            scale,
            vmin,
            vmax,
            invert,
        } => {
            if *scale == 0 {
                return Err(Failure::Config("--scale must be at least 1".into()));
            }
            let (_, m) = read_edge_list(edges, *filtered)?;
            let opts = HeatmapOptions {
                vmin: *vmin,
                vmax: *vmax,
                invert: *invert,
                scale: *scale,
            };
            render_heatmap(m.view(), out, &opts)?;
            println!("{}", out.display());
        }
        RenderCommand::Histogram {
            image,
            source,
            format,
            out_dir,
        } => {
            let img = load_rgb(image)?;
            let format = OutputFormat::from(*format);
            let stem = image.file_stem().and_then(|s| s.to_str()).unwrap_or("image");
            let mut writer = ArtifactWriter::new(out_dir)?;
            for h in channel_histograms(&img, (*source).into()) {
                let name = format!("{stem}_{}.{}", h.channel, format.extension());
                writer.write(&name, &histogram_raster(&h).encode(format)?)?;
                println!("{}", out_dir.join(name).display());
            }
        }
    }
    Ok(())
}

fn pipeline(args: &PipelineArgs) -> Result<(), Failure> {
    let cfg = load_config(args)?;
    let run = run_pipeline(&cfg)?;
    for n in &run.networks {
        println!(
            "{:>9} label {}: {} nodes, {} edges, {} kept",
            n.feature_set.name(),
            n.label,
            n.nodes,
            n.edges,
            n.kept_edges
        );
    }
    println!(
        "{} artifacts, manifest {}",
        run.artifacts.len(),
        cfg.out_dir.join("run.json").display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Features(a) => features(a),
        Command::Network(a) => network(a),
        Command::Render(c) => render(c),
        Command::Pipeline(a) => pipeline(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DATA)
        }
    }
}

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use cmsf_core::harness::directory_hash;
use cmsf_core::pipelines::{RunFrame, RunManifest};
use cmsf_core::{load_bundle, load_dataset, run_sequence, PipelineConfig};

use crate::output::{json_bytes, OutputBatch};
use crate::RunArgs;

pub const RUN_MANIFEST: &str = "run_manifest.json";

fn load_config(path: Option<&Path>) -> Result<PipelineConfig> {
    let cfg = match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
            PipelineConfig::from_json(&text).with_context(|| format!("config {}", p.display()))?
        }
        None => PipelineConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn cmd_run(args: &RunArgs) -> Result<()> {
    let cfg = load_config(args.config.as_deref())?;
    let backend = load_bundle(&args.bundle).with_context(|| format!("loading bundle {}", args.bundle.display()))?;
    let bundle_hash = directory_hash(&args.bundle)?;
    let index = load_dataset(&args.dataset, args.split)
        .with_context(|| format!("loading dataset {} split {}", args.dataset.display(), args.split))?;
    let frames: Vec<_> = index.frames().cloned().collect();
    log::info!(
        "{} on {} frames of {} ({})",
        args.variant.display_name(),
        frames.len(),
        args.split,
        index.videos.len()
    );

    let outputs = run_sequence(&frames, &cfg, &backend, args.variant)?;

    let mut batch = OutputBatch::default();
    let mut run_frames = Vec::with_capacity(outputs.len());
    for (frame, out) in frames.iter().zip(&outputs) {
        let stem = format!("masks/{}/{}", frame.video_id, frame.index);
        let png = format!("{stem}.png");
        let rle = format!("{stem}.rle.json");
        batch.add(&png, out.mask.to_png_bytes()?);
        batch.add(&rle, json_bytes(&out.mask)?);
        run_frames.push(RunFrame {
            frame_id: out.frame_id.clone(),
            foreground_pixels: out.mask.foreground_count(),
            trace: out.trace.clone(),
            mask_png: png,
            mask_rle: rle,
        });
    }
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        variant: args.variant,
        split: args.split.to_string(),
        bundle: args.bundle.display().to_string(),
        bundle_hash,
        dataset: args.dataset.display().to_string(),
        config: cfg,
        frames: run_frames,
    };
    batch.add(RUN_MANIFEST, json_bytes(&manifest)?);
    batch.write_under(&args.out)
}

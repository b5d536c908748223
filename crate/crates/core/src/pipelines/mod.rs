//! The three cross-modality filtering pipelines.
//!
//! Each maps one frame plus a backend to one binary mask. Every stage is a filter
//! (strictly-above threshold) followed at the end by a union, so raising any
//! threshold can only shrink the output foreground.

mod at_gdino_sam;
mod config;
mod owod_bind;
mod sam_bind;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::backend::Backend;
use crate::error::{CmsfError, Result};
use crate::frame::FramePair;
use crate::geometry::BinaryMask;

pub use at_gdino_sam::run_at_gdino_sam;
pub use config::{OwodMaskMode, PipelineConfig, Variant};
pub use owod_bind::run_owod_bind;
pub use sam_bind::{grid_points, run_sam_bind};

/// Item counts entering and leaving one pipeline stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCount {
    pub stage: String,
    pub input: usize,
    pub kept: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTrace {
    pub stages: Vec<StageCount>,
}

impl StageTrace {
    pub(crate) fn record(&mut self, stage: &str, input: usize, kept: usize) {
        debug_assert!(kept <= input, "stage {stage} kept {kept} of {input}");
        self.stages.push(StageCount {
            stage: stage.to_string(),
            input,
            kept,
        });
    }

    pub fn get(&self, stage: &str) -> Option<&StageCount> {
        self.stages.iter().find(|s| s.stage == stage)
    }

    /// `true` when no stage keeps more items than it received.
    pub fn is_consistent(&self) -> bool {
        self.stages.iter().all(|s| s.kept <= s.input)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameOutput {
    pub frame_id: String,
    pub mask: BinaryMask,
    pub trace: StageTrace,
}

/// Runs one variant on one frame.
pub fn run_frame<B: Backend + ?Sized>(
    variant: Variant,
    frame: &FramePair,
    cfg: &PipelineConfig,
    backend: &B,
) -> Result<FrameOutput> {
    match variant {
        Variant::AtGdinoSam => run_at_gdino_sam(frame, cfg, backend),
        Variant::OwodBind => run_owod_bind(frame, cfg, backend),
        Variant::SamBind => run_sam_bind(frame, cfg, backend),
    }
}

/// Runs `variant` over every frame, in parallel. Output order follows `frames`
/// and does not depend on scheduling; failures are collected with their frame ids.
pub fn run_sequence<B: Backend + Sync + ?Sized>(
    frames: &[FramePair],
    cfg: &PipelineConfig,
    backend: &B,
    variant: Variant,
) -> Result<Vec<FrameOutput>> {
    cfg.validate()?;
    let results: Vec<Result<FrameOutput>> = frames
        .par_iter()
        .map(|f| run_frame(variant, f, cfg, backend))
        .collect();
    let mut outputs = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (frame, r) in frames.iter().zip(results) {
        match r {
            Ok(o) => outputs.push(o),
            Err(e) => failures.push((frame.frame_id.clone(), e)),
        }
    }
    if failures.is_empty() {
        Ok(outputs)
    } else {
        Err(CmsfError::Frames(failures))
    }
}

/// Per-frame entry of a run manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFrame {
    pub frame_id: String,
    pub foreground_pixels: u64,
    pub trace: StageTrace,
    /// Output-relative path of the PNG mask.
    pub mask_png: String,
    /// Output-relative path of the RLE JSON mask.
    pub mask_rle: String,
}

/// Everything needed to reproduce a run. Contains no timestamps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub variant: Variant,
    pub split: String,
    pub bundle: String,
    pub bundle_hash: String,
    pub dataset: String,
    pub config: PipelineConfig,
    pub frames: Vec<RunFrame>,
}

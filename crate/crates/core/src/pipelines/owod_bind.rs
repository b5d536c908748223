use super::{FrameOutput, OwodMaskMode, PipelineConfig, StageTrace};
use crate::backend::{EmbedTarget, JointEmbedder, Prompt, PromptableSegmenter, ProposalDetector};
use crate::embedding::{rank_by_similarity, threshold_filter};
use crate::error::Result;
use crate::frame::FramePair;
use crate::geometry::{mask_union, rasterize_box};

/// Visually-cued variant: class-agnostic proposals above `tau_bb` are kept when
/// their crop embedding is more similar to the audio embedding than `tau_bind`.
pub fn run_owod_bind<B>(frame: &FramePair, cfg: &PipelineConfig, backend: &B) -> Result<FrameOutput>
where
    B: ProposalDetector + JointEmbedder + PromptableSegmenter + ?Sized,
{
    let (w, h) = (frame.width, frame.height);
    let mut trace = StageTrace::default();

    let proposals = backend
        .propose_class_agnostic(frame)
        .map_err(|e| e.in_stage("propose_class_agnostic"))?;
    let boxes: Vec<_> = proposals.iter().filter(|p| p.score() > cfg.tau_bb).collect();
    trace.record("objectness", proposals.len(), boxes.len());

    let survivors = if boxes.is_empty() {
        Vec::new()
    } else {
        let audio = backend
            .embed(frame, &EmbedTarget::Audio)
            .map_err(|e| e.in_stage("embed_audio"))?;
        let crops = boxes
            .iter()
            .map(|b| backend.embed(frame, &EmbedTarget::crop(&b.bbox, w, h)))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.in_stage("embed_crops"))?;
        let ranked = rank_by_similarity(&audio, &crops).map_err(|e| e.in_stage("similarity"))?;
        threshold_filter(&ranked, cfg.tau_bind)
            .into_iter()
            .map(|s| boxes[s.proposal_index].bbox)
            .collect()
    };
    trace.record("bind_similarity", boxes.len(), survivors.len());

    let mask = match cfg.owod_mask_mode {
        OwodMaskMode::RasterizeBoxes => {
            let rasters: Vec<_> = survivors.iter().map(|b| rasterize_box(b, w, h)).collect();
            mask_union(w, h, &rasters)
        }
        OwodMaskMode::SegmentBoxes => {
            let candidates = if survivors.is_empty() {
                Vec::new()
            } else {
                let prompts: Vec<Prompt> = survivors.iter().copied().map(Prompt::Box).collect();
                backend.segment(frame, &prompts).map_err(|e| e.in_stage("segment"))?
            };
            let kept: Vec<_> = candidates.iter().filter(|c| c.quality > cfg.quality_floor).collect();
            trace.record("mask_quality", candidates.len(), kept.len());
            mask_union(w, h, kept.iter().map(|c| &c.mask))
        }
    }
    .map_err(|e| e.in_stage("union"))?;

    Ok(FrameOutput {
        frame_id: frame.frame_id.clone(),
        mask,
        trace,
    })
}

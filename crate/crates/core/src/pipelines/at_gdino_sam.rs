use super::{FrameOutput, PipelineConfig, StageTrace};
use crate::backend::{AudioTagger, GroundedDetector, Prompt, PromptableSegmenter};
use crate::error::Result;
use crate::frame::FramePair;
use crate::geometry::mask_union;

/// Audio-cued cascade: audio tags above `tau_at` are grounded one phrase at a
/// time, the resulting boxes prompt the segmenter, and candidates above the
/// quality floor are unioned.
pub fn run_at_gdino_sam<B>(frame: &FramePair, cfg: &PipelineConfig, backend: &B) -> Result<FrameOutput>
where
    B: AudioTagger + GroundedDetector + PromptableSegmenter + ?Sized,
{
    let mut trace = StageTrace::default();

    let tags = backend.tag_audio(frame).map_err(|e| e.in_stage("tag_audio"))?;
    let kept_tags: Vec<_> = tags.iter().filter(|t| t.probability() > cfg.tau_at).collect();
    trace.record("audio_tags", tags.len(), kept_tags.len());

    let mut boxes = Vec::new();
    for tag in &kept_tags {
        let found = backend
            .detect_grounded(frame, std::slice::from_ref(&tag.label))
            .map_err(|e| e.in_stage("detect_grounded"))?;
        boxes.extend(found);
    }
    trace.record("grounded_boxes", boxes.len(), boxes.len());

    let candidates = if boxes.is_empty() {
        Vec::new()
    } else {
        let prompts: Vec<Prompt> = boxes.iter().map(|b| Prompt::Box(b.bbox)).collect();
        backend.segment(frame, &prompts).map_err(|e| e.in_stage("segment"))?
    };
    let kept: Vec<_> = candidates.iter().filter(|c| c.quality > cfg.quality_floor).collect();
    trace.record("mask_quality", candidates.len(), kept.len());

    let mask = mask_union(frame.width, frame.height, kept.iter().map(|c| &c.mask))
        .map_err(|e| e.in_stage("union"))?;
    Ok(FrameOutput {
        frame_id: frame.frame_id.clone(),
        mask,
        trace,
    })
}

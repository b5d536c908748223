use super::{FrameOutput, PipelineConfig, StageTrace};
use crate::backend::{EmbedTarget, JointEmbedder, MaskCandidate, Prompt, PromptableSegmenter};
use crate::embedding::{rank_by_similarity, threshold_filter};
use crate::error::Result;
use crate::frame::FramePair;
use crate::geometry::{mask_union, nms_indices, BoundingBox, ScoredBox};

/// `n × n` point prompts at the cell centres of a regular grid, row-major.
pub fn grid_points(width: u32, height: u32, n: u32) -> Vec<Prompt> {
    let (cw, ch) = (width as f64 / n as f64, height as f64 / n as f64);
    let mut points = Vec::with_capacity((n * n) as usize);
    for row in 0..n {
        for col in 0..n {
            points.push(Prompt::Point {
                x: (col as f64 + 0.5) * cw,
                y: (row as f64 + 0.5) * ch,
            });
        }
    }
    points
}

/// Grid-prompted variant: every grid point prompts the segmenter, candidates are
/// quality-filtered and de-duplicated by NMS over their tight boxes, and the
/// survivors' crops are filtered by similarity to the audio embedding.
pub fn run_sam_bind<B>(frame: &FramePair, cfg: &PipelineConfig, backend: &B) -> Result<FrameOutput>
where
    B: PromptableSegmenter + JointEmbedder + ?Sized,
{
    let (w, h) = (frame.width, frame.height);
    let mut trace = StageTrace::default();

    let prompts = grid_points(w, h, cfg.grid_size);
    let candidates = backend.segment(frame, &prompts).map_err(|e| e.in_stage("segment"))?;
    let good: Vec<&MaskCandidate> = candidates.iter().filter(|c| c.quality > cfg.quality_floor).collect();
    trace.record("mask_quality", candidates.len(), good.len());

    let boxed: Vec<(&MaskCandidate, BoundingBox)> = good
        .iter()
        .filter_map(|c| c.mask.tight_bbox().map(|b| (*c, b)))
        .collect();
    trace.record("nonempty", good.len(), boxed.len());

    let scored = boxed
        .iter()
        .map(|(c, b)| ScoredBox::new(*b, c.quality))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("nms"))?;
    let unique: Vec<&(&MaskCandidate, BoundingBox)> =
        nms_indices(&scored, cfg.nms_iou).into_iter().map(|i| &boxed[i]).collect();
    trace.record("nms", boxed.len(), unique.len());

    let survivors: Vec<&MaskCandidate> = if unique.is_empty() {
        Vec::new()
    } else {
        let audio = backend
            .embed(frame, &EmbedTarget::Audio)
            .map_err(|e| e.in_stage("embed_audio"))?;
        let crops = unique
            .iter()
            .map(|(_, b)| backend.embed(frame, &EmbedTarget::crop(b, w, h)))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.in_stage("embed_crops"))?;
        let ranked = rank_by_similarity(&audio, &crops).map_err(|e| e.in_stage("similarity"))?;
        threshold_filter(&ranked, cfg.tau_bind)
            .into_iter()
            .map(|s| unique[s.proposal_index].0)
            .collect()
    };
    trace.record("bind_similarity", unique.len(), survivors.len());

    let mask = mask_union(w, h, survivors.iter().map(|c| &c.mask)).map_err(|e| e.in_stage("union"))?;
    Ok(FrameOutput {
        frame_id: frame.frame_id.clone(),
        mask,
        trace,
    })
}

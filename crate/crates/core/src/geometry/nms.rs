use std::cmp::Ordering;

use super::bbox::{box_iou, ScoredBox};

/// Greedy non-maximal suppression returning indices into `boxes`.
///
/// Boxes are visited by descending score (equal scores keep input order); a box is
/// kept unless its IoU with an already kept box exceeds `iou_threshold`.
pub fn nms_indices(boxes: &[ScoredBox], iou_threshold: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| {
        boxes[b]
            .score()
            .partial_cmp(&boxes[a].score())
            .unwrap_or(Ordering::Equal)
    });

    let mut keep: Vec<usize> = Vec::new();
    for idx in order {
        let candidate = &boxes[idx].bbox;
        let suppressed = keep
            .iter()
            .any(|&k| box_iou(&boxes[k].bbox, candidate) > iou_threshold);
        if !suppressed {
            keep.push(idx);
        }
    }
    keep
}

/// Greedy NMS; output sorted by descending score.
pub fn nms(boxes: &[ScoredBox], iou_threshold: f64) -> Vec<ScoredBox> {
    nms_indices(boxes, iou_threshold)
        .into_iter()
        .map(|i| boxes[i])
        .collect()
}

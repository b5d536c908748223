use serde::{Deserialize, Serialize};

use crate::error::{CmsfError, Result};
use crate::geometry::{mask_iou, BinaryMask};

/// β² of the F-measure used unless configured otherwise.
pub const DEFAULT_BETA_SQ: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameScore {
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
}

/// A mask tagged with the frame it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMask {
    pub frame_id: String,
    pub mask: BinaryMask,
}

impl FrameMask {
    pub fn new(frame_id: impl Into<String>, mask: BinaryMask) -> Self {
        FrameMask {
            frame_id: frame_id.into(),
            mask,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerFrame {
    pub frame_id: String,
    pub iou: f64,
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub m_iou: f64,
    pub f_score: f64,
    pub beta_sq: f64,
    pub per_frame: Vec<PerFrame>,
}

fn check_beta(beta_sq: f64) -> Result<()> {
    if !(beta_sq.is_finite() && beta_sq > 0.0) {
        return Err(CmsfError::InvalidValue(format!("beta_sq must be positive, got {beta_sq}")));
    }
    Ok(())
}

/// Pixel precision, recall and F-measure `(1+β²)PR / (β²P + R)`.
///
/// Degenerate frames: both empty scores `(1, 1, 1)`; an empty prediction against
/// non-empty truth scores `P = 1, R = 0`; a non-empty prediction against empty
/// truth scores `P = 0, R = 1`. F is `0` whenever there is no true positive and
/// something was missed or hallucinated.
pub fn frame_fscore(pred: &BinaryMask, gt: &BinaryMask, beta_sq: f64) -> Result<FrameScore> {
    check_beta(beta_sq)?;
    pred.check_same_shape(gt)?;
    let (mut tp, mut fp, mut fneg) = (0u64, 0u64, 0u64);
    for (&p, &g) in pred.pixels().iter().zip(gt.pixels()) {
        match (p, g) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fneg += 1,
            (false, false) => {}
        }
    }
    if tp + fp + fneg == 0 {
        return Ok(FrameScore {
            precision: 1.0,
            recall: 1.0,
            f: 1.0,
        });
    }
    let precision = if tp + fp == 0 { 1.0 } else { tp as f64 / (tp + fp) as f64 };
    let recall = if tp + fneg == 0 { 1.0 } else { tp as f64 / (tp + fneg) as f64 };
    let f = if tp == 0 {
        0.0
    } else {
        (1.0 + beta_sq) * precision * recall / (beta_sq * precision + recall)
    };
    Ok(FrameScore {
        precision,
        recall,
        f: f.min(1.0),
    })
}

/// Running arithmetic mean, updated one value at a time.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunningMean {
    count: u64,
    mean: f64,
}

impl RunningMean {
    pub fn push(&mut self, value: f64) {
        self.count += 1;
        self.mean += (value - self.mean) / self.count as f64;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// `None` before the first value.
    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then_some(self.mean)
    }
}

fn batch_mean(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut n) = (0.0f64, 0usize);
    for v in values {
        sum += v;
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Per-frame IoU and F-measure plus their unweighted means over frames.
///
/// `preds` and `gts` must list the same frame ids in the same order. An empty
/// sequence yields zero means.
pub fn evaluate_sequence(preds: &[FrameMask], gts: &[FrameMask], beta_sq: f64) -> Result<EvalResult> {
    check_beta(beta_sq)?;
    if preds.len() != gts.len() {
        return Err(CmsfError::Alignment(format!(
            "{} predictions for {} ground-truth frames",
            preds.len(),
            gts.len()
        )));
    }
    let per_frame = preds
        .iter()
        .zip(gts)
        .map(|(p, g)| {
            if p.frame_id != g.frame_id {
                return Err(CmsfError::Alignment(format!(
                    "prediction {} aligned with ground truth {}",
                    p.frame_id, g.frame_id
                )));
            }
            let iou = mask_iou(&p.mask, &g.mask)
                .map_err(|e| CmsfError::Alignment(format!("frame {}: {e}", p.frame_id)))?;
            let s = frame_fscore(&p.mask, &g.mask, beta_sq)
                .map_err(|e| CmsfError::Alignment(format!("frame {}: {e}", p.frame_id)))?;
            Ok(PerFrame {
                frame_id: p.frame_id.clone(),
                iou,
                precision: s.precision,
                recall: s.recall,
                f: s.f,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalResult {
        m_iou: batch_mean(per_frame.iter().map(|p| p.iou)),
        f_score: batch_mean(per_frame.iter().map(|p| p.f)),
        beta_sq,
        per_frame,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(bits: &str) -> BinaryMask {
        let px: Vec<bool> = bits.chars().map(|c| c == '1').collect();
        BinaryMask::from_pixels(px.len() as u32, 1, px).unwrap()
    }

    #[test]
    fn fscore_examples() {
        let m = row("0110");
        let s = frame_fscore(&m, &m, 0.3).unwrap();
        assert_eq!((s.precision, s.recall, s.f), (1.0, 1.0, 1.0));

        let s = frame_fscore(&row("0000"), &m, 0.3).unwrap();
        assert_eq!((s.precision, s.recall, s.f), (1.0, 0.0, 0.0));

        let s = frame_fscore(&row("1100"), &row("0110"), 0.3).unwrap();
        assert_eq!((s.precision, s.recall), (0.5, 0.5));
        assert!((s.f - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fscore_degenerate_conventions() {
        let s = frame_fscore(&row("0000"), &row("0000"), 0.3).unwrap();
        assert_eq!((s.precision, s.recall, s.f), (1.0, 1.0, 1.0));
        let s = frame_fscore(&row("0100"), &row("0000"), 0.3).unwrap();
        assert_eq!((s.precision, s.recall, s.f), (0.0, 1.0, 0.0));
        let s = frame_fscore(&row("1000"), &row("0001"), 0.3).unwrap();
        assert_eq!((s.precision, s.recall, s.f), (0.0, 0.0, 0.0));
    }

    #[test]
    fn fscore_weights_precision() {
        // P = 1, R = 1/3, beta² = 0.3 -> (1.3/3) / (0.3 + 1/3) = 13/19.
        let s = frame_fscore(&row("100000"), &row("111000"), 0.3).unwrap();
        assert!((s.f - 13.0 / 19.0).abs() < 1e-15);
    }

    #[test]
    fn fscore_errors() {
        assert!(matches!(frame_fscore(&row("10"), &row("100"), 0.3), Err(CmsfError::Shape(_))));
        assert!(frame_fscore(&row("10"), &row("10"), 0.0).is_err());
    }

    #[test]
    fn sequence_means_and_alignment() {
        let a = row("1100");
        let preds = vec![FrameMask::new("v/1", a.clone()), FrameMask::new("v/2", a.clone())];
        let gts = vec![FrameMask::new("v/1", a.clone()), FrameMask::new("v/2", a.complement())];
        let r = evaluate_sequence(&preds, &gts, 0.3).unwrap();
        assert_eq!(r.m_iou, 0.5);
        assert_eq!(r.f_score, 0.5);

        let r = evaluate_sequence(&preds, &preds, 0.3).unwrap();
        assert_eq!((r.m_iou, r.f_score), (1.0, 1.0));

        assert!(matches!(
            evaluate_sequence(&preds[..1], &gts, 0.3),
            Err(CmsfError::Alignment(_))
        ));
        let swapped = vec![gts[1].clone(), gts[0].clone()];
        assert!(matches!(
            evaluate_sequence(&preds, &swapped, 0.3),
            Err(CmsfError::Alignment(_))
        ));
    }

    #[test]
    fn running_mean_tracks_batch() {
        let mut rm = RunningMean::default();
        assert_eq!(rm.mean(), None);
        for v in [0.25, 1.0, 0.0, 0.5] {
            rm.push(v);
        }
        assert_eq!(rm.count(), 4);
        assert!((rm.mean().unwrap() - 0.4375).abs() < 1e-15);
    }
}

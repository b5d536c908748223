use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use cmsf_core::evaluation::{report_table, FrameMask, ResultTable};
use cmsf_core::harness::{load_gt_mask, DatasetIndex};
use cmsf_core::pipelines::RunManifest;
use cmsf_core::{evaluate_sequence, load_dataset, BinaryMask, Split};

use crate::output::OutputBatch;
use crate::run::RUN_MANIFEST;
use crate::EvalArgs;

pub const REPORT_JSON: &str = "report.json";
pub const REPORT_TEXT: &str = "report.txt";

/// A prediction directory resolved to its row label, split and per-frame mask files.
struct Prediction {
    label: String,
    split: Split,
    masks: BTreeMap<String, PathBuf>,
}

fn resolve(dir: &Path, split_flag: Option<Split>) -> Result<Prediction> {
    let manifest_path = dir.join(RUN_MANIFEST);
    if manifest_path.is_file() {
        let text = fs::read_to_string(&manifest_path)?;
        let m: RunManifest =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", manifest_path.display()))?;
        let split: Split = m.split.parse()?;
        if let Some(s) = split_flag.filter(|s| *s != split) {
            bail!("{} was run on {split}, not {s}", dir.display());
        }
        let masks = m
            .frames
            .into_iter()
            .map(|f| (f.frame_id, dir.join(f.mask_png)))
            .collect();
        return Ok(Prediction {
            label: m.variant.display_name().to_string(),
            split,
            masks,
        });
    }
    let split = split_flag
        .ok_or_else(|| anyhow!("{} has no {RUN_MANIFEST}; pass --split", dir.display()))?;
    let label = dir
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| anyhow!("cannot name prediction {}", dir.display()))?
        .to_string();
    Ok(Prediction {
        label,
        split,
        masks: BTreeMap::new(),
    })
}

/// Pairs every ground-truth frame with its prediction. All problems are gathered
/// and reported per video.
fn align(pred_dir: &Path, pred: &Prediction, index: &DatasetIndex) -> Result<(Vec<FrameMask>, Vec<FrameMask>)> {
    let mut preds = Vec::new();
    let mut gts = Vec::new();
    let mut problems: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for (frame, gt_path) in index.frames_with_gt() {
        seen.insert(frame.frame_id.clone());
        let path = match pred.masks.get(&frame.frame_id) {
            Some(p) => p.clone(),
            None if pred.masks.is_empty() => {
                pred_dir.join(format!("masks/{}/{}.png", frame.video_id, frame.index))
            }
            None => {
                problems.entry(frame.video_id.clone()).or_default().push(format!("frame {} not predicted", frame.index));
                continue;
            }
        };
        let gt = load_gt_mask(gt_path)?;
        let mask = match BinaryMask::read_png(&path) {
            Ok(m) => m,
            Err(e) => {
                problems.entry(frame.video_id.clone()).or_default().push(format!("frame {}: {e}", frame.index));
                continue;
            }
        };
        if mask.dims() != gt.dims() {
            problems.entry(frame.video_id.clone()).or_default().push(format!(
                "frame {}: prediction {}x{} vs ground truth {}x{}",
                frame.index,
                mask.width(),
                mask.height(),
                gt.width(),
                gt.height()
            ));
            continue;
        }
        preds.push(FrameMask::new(frame.frame_id.clone(), mask));
        gts.push(FrameMask::new(frame.frame_id.clone(), gt));
    }
    for id in pred.masks.keys().filter(|id| !seen.contains(*id)) {
        let video = id.rsplit_once('/').map_or(id.as_str(), |(v, _)| v);
        problems.entry(video.to_string()).or_default().push(format!("{id} has no ground truth"));
    }
    if !problems.is_empty() {
        let lines: Vec<String> = problems
            .iter()
            .map(|(video, p)| format!("  video {video}: {}", p.join("; ")))
            .collect();
        bail!(
            "{} ({}) is not aligned with the {} ground truth:\n{}",
            pred_dir.display(),
            pred.label,
            index.split,
            lines.join("\n")
        );
    }
    Ok((preds, gts))
}

pub fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let mut indexes: BTreeMap<Split, DatasetIndex> = BTreeMap::new();
    let mut table = ResultTable::new();
    for dir in &args.pred {
        let pred = resolve(dir, args.split)?;
        let index = match indexes.entry(pred.split) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => e.insert(
                load_dataset(&args.dataset, pred.split)
                    .with_context(|| format!("loading dataset {} split {}", args.dataset.display(), pred.split))?,
            ),
        };
        let (preds, gts) = align(dir, &pred, index)?;
        let result = evaluate_sequence(&preds, &gts, args.beta_sq)?;
        log::info!("{} {}: mIoU {:.4} F {:.4}", pred.label, pred.split, result.m_iou, result.f_score);
        let row = table.entry(pred.label.clone()).or_default();
        if row.insert(pred.split, result).is_some() {
            bail!("two predictions for {} on {}", pred.label, pred.split);
        }
    }
    let report = report_table(&table);
    let text = report.render_text();
    let mut batch = OutputBatch::default();
    batch.add(REPORT_JSON, report.to_json()?.into_bytes());
    batch.add(REPORT_TEXT, text.clone().into_bytes());
    batch.write_under(&args.out)?;
    print!("{text}");
    Ok(())
}

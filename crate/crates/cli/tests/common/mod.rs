#![allow(dead_code)]

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cmsf_core::BinaryMask;
use image::RgbImage;

pub fn cmsf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmsf"))
        .args(args)
        .output()
        .expect("spawn cmsf")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

/// Rows `[r0, r1)` of a 224x224 mask.
pub fn rows(r0: u32, r1: u32) -> BinaryMask {
    BinaryMask::from_fn(224, 224, |_, y| y >= r0 && y < r1)
}

/// Writes one S4 video under `root` with the given ground truth and a plain
/// frame image and audio stub per frame.
pub fn write_gt_video(root: &Path, video: &str, gts: &[BinaryMask]) {
    let base = root.join("S4").join(video);
    for sub in ["frames", "audio", "gt"] {
        fs::create_dir_all(base.join(sub)).unwrap();
    }
    let img = RgbImage::from_pixel(224, 224, image::Rgb([40, 80, 120]));
    for (i, gt) in gts.iter().enumerate() {
        let t = i + 1;
        img.save(base.join(format!("frames/{t}.png"))).unwrap();
        fs::write(base.join(format!("audio/{t}.wav")), b"RIFF").unwrap();
        gt.write_png(&base.join(format!("gt/{t}.png"))).unwrap();
    }
}

pub fn write_pred_video(dir: &Path, video: &str, preds: &[BinaryMask]) {
    let base = dir.join("masks").join(video);
    fs::create_dir_all(&base).unwrap();
    for (i, m) in preds.iter().enumerate() {
        m.write_png(&base.join(format!("{}.png", i + 1))).unwrap();
    }
}

/// Two videos whose per-frame scores are known by hand: mIoU 1/2 and
/// F(0.3) = (5 + 13/19) / 10 = 54/95.
pub fn hand_dataset(root: &Path, pred_dir: &Path) {
    let empty = BinaryMask::empty(224, 224);
    let a_pred = [rows(0, 224), rows(0, 100), rows(10, 20), empty.clone(), rows(0, 50)];
    let a_gt = [rows(0, 224), rows(0, 100), rows(10, 20), rows(0, 50), empty.clone()];
    let b_pred = [rows(0, 28), rows(56, 168), rows(56, 168), empty.clone(), rows(0, 10)];
    let b_gt = [rows(0, 84), rows(0, 112), rows(0, 112), empty.clone(), rows(100, 110)];
    write_gt_video(root, "vid_a", &a_gt);
    write_gt_video(root, "vid_b", &b_gt);
    write_pred_video(pred_dir, "vid_a", &a_pred);
    write_pred_video(pred_dir, "vid_b", &b_pred);
}

pub const HAND_MIOU: f64 = 0.5;
pub const HAND_F: f64 = 54.0 / 95.0;

pub fn normalized(line: &str) -> String {
    line.split_whitespace().collect::<Vec<_>>().join(" ")
}

//! AVSBench-layout dataset index.
//!
//! ```text
//! <root>/<split>/<video_id>/frames/<t>.png
//! <root>/<split>/<video_id>/audio/<t>.wav
//! <root>/<split>/<video_id>/gt/<t>.png        t = 1..=5
//! ```
//!
//! `<split>` is `S4` or `MS3`. Audio files are only checked for existence.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use image::RgbImage;
use serde::{Deserialize, Serialize};

use super::resize::{resize_image_bilinear, resize_mask_nearest};
use crate::error::{CmsfError, Result};
use crate::frame::{FramePair, FRAME_SIZE};
use crate::geometry::BinaryMask;

pub const FRAMES_PER_VIDEO: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Split {
    S4,
    MS3,
}

impl Split {
    pub const ALL: [Split; 2] = [Split::S4, Split::MS3];

    pub fn dir_name(&self) -> &'static str {
        match self {
            Split::S4 => "S4",
            Split::MS3 => "MS3",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.dir_name())
    }
}

impl FromStr for Split {
    type Err = CmsfError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "S4" => Ok(Split::S4),
            "MS3" => Ok(Split::MS3),
            _ => Err(CmsfError::InvalidValue(format!("unknown split `{s}` (expected S4 or MS3)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VideoEntry {
    pub video_id: String,
    /// Exactly five frames, `index` 1..=5.
    pub frames: Vec<FramePair>,
    /// Ground-truth mask path for each frame, aligned with `frames`.
    pub gt_masks: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetIndex {
    pub root: PathBuf,
    pub split: Split,
    pub videos: Vec<VideoEntry>,
}

impl DatasetIndex {
    pub fn frames(&self) -> impl Iterator<Item = &FramePair> {
        self.videos.iter().flat_map(|v| v.frames.iter())
    }

    /// `(frame, gt path)` pairs in index order.
    pub fn frames_with_gt(&self) -> impl Iterator<Item = (&FramePair, &Path)> {
        self.videos
            .iter()
            .flat_map(|v| v.frames.iter().zip(v.gt_masks.iter().map(PathBuf::as_path)))
    }

    pub fn frame_count(&self) -> usize {
        self.videos.iter().map(|v| v.frames.len()).sum()
    }
}

fn list_dir_sorted(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut entries = fs::read_dir(dir)
        .map_err(|e| CmsfError::load(dir, e.to_string()))?
        .map(|e| e.map(|e| e.path()).map_err(|e| CmsfError::load(dir, e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    entries.sort();
    Ok(entries)
}

/// Files in `dir` with extension `ext`; errors if the set is not exactly `1..=5`.
fn numbered_files(video_id: &str, dir: &Path, ext: &str) -> Result<Vec<PathBuf>> {
    let present: Vec<PathBuf> = list_dir_sorted(dir)
        .map_err(|_| CmsfError::load(dir, format!("video {video_id}: missing directory")))?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case(ext)))
        .collect();
    if present.len() != FRAMES_PER_VIDEO as usize {
        return Err(CmsfError::load(
            dir,
            format!(
                "video {video_id}: expected {FRAMES_PER_VIDEO} .{ext} files, found {}",
                present.len()
            ),
        ));
    }
    (1..=FRAMES_PER_VIDEO)
        .map(|t| {
            let p = dir.join(format!("{t}.{ext}"));
            if p.is_file() {
                Ok(p)
            } else {
                Err(CmsfError::load(&p, format!("video {video_id}: missing frame {t}")))
            }
        })
        .collect()
}

fn check_image(video_id: &str, path: &Path) -> Result<()> {
    image::image_dimensions(path)
        .map(|_| ())
        .map_err(|e| CmsfError::load(path, format!("video {video_id}: unreadable image: {e}")))
}

/// Indexes one split of an AVSBench-layout tree. Videos are sorted by id.
pub fn load_dataset(root: &Path, split: Split) -> Result<DatasetIndex> {
    let split_dir = root.join(split.dir_name());
    let mut videos = Vec::new();
    for video_dir in list_dir_sorted(&split_dir)? {
        if !video_dir.is_dir() {
            continue;
        }
        let video_id = video_dir
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| CmsfError::load(&video_dir, "video directory name is not UTF-8"))?
            .to_string();
        let images = numbered_files(&video_id, &video_dir.join("frames"), "png")?;
        let audio = numbered_files(&video_id, &video_dir.join("audio"), "wav")?;
        let gts = numbered_files(&video_id, &video_dir.join("gt"), "png")?;
        for p in images.iter().chain(&gts) {
            check_image(&video_id, p)?;
        }
        let frames = images
            .into_iter()
            .zip(audio)
            .enumerate()
            .map(|(i, (image, audio))| FramePair {
                frame_id: FramePair::make_id(&video_id, i as u32 + 1),
                video_id: video_id.clone(),
                index: i as u32 + 1,
                width: FRAME_SIZE,
                height: FRAME_SIZE,
                image: Some(image),
                audio: Some(audio),
            })
            .collect();
        videos.push(VideoEntry {
            video_id,
            frames,
            gt_masks: gts,
        });
    }
    Ok(DatasetIndex {
        root: root.to_path_buf(),
        split,
        videos,
    })
}

/// Reads a ground-truth PNG and brings it to the standard frame size.
pub fn load_gt_mask(path: &Path) -> Result<BinaryMask> {
    let mask = BinaryMask::read_png(path)?;
    Ok(resize_mask_nearest(&mask, FRAME_SIZE, FRAME_SIZE))
}

/// Reads a frame image and brings it to the standard frame size.
pub fn load_frame_image(path: &Path) -> Result<RgbImage> {
    let img = image::open(path).map_err(|e| CmsfError::load(path, e.to_string()))?;
    Ok(resize_image_bilinear(&img.to_rgb8(), FRAME_SIZE, FRAME_SIZE))
}

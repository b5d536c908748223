use std::path::PathBuf;

use serde::{Deserialize, Serialize};

/// Side length every frame is resized to before any model or metric sees it.
pub const FRAME_SIZE: u32 = 224;

/// One image frame with its aligned one-second audio segment.
///
/// `image` and `audio` are handles only; the engine never decodes audio and the
/// pipelines never decode images (all model outputs come from a backend).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramePair {
    pub frame_id: String,
    pub video_id: String,
    /// 1-based position within the video.
    pub index: u32,
    pub width: u32,
    pub height: u32,
    pub image: Option<PathBuf>,
    pub audio: Option<PathBuf>,
}

impl FramePair {
    /// Frame id used for backend records: `<video_id>/<index>`.
    pub fn make_id(video_id: &str, index: u32) -> String {
        format!("{video_id}/{index}")
    }

    /// A frame without media handles, at the standard resolution.
    pub fn synthetic(video_id: &str, index: u32) -> Self {
        FramePair {
            frame_id: Self::make_id(video_id, index),
            video_id: video_id.to_string(),
            index,
            width: FRAME_SIZE,
            height: FRAME_SIZE,
            image: None,
            audio: None,
        }
    }
}

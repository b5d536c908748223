//! Interfaces for the foundation-model capabilities the pipelines consume.
//!
//! Each capability is a separate trait so a pipeline only asks for what it uses.
//! Two implementations ship with the crate: [`RecordedBackend`], a read-only
//! lookup over an interchange bundle, and [`MockBackend`], a seeded generator for
//! tests. Implementations must return the same answer for the same query no matter
//! the call order, so frames can be processed concurrently.

mod mock;
mod recorded;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingVector;
use crate::error::{CmsfError, Result};
use crate::frame::FramePair;
use crate::geometry::{BinaryMask, BoundingBox, PixelRect, ScoredBox};

pub use mock::MockBackend;
pub use recorded::{Bundle, BundleFrame, CandidateRecord, Record, RecordEntry, RecordedBackend};

/// Size of the audio tag vocabulary.
pub const AUDIO_CLASS_COUNT: u16 = 521;

/// A few labels from the audio tag vocabulary with their class indices, used by
/// the mock backend and the synthetic fixtures.
pub const SAMPLE_AUDIO_CLASSES: &[(u16, &str)] = &[
    (0, "Speech"),
    (74, "Dog"),
    (81, "Cat"),
    (111, "Bird"),
    (140, "Guitar"),
    (153, "Piano"),
    (191, "Violin, fiddle"),
    (300, "Car"),
    (322, "Helicopter"),
    (343, "Lawn mower"),
    (360, "Tabla"),
    (426, "Baby cry, infant cry"),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAudioTag", into = "RawAudioTag")]
pub struct AudioTag {
    pub label: String,
    class_index: u16,
    probability: f64,
}

#[derive(Serialize, Deserialize)]
struct RawAudioTag {
    label: String,
    class_index: u16,
    probability: f64,
}

impl TryFrom<RawAudioTag> for AudioTag {
    type Error = CmsfError;

    fn try_from(raw: RawAudioTag) -> Result<Self> {
        AudioTag::new(raw.label, raw.class_index, raw.probability)
    }
}

impl From<AudioTag> for RawAudioTag {
    fn from(t: AudioTag) -> Self {
        RawAudioTag {
            label: t.label,
            class_index: t.class_index,
            probability: t.probability,
        }
    }
}

impl AudioTag {
    pub fn new(label: impl Into<String>, class_index: u16, probability: f64) -> Result<Self> {
        if class_index >= AUDIO_CLASS_COUNT {
            return Err(CmsfError::InvalidValue(format!(
                "audio class index {class_index} outside [0, {}]",
                AUDIO_CLASS_COUNT - 1
            )));
        }
        if !(0.0..=1.0).contains(&probability) {
            return Err(CmsfError::InvalidValue(format!(
                "tag probability {probability} outside [0, 1]"
            )));
        }
        Ok(AudioTag {
            label: label.into(),
            class_index,
            probability,
        })
    }

    pub fn class_index(&self) -> u16 {
        self.class_index
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }
}

/// Sorts tags by descending probability, keeping input order on ties.
pub fn sort_tags(tags: &mut [AudioTag]) {
    tags.sort_by(|a, b| b.probability.total_cmp(&a.probability));
}

/// A visual prompt for the promptable segmenter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prompt {
    Box(BoundingBox),
    Point { x: f64, y: f64 },
}

impl Prompt {
    /// Record qualifier identifying this prompt inside a `width × height` frame.
    ///
    /// Boxes are keyed by their coordinates rounded to integers, points by their
    /// coordinates at two decimals.
    pub fn qualifier(&self, width: u32, height: u32) -> String {
        match self {
            Prompt::Box(b) => format!("box:{}", b.rounded_rect(width, height)),
            Prompt::Point { x, y } => format!("point:{x:.2},{y:.2}"),
        }
    }
}

/// A mask produced by the segmenter for one prompt.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskCandidate {
    pub mask: BinaryMask,
    pub quality: f64,
    pub prompt: Prompt,
}

/// What to embed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbedTarget {
    Audio,
    /// Image crop given as an integer pixel rectangle.
    ImageCrop(PixelRect),
}

impl EmbedTarget {
    /// Crop of `bbox` rounded to integers and clamped to the frame.
    pub fn crop(bbox: &BoundingBox, width: u32, height: u32) -> Self {
        EmbedTarget::ImageCrop(bbox.rounded_rect(width, height))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Capability {
    AudioTags,
    GroundedBoxes,
    Proposals,
    MaskCandidates,
    ImageEmbedding,
    AudioEmbedding,
}

impl Capability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Capability::AudioTags => "audio_tags",
            Capability::GroundedBoxes => "grounded_boxes",
            Capability::Proposals => "proposals",
            Capability::MaskCandidates => "mask_candidates",
            Capability::ImageEmbedding => "image_embedding",
            Capability::AudioEmbedding => "audio_embedding",
        }
    }
}

/// Identifies one record: `(frame, capability, qualifier)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RecordKey {
    pub frame_id: String,
    pub capability: Capability,
    pub qualifier: Option<String>,
}

impl RecordKey {
    pub fn new(frame_id: &str, capability: Capability, qualifier: Option<String>) -> Self {
        RecordKey {
            frame_id: frame_id.to_string(),
            capability,
            qualifier,
        }
    }

    pub fn audio_tags(frame_id: &str) -> Self {
        Self::new(frame_id, Capability::AudioTags, None)
    }

    pub fn grounded(frame_id: &str, phrase: &str) -> Self {
        Self::new(frame_id, Capability::GroundedBoxes, Some(phrase.to_string()))
    }

    pub fn proposals(frame_id: &str) -> Self {
        Self::new(frame_id, Capability::Proposals, None)
    }

    pub fn mask_candidates(frame: &FramePair, prompt: &Prompt) -> Self {
        Self::new(
            &frame.frame_id,
            Capability::MaskCandidates,
            Some(prompt.qualifier(frame.width, frame.height)),
        )
    }

    pub fn embedding(frame_id: &str, target: &EmbedTarget) -> Self {
        match target {
            EmbedTarget::Audio => Self::new(frame_id, Capability::AudioEmbedding, None),
            EmbedTarget::ImageCrop(r) => {
                Self::new(frame_id, Capability::ImageEmbedding, Some(r.to_string()))
            }
        }
    }
}

impl fmt::Display for RecordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.frame_id, self.capability.as_str())?;
        if let Some(q) = &self.qualifier {
            write!(f, "[{q}]")?;
        }
        Ok(())
    }
}

pub trait AudioTagger {
    /// Ranked tags for the frame's audio segment, highest probability first.
    fn tag_audio(&self, frame: &FramePair) -> Result<Vec<AudioTag>>;
}

pub trait GroundedDetector {
    /// Boxes for the given phrases in frame pixel coordinates.
    fn detect_grounded(&self, frame: &FramePair, phrases: &[String]) -> Result<Vec<ScoredBox>>;
}

pub trait ProposalDetector {
    /// Class-agnostic proposals; the score carries objectness.
    fn propose_class_agnostic(&self, frame: &FramePair) -> Result<Vec<ScoredBox>>;
}

pub trait PromptableSegmenter {
    /// Candidates for every prompt, concatenated in prompt order.
    fn segment(&self, frame: &FramePair, prompts: &[Prompt]) -> Result<Vec<MaskCandidate>>;
}

pub trait JointEmbedder {
    fn embed(&self, frame: &FramePair, target: &EmbedTarget) -> Result<EmbeddingVector>;
}

/// All five capabilities together.
pub trait Backend:
    AudioTagger + GroundedDetector + ProposalDetector + PromptableSegmenter + JointEmbedder
{
}

impl<T> Backend for T where
    T: AudioTagger + GroundedDetector + ProposalDetector + PromptableSegmenter + JointEmbedder
{
}

pub(crate) fn require_nonempty<T>(items: &[T], what: &str) -> Result<()> {
    if items.is_empty() {
        return Err(CmsfError::InvalidValue(format!("{what} must not be empty")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qualifiers_are_canonical() {
        let b = BoundingBox::new(10.4, 20.6, 100.5, 230.0).unwrap();
        assert_eq!(Prompt::Box(b).qualifier(224, 224), "box:10,21,101,224");
        assert_eq!(
            Prompt::Point { x: 7.0, y: 21.0 }.qualifier(224, 224),
            "point:7.00,21.00"
        );
        let key = RecordKey::embedding("v/1", &EmbedTarget::crop(&b, 224, 224));
        assert_eq!(key.to_string(), "v/1:image_embedding[10,21,101,224]");
    }

    #[test]
    fn tag_validation() {
        assert!(AudioTag::new("x", 520, 1.0).is_ok());
        assert!(AudioTag::new("x", 521, 0.5).is_err());
        assert!(AudioTag::new("x", 3, -0.1).is_err());
    }

    #[test]
    fn tag_sort_is_stable_descending() {
        let mut tags = vec![
            AudioTag::new("a", 0, 0.2).unwrap(),
            AudioTag::new("b", 1, 0.9).unwrap(),
            AudioTag::new("c", 2, 0.2).unwrap(),
        ];
        sort_tags(&mut tags);
        let labels: Vec<_> = tags.iter().map(|t| t.label.as_str()).collect();
        assert_eq!(labels, ["b", "a", "c"]);
    }
}

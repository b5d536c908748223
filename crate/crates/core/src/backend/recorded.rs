use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{
    require_nonempty, sort_tags, AudioTag, AudioTagger, Capability, EmbedTarget,
    GroundedDetector, JointEmbedder, MaskCandidate, Prompt, PromptableSegmenter,
    ProposalDetector, RecordKey,
};
use crate::embedding::EmbeddingVector;
use crate::error::{CmsfError, Result};
use crate::frame::FramePair;
use crate::geometry::{BinaryMask, ScoredBox};

/// Bundle format version understood by this crate.
pub const BUNDLE_VERSION: u32 = 1;

/// One mask candidate as stored on disk: the mask lives in a separate PNG.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    /// Bundle-relative path of the mask PNG.
    pub mask: String,
    pub quality: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Record {
    AudioTags(Vec<AudioTag>),
    Boxes(Vec<ScoredBox>),
    MaskCandidates(Vec<CandidateRecord>),
    Embedding(EmbeddingVector),
}

impl Record {
    pub fn matches(&self, capability: Capability) -> bool {
        matches!(
            (self, capability),
            (Record::AudioTags(_), Capability::AudioTags)
                | (Record::Boxes(_), Capability::GroundedBoxes)
                | (Record::Boxes(_), Capability::Proposals)
                | (Record::MaskCandidates(_), Capability::MaskCandidates)
                | (Record::Embedding(_), Capability::ImageEmbedding)
                | (Record::Embedding(_), Capability::AudioEmbedding)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordEntry {
    /// Bundle-relative path of the record file.
    pub path: String,
    pub record: Record,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BundleFrame {
    pub width: u32,
    pub height: u32,
    pub records: BTreeMap<RecordKey, RecordEntry>,
}

/// In-memory form of an interchange bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub version: u32,
    pub embedding_dim: usize,
    /// Set by exporters that stopped early.
    pub incomplete: bool,
    pub metadata: BTreeMap<String, String>,
    pub frames: BTreeMap<String, BundleFrame>,
    /// Mask PNGs keyed by bundle-relative path.
    pub masks: BTreeMap<String, BinaryMask>,
}

impl Bundle {
    pub fn new(embedding_dim: usize) -> Self {
        Bundle {
            version: BUNDLE_VERSION,
            embedding_dim,
            incomplete: false,
            metadata: BTreeMap::new(),
            frames: BTreeMap::new(),
            masks: BTreeMap::new(),
        }
    }

    pub fn add_frame(&mut self, frame_id: &str, width: u32, height: u32) -> &mut BundleFrame {
        self.frames
            .entry(frame_id.to_string())
            .or_insert_with(|| BundleFrame {
                width,
                height,
                records: BTreeMap::new(),
            })
    }

    /// Inserts a record. Panics if the frame was not added first.
    pub fn insert(&mut self, key: RecordKey, path: impl Into<String>, record: Record) {
        let frame = self
            .frames
            .get_mut(&key.frame_id)
            .unwrap_or_else(|| panic!("frame {} must be added before its records", key.frame_id));
        frame.records.insert(
            key,
            RecordEntry {
                path: path.into(),
                record,
            },
        );
    }

    pub fn record_count(&self) -> usize {
        self.frames.values().map(|f| f.records.len()).sum()
    }

    pub fn get(&self, key: &RecordKey) -> Option<&RecordEntry> {
        self.frames.get(&key.frame_id)?.records.get(key)
    }

    /// Checks every cross-record invariant. `root` is only used in error messages.
    pub fn validate(&self, root: &std::path::Path) -> Result<()> {
        if self.version != BUNDLE_VERSION {
            return Err(CmsfError::corrupt(
                root,
                format!("unsupported bundle version {}", self.version),
            ));
        }
        if self.embedding_dim == 0 {
            return Err(CmsfError::corrupt(root, "embedding_dim must be positive"));
        }
        for (frame_id, frame) in &self.frames {
            if frame.width == 0 || frame.height == 0 {
                return Err(CmsfError::corrupt(root, format!("frame {frame_id} has zero size")));
            }
            for (key, entry) in &frame.records {
                let at = root.join(&entry.path);
                if &key.frame_id != frame_id {
                    return Err(CmsfError::corrupt(at, format!("record {key} filed under frame {frame_id}")));
                }
                if !entry.record.matches(key.capability) {
                    return Err(CmsfError::corrupt(at, format!("record type does not match {key}")));
                }
                match &entry.record {
                    Record::Boxes(boxes) => {
                        if let Some(b) = boxes.iter().find(|b| !b.bbox.is_non_negative()) {
                            return Err(CmsfError::corrupt(at, format!("negative box coordinates {:?}", b.bbox)));
                        }
                    }
                    Record::MaskCandidates(cands) => {
                        for c in cands {
                            if !(0.0..=1.0).contains(&c.quality) {
                                return Err(CmsfError::corrupt(at, format!("quality {} outside [0, 1]", c.quality)));
                            }
                            let mask = self.masks.get(&c.mask).ok_or_else(|| {
                                CmsfError::corrupt(&at, format!("mask {} not in bundle", c.mask))
                            })?;
                            if mask.dims() != (frame.width, frame.height) {
                                return Err(CmsfError::corrupt(
                                    root.join(&c.mask),
                                    format!(
                                        "mask is {}x{} but frame {frame_id} is {}x{}",
                                        mask.width(),
                                        mask.height(),
                                        frame.width,
                                        frame.height
                                    ),
                                ));
                            }
                        }
                    }
                    Record::Embedding(e) => {
                        if e.dim() != self.embedding_dim {
                            return Err(CmsfError::corrupt(
                                at,
                                format!("embedding dim {} but bundle declares {}", e.dim(), self.embedding_dim),
                            ));
                        }
                    }
                    Record::AudioTags(_) => {}
                }
            }
        }
        Ok(())
    }
}

/// Read-only key-value backend over a loaded [`Bundle`].
#[derive(Debug, Clone)]
pub struct RecordedBackend {
    bundle: Bundle,
    root: PathBuf,
}

impl RecordedBackend {
    /// Wraps a bundle after validating it.
    pub fn new(bundle: Bundle, root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        bundle.validate(&root)?;
        Ok(RecordedBackend { bundle, root })
    }

    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    pub fn into_bundle(self) -> Bundle {
        self.bundle
    }

    fn lookup(&self, key: RecordKey) -> Result<&RecordEntry> {
        self.bundle.get(&key).ok_or(CmsfError::MissingRecord(key))
    }

    fn frame_dims_match(&self, frame: &FramePair) -> Result<()> {
        if let Some(f) = self.bundle.frames.get(&frame.frame_id) {
            if (f.width, f.height) != (frame.width, frame.height) {
                return Err(CmsfError::corrupt(
                    &self.root,
                    format!(
                        "frame {} recorded at {}x{} but requested at {}x{}",
                        frame.frame_id, f.width, f.height, frame.width, frame.height
                    ),
                ));
            }
        }
        Ok(())
    }

    fn boxes(&self, key: RecordKey) -> Result<Vec<ScoredBox>> {
        match &self.lookup(key)?.record {
            Record::Boxes(b) => Ok(b.clone()),
            _ => unreachable!("record types are checked on load"),
        }
    }
}

impl AudioTagger for RecordedBackend {
    fn tag_audio(&self, frame: &FramePair) -> Result<Vec<AudioTag>> {
        match &self.lookup(RecordKey::audio_tags(&frame.frame_id))?.record {
            Record::AudioTags(tags) => {
                let mut tags = tags.clone();
                sort_tags(&mut tags);
                Ok(tags)
            }
            _ => unreachable!("record types are checked on load"),
        }
    }
}

impl GroundedDetector for RecordedBackend {
    fn detect_grounded(&self, frame: &FramePair, phrases: &[String]) -> Result<Vec<ScoredBox>> {
        require_nonempty(phrases, "grounding phrases")?;
        let mut out = Vec::new();
        for phrase in phrases {
            out.extend(self.boxes(RecordKey::grounded(&frame.frame_id, phrase))?);
        }
        Ok(out)
    }
}

impl ProposalDetector for RecordedBackend {
    fn propose_class_agnostic(&self, frame: &FramePair) -> Result<Vec<ScoredBox>> {
        self.boxes(RecordKey::proposals(&frame.frame_id))
    }
}

impl PromptableSegmenter for RecordedBackend {
    fn segment(&self, frame: &FramePair, prompts: &[Prompt]) -> Result<Vec<MaskCandidate>> {
        require_nonempty(prompts, "segmentation prompts")?;
        self.frame_dims_match(frame)?;
        let mut out = Vec::new();
        for prompt in prompts {
            let entry = self.lookup(RecordKey::mask_candidates(frame, prompt))?;
            let Record::MaskCandidates(cands) = &entry.record else {
                unreachable!("record types are checked on load")
            };
            for c in cands {
                let mask = self.bundle.masks.get(&c.mask).ok_or_else(|| {
                    CmsfError::corrupt(self.root.join(&entry.path), format!("mask {} not in bundle", c.mask))
                })?;
                out.push(MaskCandidate {
                    mask: mask.clone(),
                    quality: c.quality,
                    prompt: *prompt,
                });
            }
        }
        Ok(out)
    }
}

impl JointEmbedder for RecordedBackend {
    fn embed(&self, frame: &FramePair, target: &EmbedTarget) -> Result<EmbeddingVector> {
        match &self.lookup(RecordKey::embedding(&frame.frame_id, target))?.record {
            Record::Embedding(e) => Ok(e.clone()),
            _ => unreachable!("record types are checked on load"),
        }
    }
}

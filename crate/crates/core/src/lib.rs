//! Training-free audio-visual segmentation by cross-modality semantic filtering.
//!
//! Recorded foundation-model outputs (audio tags, grounded and class-agnostic
//! boxes, promptable-segmentation masks, joint audio/image embeddings) are turned
//! into one binary mask per frame by one of three pipelines:
//!
//! * **AT-GDINO-SAM**: audio tags → grounded boxes → segmenter masks.
//! * **OWOD-BIND**: class-agnostic boxes filtered by audio/crop embedding similarity.
//! * **SAM-BIND**: grid-prompted masks, de-duplicated by NMS, filtered the same way.
//!
//! Predictions are scored with per-frame mIoU and F-measure.

pub mod backend;
pub mod embedding;
pub mod error;
pub mod evaluation;
pub mod fixtures;
pub mod frame;
pub mod geometry;
pub mod harness;
pub mod pipelines;

pub use backend::{Backend, MockBackend, RecordedBackend};
pub use embedding::{cosine_similarity, EmbeddingVector};
pub use error::{CmsfError, Result};
pub use evaluation::{evaluate_sequence, frame_fscore, EvalResult};
pub use frame::{FramePair, FRAME_SIZE};
pub use geometry::{box_iou, mask_iou, BinaryMask, BoundingBox, ScoredBox};
pub use harness::{load_bundle, load_dataset, write_bundle, Split};
pub use pipelines::{run_frame, run_sequence, PipelineConfig, Variant};

use std::path::PathBuf;

use thiserror::Error;

use crate::backend::RecordKey;

pub type Result<T, E = CmsfError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CmsfError {
    /// Two operands that must share dimensions do not.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Input that is well-typed but mathematically unusable (zero-norm embedding, inverted box).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no record for {0}")]
    MissingRecord(RecordKey),

    #[error("corrupt bundle at {path}: {reason}")]
    CorruptBundle { path: PathBuf, reason: String },

    #[error("failed to load {path}: {reason}")]
    Load { path: PathBuf, reason: String },

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<CmsfError>,
    },

    #[error("candidate {index}: {source}")]
    Candidate {
        index: usize,
        #[source]
        source: Box<CmsfError>,
    },

    /// Per-frame failures collected from a sequence run, in frame order.
    #[error("{} frame(s) failed; first: {}: {}", .0.len(), .0[0].0, .0[0].1)]
    Frames(Vec<(String, CmsfError)>),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("image error: {0}")]
    Image(#[from] image::ImageError),
}

impl CmsfError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CmsfError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn corrupt(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        CmsfError::CorruptBundle {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn load(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        CmsfError::Load {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        CmsfError::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CmsfError, Result};

/// How OWOD-BIND turns surviving boxes into a mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OwodMaskMode {
    /// Union of the rasterized boxes.
    #[default]
    RasterizeBoxes,
    /// Boxes prompt the segmenter; quality-filtered masks are unioned.
    SegmentBoxes,
}

/// Thresholds and switches shared by all pipeline variants.
///
/// Every threshold is compared strictly: a value passes when it is *above* the
/// threshold. Unknown JSON fields are rejected; missing ones take the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Audio tag probability threshold (AT-GDINO-SAM).
    pub tau_at: f64,
    /// Objectness threshold for class-agnostic proposals (OWOD-BIND).
    pub tau_bb: f64,
    /// Cosine similarity threshold against the audio embedding.
    pub tau_bind: f64,
    /// IoU above which NMS suppresses a lower-quality mask (SAM-BIND).
    pub nms_iou: f64,
    /// Minimum segmenter quality for a mask candidate to be used.
    pub quality_floor: f64,
    /// Point prompts per side of the SAM-BIND grid.
    pub grid_size: u32,
    pub owod_mask_mode: OwodMaskMode,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            tau_at: 0.5,
            tau_bb: 0.5,
            tau_bind: 0.7,
            nms_iou: 0.5,
            quality_floor: 0.88,
            grid_size: 16,
            owod_mask_mode: OwodMaskMode::RasterizeBoxes,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = [
            ("tau_at", self.tau_at),
            ("tau_bb", self.tau_bb),
            ("nms_iou", self.nms_iou),
            ("quality_floor", self.quality_floor),
        ];
        for (name, v) in unit {
            if !(0.0..=1.0).contains(&v) {
                return Err(CmsfError::InvalidConfig(format!("{name} = {v} outside [0, 1]")));
            }
        }
        if !(-1.0..=1.0).contains(&self.tau_bind) {
            return Err(CmsfError::InvalidConfig(format!(
                "tau_bind = {} outside [-1, 1]",
                self.tau_bind
            )));
        }
        if self.grid_size == 0 {
            return Err(CmsfError::InvalidConfig("grid_size must be positive".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: PipelineConfig =
            serde_json::from_str(text).map_err(|e| CmsfError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    AtGdinoSam,
    OwodBind,
    SamBind,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::AtGdinoSam, Variant::OwodBind, Variant::SamBind];

    /// Lower-case identifier used on the command line and in manifests.
    pub fn slug(&self) -> &'static str {
        match self {
            Variant::AtGdinoSam => "at-gdino-sam",
            Variant::OwodBind => "owod-bind",
            Variant::SamBind => "sam-bind",
        }
    }

    /// Name shown in report tables.
    pub fn display_name(&self) -> &'static str {
        match self {
            Variant::AtGdinoSam => "AT-GDINO-SAM",
            Variant::OwodBind => "OWOD-BIND",
            Variant::SamBind => "SAM-BIND",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for Variant {
    type Err = CmsfError;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.slug().eq_ignore_ascii_case(s) || v.display_name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CmsfError::InvalidValue(format!("unknown variant `{s}`")))
    }
}

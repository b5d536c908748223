use serde::{Deserialize, Serialize};

use crate::error::{CmsfError, Result};

/// Axis-aligned box in continuous pixel coordinates, origin at the top-left corner.
///
/// Construction guarantees finite coordinates and strictly positive area.
/// Coordinates may lie partly or wholly outside a frame; [`BoundingBox::is_non_negative`]
/// is checked separately wherever a box must describe a location inside an image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBox", into = "RawBox")]
pub struct BoundingBox {
    x_min: f64,
    y_min: f64,
    x_max: f64,
    y_max: f64,
}

#[derive(Serialize, Deserialize)]
struct RawBox {
    x_min: f64,
    y_min: f64,
    x_max: f64,
    y_max: f64,
}

impl TryFrom<RawBox> for BoundingBox {
    type Error = CmsfError;

    fn try_from(raw: RawBox) -> Result<Self> {
        BoundingBox::new(raw.x_min, raw.y_min, raw.x_max, raw.y_max)
    }
}

impl From<BoundingBox> for RawBox {
    fn from(b: BoundingBox) -> Self {
        RawBox {
            x_min: b.x_min,
            y_min: b.y_min,
            x_max: b.x_max,
            y_max: b.y_max,
        }
    }
}

impl BoundingBox {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<Self> {
        if ![x_min, y_min, x_max, y_max].iter().all(|v| v.is_finite()) {
            return Err(CmsfError::InvalidValue(format!(
                "box ({x_min}, {y_min}, {x_max}, {y_max}) has non-finite coordinates"
            )));
        }
        if !(x_min < x_max && y_min < y_max) {
            return Err(CmsfError::Degenerate(format!(
                "box ({x_min}, {y_min}, {x_max}, {y_max}) has no area"
            )));
        }
        Ok(BoundingBox {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn is_non_negative(&self) -> bool {
        self.x_min >= 0.0 && self.y_min >= 0.0
    }

    pub fn intersection_area(&self, other: &BoundingBox) -> f64 {
        let w = (self.x_max.min(other.x_max) - self.x_min.max(other.x_min)).max(0.0);
        let h = (self.y_max.min(other.y_max) - self.y_min.max(other.y_min)).max(0.0);
        w * h
    }

    /// Integer pixel rectangle `[x0, x1) × [y0, y1)` covered by this box inside a
    /// `width × height` frame: `[⌈x_min⌉, ⌈x_max⌉)` clamped, likewise for y.
    pub fn pixel_span(&self, width: u32, height: u32) -> PixelRect {
        let clamp = |v: f64, hi: u32| -> u32 { v.ceil().clamp(0.0, hi as f64) as u32 };
        PixelRect {
            x0: clamp(self.x_min, width),
            y0: clamp(self.y_min, height),
            x1: clamp(self.x_max, width),
            y1: clamp(self.y_max, height),
        }
    }

    /// Coordinates rounded to the nearest integer and clamped to the frame.
    pub fn rounded_rect(&self, width: u32, height: u32) -> PixelRect {
        let clamp = |v: f64, hi: u32| -> u32 { v.round().clamp(0.0, hi as f64) as u32 };
        PixelRect {
            x0: clamp(self.x_min, width),
            y0: clamp(self.y_min, height),
            x1: clamp(self.x_max, width),
            y1: clamp(self.y_max, height),
        }
    }
}

/// Half-open integer pixel rectangle. May be empty when clipped away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PixelRect {
    pub x0: u32,
    pub y0: u32,
    pub x1: u32,
    pub y1: u32,
}

impl PixelRect {
    pub fn is_empty(&self) -> bool {
        self.x0 >= self.x1 || self.y0 >= self.y1
    }

    pub fn pixel_count(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            (self.x1 - self.x0) as u64 * (self.y1 - self.y0) as u64
        }
    }

    pub fn to_box(&self) -> Option<BoundingBox> {
        BoundingBox::new(self.x0 as f64, self.y0 as f64, self.x1 as f64, self.y1 as f64).ok()
    }
}

impl std::fmt::Display for PixelRect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{},{}", self.x0, self.y0, self.x1, self.y1)
    }
}

/// A box with a confidence or objectness score in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScoredBox", into = "RawScoredBox")]
pub struct ScoredBox {
    pub bbox: BoundingBox,
    score: f64,
}

#[derive(Serialize, Deserialize)]
struct RawScoredBox {
    x_min: f64,
    y_min: f64,
    x_max: f64,
    y_max: f64,
    score: f64,
}

impl TryFrom<RawScoredBox> for ScoredBox {
    type Error = CmsfError;

    fn try_from(raw: RawScoredBox) -> Result<Self> {
        ScoredBox::new(
            BoundingBox::new(raw.x_min, raw.y_min, raw.x_max, raw.y_max)?,
            raw.score,
        )
    }
}

impl From<ScoredBox> for RawScoredBox {
    fn from(s: ScoredBox) -> Self {
        RawScoredBox {
            x_min: s.bbox.x_min,
            y_min: s.bbox.y_min,
            x_max: s.bbox.x_max,
            y_max: s.bbox.y_max,
            score: s.score,
        }
    }
}

impl ScoredBox {
    pub fn new(bbox: BoundingBox, score: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&score) {
            return Err(CmsfError::InvalidValue(format!(
                "box score {score} outside [0, 1]"
            )));
        }
        Ok(ScoredBox { bbox, score })
    }

    pub fn score(&self) -> f64 {
        self.score
    }
}

/// Intersection over union of two boxes; `0` when they are disjoint.
pub fn box_iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let inter = a.intersection_area(b);
    if inter <= 0.0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}

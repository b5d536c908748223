//! Box and binary-mask arithmetic: IoU, rasterization, union, tight boxes,
//! the run-length codec and greedy non-maximal suppression.
//!
//! Everything here is a pure function over immutable values.

mod bbox;
mod mask;
mod nms;

pub use bbox::{box_iou, BoundingBox, PixelRect, ScoredBox};
pub use mask::{mask_iou, mask_union, rasterize_box, BinaryMask, RleMask, FOREGROUND_LUMA};
pub use nms::{nms, nms_indices};

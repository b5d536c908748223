//! Dataset and bundle loading, and the frame resize policy.

mod bundle_io;
mod dataset;
mod resize;

pub use bundle_io::{
    directory_hash, load_bundle, write_bundle, BundleManifest, ManifestFrame, ManifestRecord,
    MANIFEST_FILE,
};
pub use dataset::{
    load_dataset, load_frame_image, load_gt_mask, DatasetIndex, Split, VideoEntry,
    FRAMES_PER_VIDEO,
};
pub use resize::{resize_image_bilinear, resize_mask_nearest, resize_policy};

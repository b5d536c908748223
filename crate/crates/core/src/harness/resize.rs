use image::imageops::{self, FilterType};
use image::RgbImage;

use crate::frame::FRAME_SIZE;
use crate::geometry::BinaryMask;

/// Nearest-neighbour resize: destination pixel `(x, y)` takes source pixel
/// `(⌊x·W_src / W_dst⌋, ⌊y·H_src / H_dst⌋)`.
pub fn resize_mask_nearest(mask: &BinaryMask, width: u32, height: u32) -> BinaryMask {
    if mask.dims() == (width, height) {
        return mask.clone();
    }
    let (sw, sh) = (mask.width() as u64, mask.height() as u64);
    BinaryMask::from_fn(width, height, |x, y| {
        let sx = (x as u64 * sw / width as u64) as u32;
        let sy = (y as u64 * sh / height as u64) as u32;
        mask.get(sx, sy)
    })
}

pub fn resize_image_bilinear(image: &RgbImage, width: u32, height: u32) -> RgbImage {
    if image.dimensions() == (width, height) {
        return image.clone();
    }
    imageops::resize(image, width, height, FilterType::Triangle)
}

/// Brings a frame and its ground truth to the standard `224 × 224` resolution:
/// bilinear for the image, nearest-neighbour for the mask so it stays binary.
pub fn resize_policy(image: &RgbImage, gt_mask: &BinaryMask) -> (RgbImage, BinaryMask) {
    (
        resize_image_bilinear(image, FRAME_SIZE, FRAME_SIZE),
        resize_mask_nearest(gt_mask, FRAME_SIZE, FRAME_SIZE),
    )
}

//! Seeded inputs shared by the benchmarks.

use cmsf_core::{BinaryMask, BoundingBox, ScoredBox};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A mask made of `blobs` random rectangles, the shape segmenter output tends to have.
pub fn blob_mask(rng: &mut ChaCha8Rng, width: u32, height: u32, blobs: usize) -> BinaryMask {
    let rects: Vec<(u32, u32, u32, u32)> = (0..blobs)
        .map(|_| {
            let x0 = rng.random_range(0..width);
            let y0 = rng.random_range(0..height);
            (x0, y0, rng.random_range(x0..=width), rng.random_range(y0..=height))
        })
        .collect();
    BinaryMask::from_fn(width, height, |x, y| {
        rects.iter().any(|&(x0, y0, x1, y1)| x >= x0 && x < x1 && y >= y0 && y < y1)
    })
}

pub fn scored_boxes(rng: &mut ChaCha8Rng, n: usize, extent: f64) -> Vec<ScoredBox> {
    (0..n)
        .map(|_| {
            let x = rng.random_range(0.0..extent * 0.8);
            let y = rng.random_range(0.0..extent * 0.8);
            let w = rng.random_range(4.0..extent * 0.3);
            let h = rng.random_range(4.0..extent * 0.3);
            let b = BoundingBox::new(x, y, x + w, y + h).expect("positive size");
            ScoredBox::new(b, rng.random_range(0.0..=1.0)).expect("score in range")
        })
        .collect()
}

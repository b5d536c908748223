use std::io::Cursor;
use std::path::Path;

use image::{GrayImage, ImageFormat, Luma};
use serde::{Deserialize, Serialize};

use super::bbox::{BoundingBox, PixelRect};
use crate::error::{CmsfError, Result};

/// Pixel value written for foreground when a mask is stored as an 8-bit image.
pub const FOREGROUND_LUMA: u8 = 255;

/// Run-length form of a [`BinaryMask`]: alternating background / foreground run
/// lengths in row-major order, always starting with a (possibly empty) background run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RleMask {
    pub width: u32,
    pub height: u32,
    pub runs: Vec<u64>,
}

/// An `H × W` binary pixel-label mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RleMask", into = "RleMask")]
pub struct BinaryMask {
    width: u32,
    height: u32,
    pixels: Vec<bool>,
}

impl TryFrom<RleMask> for BinaryMask {
    type Error = CmsfError;

    fn try_from(rle: RleMask) -> Result<Self> {
        BinaryMask::from_rle(&rle)
    }
}

impl From<BinaryMask> for RleMask {
    fn from(m: BinaryMask) -> Self {
        m.to_rle()
    }
}

impl BinaryMask {
    pub fn empty(width: u32, height: u32) -> Self {
        BinaryMask {
            width,
            height,
            pixels: vec![false; width as usize * height as usize],
        }
    }

    pub fn full(width: u32, height: u32) -> Self {
        BinaryMask {
            width,
            height,
            pixels: vec![true; width as usize * height as usize],
        }
    }

    /// Builds a mask from row-major pixels.
    pub fn from_pixels(width: u32, height: u32, pixels: Vec<bool>) -> Result<Self> {
        if pixels.len() != width as usize * height as usize {
            return Err(CmsfError::Shape(format!(
                "{} pixels supplied for a {width}x{height} mask",
                pixels.len()
            )));
        }
        Ok(BinaryMask {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> bool) -> Self {
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        BinaryMask {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[bool] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.pixels[self.offset(x, y)]
    }

    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        let i = self.offset(x, y);
        self.pixels[i] = value;
    }

    fn offset(&self, x: u32, y: u32) -> usize {
        assert!(x < self.width && y < self.height, "pixel ({x}, {y}) out of range");
        y as usize * self.width as usize + x as usize
    }

    pub fn foreground_count(&self) -> u64 {
        self.pixels.iter().filter(|&&p| p).count() as u64
    }

    pub fn has_foreground(&self) -> bool {
        self.pixels.iter().any(|&p| p)
    }

    /// Iterates foreground pixel coordinates in row-major order.
    pub fn foreground(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.width as usize;
        self.pixels
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(move |(i, _)| ((i % w) as u32, (i / w) as u32))
    }

    pub fn complement(&self) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|p| !p).collect(),
        }
    }

    pub(crate) fn check_same_shape(&self, other: &BinaryMask) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(CmsfError::Shape(format!(
                "mask {}x{} vs {}x{}",
                self.width, self.height, other.width, other.height
            )));
        }
        Ok(())
    }

    /// Sets every pixel of `other` that is foreground. Dimensions must match.
    pub fn union_with(&mut self, other: &BinaryMask) -> Result<()> {
        self.check_same_shape(other)?;
        for (p, &q) in self.pixels.iter_mut().zip(&other.pixels) {
            *p |= q;
        }
        Ok(())
    }

    /// `true` when every foreground pixel of `self` is foreground in `other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> Result<bool> {
        self.check_same_shape(other)?;
        Ok(self.pixels.iter().zip(&other.pixels).all(|(&a, &b)| !a || b))
    }

    pub fn to_rle(&self) -> RleMask {
        let mut runs = Vec::new();
        let mut current = false;
        let mut len = 0u64;
        for &p in &self.pixels {
            if p != current {
                runs.push(len);
                current = p;
                len = 0;
            }
            len += 1;
        }
        if len > 0 || runs.is_empty() {
            runs.push(len);
        }
        RleMask {
            width: self.width,
            height: self.height,
            runs,
        }
    }

    pub fn from_rle(rle: &RleMask) -> Result<Self> {
        let total = rle.width as u64 * rle.height as u64;
        let sum = rle
            .runs
            .iter()
            .try_fold(0u64, |acc, &r| acc.checked_add(r))
            .ok_or_else(|| CmsfError::InvalidValue("RLE run lengths overflow".into()))?;
        if sum != total {
            return Err(CmsfError::Shape(format!(
                "RLE runs sum to {sum}, expected {}x{} = {total}",
                rle.width, rle.height
            )));
        }
        let mut pixels = Vec::with_capacity(total as usize);
        for (i, &run) in rle.runs.iter().enumerate() {
            let fg = i % 2 == 1;
            pixels.extend(std::iter::repeat_n(fg, run as usize));
        }
        Ok(BinaryMask {
            width: rle.width,
            height: rle.height,
            pixels,
        })
    }

    pub fn to_luma(&self) -> GrayImage {
        GrayImage::from_fn(self.width, self.height, |x, y| {
            Luma([if self.get(x, y) { FOREGROUND_LUMA } else { 0 }])
        })
    }

    /// Converts a grayscale image; values above 127 count as foreground.
    pub fn from_luma(img: &GrayImage) -> Self {
        BinaryMask {
            width: img.width(),
            height: img.height(),
            pixels: img.pixels().map(|p| p.0[0] > 127).collect(),
        }
    }

    pub fn to_png_bytes(&self) -> Result<Vec<u8>> {
        if self.width == 0 || self.height == 0 {
            return Err(CmsfError::Shape("cannot encode a zero-sized mask as PNG".into()));
        }
        let mut buf = Cursor::new(Vec::new());
        self.to_luma().write_to(&mut buf, ImageFormat::Png)?;
        Ok(buf.into_inner())
    }

    pub fn from_png_bytes(bytes: &[u8]) -> Result<Self> {
        let img = image::load_from_memory_with_format(bytes, ImageFormat::Png)?;
        Ok(Self::from_luma(&img.to_luma8()))
    }

    pub fn read_png(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| CmsfError::io(path, e))?;
        Self::from_png_bytes(&bytes).map_err(|e| CmsfError::load(path, e.to_string()))
    }

    pub fn write_png(&self, path: &Path) -> Result<()> {
        let bytes = self.to_png_bytes()?;
        std::fs::write(path, bytes).map_err(|e| CmsfError::io(path, e))
    }

    /// Smallest box covering all foreground pixels, `None` when the mask is empty.
    pub fn tight_bbox(&self) -> Option<BoundingBox> {
        self.tight_rect().and_then(|r| r.to_box())
    }

    pub fn tight_rect(&self) -> Option<PixelRect> {
        let mut rect: Option<PixelRect> = None;
        for (x, y) in self.foreground() {
            let r = rect.get_or_insert(PixelRect {
                x0: x,
                y0: y,
                x1: x + 1,
                y1: y + 1,
            });
            r.x0 = r.x0.min(x);
            r.x1 = r.x1.max(x + 1);
            r.y1 = r.y1.max(y + 1);
        }
        rect
    }
}

/// Intersection over union of two masks. Two empty masks score `1.0`.
pub fn mask_iou(a: &BinaryMask, b: &BinaryMask) -> Result<f64> {
    a.check_same_shape(b)?;
    let (mut inter, mut union) = (0u64, 0u64);
    for (&p, &q) in a.pixels.iter().zip(&b.pixels) {
        inter += (p && q) as u64;
        union += (p || q) as u64;
    }
    if union == 0 {
        return Ok(1.0);
    }
    Ok(inter as f64 / union as f64)
}

/// Pixels `[⌈x_min⌉, ⌈x_max⌉) × [⌈y_min⌉, ⌈y_max⌉)` of the frame, clipped.
pub fn rasterize_box(bbox: &BoundingBox, width: u32, height: u32) -> BinaryMask {
    let span = bbox.pixel_span(width, height);
    let mut mask = BinaryMask::empty(width, height);
    if span.is_empty() {
        return mask;
    }
    let w = width as usize;
    for y in span.y0..span.y1 {
        let row = y as usize * w;
        mask.pixels[row + span.x0 as usize..row + span.x1 as usize].fill(true);
    }
    mask
}

/// Pixelwise OR of `masks`; an empty input yields the empty `width × height` mask.
pub fn mask_union<'a, I>(width: u32, height: u32, masks: I) -> Result<BinaryMask>
where
    I: IntoIterator<Item = &'a BinaryMask>,
{
    let mut out = BinaryMask::empty(width, height);
    for m in masks {
        out.union_with(m)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(bits: &str) -> BinaryMask {
        let pixels: Vec<bool> = bits.chars().map(|c| c == '1').collect();
        BinaryMask::from_pixels(pixels.len() as u32, 1, pixels).unwrap()
    }

    #[test]
    fn iou_examples() {
        let a = row("1100");
        assert_eq!(mask_iou(&a, &a).unwrap(), 1.0);
        assert_eq!(mask_iou(&row("0000"), &a).unwrap(), 0.0);
        assert!((mask_iou(&a, &row("0110")).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(mask_iou(&row("0000"), &row("0000")).unwrap(), 1.0);
    }

    #[test]
    fn iou_rejects_dimension_mismatch() {
        let err = mask_iou(&row("1100"), &row("110")).unwrap_err();
        assert!(matches!(err, CmsfError::Shape(_)));
    }

    #[test]
    fn rasterize_examples() {
        let b = BoundingBox::new(0.0, 0.0, 4.0, 4.0).unwrap();
        assert_eq!(rasterize_box(&b, 4, 4), BinaryMask::full(4, 4));
        let b = BoundingBox::new(-5.0, -5.0, 0.0, 0.0).unwrap();
        assert!(!rasterize_box(&b, 4, 4).has_foreground());
        let b = BoundingBox::new(1.0, 1.0, 3.0, 2.0).unwrap();
        let fg: Vec<_> = rasterize_box(&b, 4, 4).foreground().collect();
        assert_eq!(fg, vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn tight_bbox_examples() {
        assert_eq!(
            BinaryMask::full(5, 3).tight_bbox(),
            Some(BoundingBox::new(0.0, 0.0, 5.0, 3.0).unwrap())
        );
        assert_eq!(BinaryMask::empty(5, 3).tight_bbox(), None);
        let mut m = BinaryMask::empty(6, 6);
        m.set(2, 3, true);
        assert_eq!(m.tight_bbox(), Some(BoundingBox::new(2.0, 3.0, 3.0, 4.0).unwrap()));
    }

    #[test]
    fn union_examples() {
        let m = row("1010");
        assert_eq!(mask_union(4, 1, [&m]).unwrap(), m);
        assert_eq!(
            mask_union(4, 1, [&m, &m.complement()]).unwrap(),
            BinaryMask::full(4, 1)
        );
        assert_eq!(mask_union(4, 1, []).unwrap(), BinaryMask::empty(4, 1));
        assert!(matches!(
            mask_union(4, 1, [&row("101")]),
            Err(CmsfError::Shape(_))
        ));
    }

    #[test]
    fn rle_conventions() {
        assert_eq!(row("0011").to_rle().runs, vec![2, 2]);
        assert_eq!(row("1100").to_rle().runs, vec![0, 2, 2]);
        assert_eq!(row("0000").to_rle().runs, vec![4]);
        assert_eq!(row("1111").to_rle().runs, vec![0, 4]);
        let bad = RleMask {
            width: 2,
            height: 2,
            runs: vec![1, 2],
        };
        assert!(matches!(BinaryMask::from_rle(&bad), Err(CmsfError::Shape(_))));
    }

    #[test]
    fn rle_json_shape() {
        let json = serde_json::to_string(&row("0110")).unwrap();
        assert_eq!(json, r#"{"width":4,"height":1,"runs":[1,2,1]}"#);
        let back: BinaryMask = serde_json::from_str(&json).unwrap();
        assert_eq!(back, row("0110"));
    }

    #[test]
    fn png_round_trip_is_exact() {
        let m = BinaryMask::from_fn(7, 5, |x, y| (x * 3 + y) % 4 == 0);
        let bytes = m.to_png_bytes().unwrap();
        assert_eq!(BinaryMask::from_png_bytes(&bytes).unwrap(), m);
        let luma = m.to_luma();
        assert!(luma.pixels().all(|p| p.0[0] == 0 || p.0[0] == 255));
    }
}

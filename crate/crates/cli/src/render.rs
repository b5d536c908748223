use anyhow::{bail, Context, Result};
use cmsf_core::BinaryMask;
use image::{Rgb, RgbImage};

use crate::RenderArgs;

const TINT: [u8; 3] = [255, 0, 0];
const ALPHA: f64 = 0.5;

/// Blends `TINT` over every foreground pixel; background pixels are untouched.
pub fn overlay(image: &RgbImage, mask: &BinaryMask) -> Result<RgbImage> {
    if image.dimensions() != mask.dims() {
        bail!(
            "image is {}x{} but mask is {}x{}",
            image.width(),
            image.height(),
            mask.width(),
            mask.height()
        );
    }
    let mut out = image.clone();
    for (x, y) in mask.foreground() {
        let Rgb(px) = *image.get_pixel(x, y);
        let blended: [u8; 3] =
            std::array::from_fn(|c| ((1.0 - ALPHA) * px[c] as f64 + ALPHA * TINT[c] as f64).round() as u8);
        out.put_pixel(x, y, Rgb(blended));
    }
    Ok(out)
}

pub fn cmd_render(args: &RenderArgs) -> Result<()> {
    let image = image::open(&args.image)
        .with_context(|| format!("reading image {}", args.image.display()))?
        .to_rgb8();
    let mask = BinaryMask::read_png(&args.mask)?;
    let out = overlay(&image, &mask)?;
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    out.save_with_format(&args.out, image::ImageFormat::Png)
        .with_context(|| format!("writing {}", args.out.display()))
}

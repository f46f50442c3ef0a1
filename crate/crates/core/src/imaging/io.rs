use std::path::Path;

use image::{ColorType, DynamicImage};

use super::buffer::ImageBuffer;
use crate::error::{Error, Result};

/// Reads a PNG or JPEG. Images with alpha load as RGBA, everything else as RGB.
pub fn read_image(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let path = path.as_ref();
    let dynamic = image::open(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })?;
    from_dynamic(dynamic)
}

fn from_dynamic(img: DynamicImage) -> Result<ImageBuffer> {
    let (w, h) = (img.width(), img.height());
    if img.color().has_alpha() {
        ImageBuffer::new(w, h, 4, img.into_rgba8().into_raw())
    } else {
        ImageBuffer::new(w, h, 3, img.into_rgb8().into_raw())
    }
}

/// Writes a PNG. Single-channel planes are stored as 8-bit grayscale.
pub fn write_png(path: impl AsRef<Path>, img: &ImageBuffer) -> Result<()> {
    let path = path.as_ref();
    let color = match img.channels() {
        1 => ColorType::L8,
        3 => ColorType::Rgb8,
        _ => ColorType::Rgba8,
    };
    image::save_buffer_with_format(
        path,
        img.data(),
        img.width(),
        img.height(),
        color,
        image::ImageFormat::Png,
    )
    .map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

use super::buffer::{store_u8, ImageBuffer};
use crate::error::{Error, Result};

/// Straight-alpha "over": out = a * fg + (1 - a) * bg with a = A / 255.
pub fn composite_alpha(fg: &ImageBuffer, bg: &ImageBuffer) -> Result<ImageBuffer> {
    if !fg.has_alpha() {
        return Err(Error::invalid("foreground must be RGBA"));
    }
    if bg.channels() < 3 {
        return Err(Error::invalid("background must be RGB"));
    }
    if fg.dimensions() != bg.dimensions() {
        return Err(Error::invalid(format!(
            "composite size mismatch: fg {:?} vs bg {:?}",
            fg.dimensions(),
            bg.dimensions()
        )));
    }
    let mut data = Vec::with_capacity(fg.pixel_count() * 3);
    for (f, b) in fg.pixels().zip(bg.pixels()) {
        match f[3] {
            0 => data.extend_from_slice(&b[..3]),
            255 => data.extend_from_slice(&f[..3]),
            alpha => {
                let a = alpha as f64 / 255.0;
                for ch in 0..3 {
                    data.push(store_u8(a * f[ch] as f64 + (1.0 - a) * b[ch] as f64));
                }
            }
        }
    }
    ImageBuffer::new(fg.width(), fg.height(), 3, data)
}

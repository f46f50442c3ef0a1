use crate::error::{Error, Result};
use crate::imaging::{gaussian_blur_masked, BlurKernel, ImageBuffer};

/// Alpha at or above this value counts as inside the mask footprint.
pub const FOOTPRINT_THRESHOLD: u8 = 128;

/// Pixels whose (2r+1)^2 window, r = (beta - 1) / 2, holds both footprint and
/// non-footprint pixels, i.e. everything within Chebyshev distance r of the
/// binary edge. Returned as a 0/255 plane.
pub fn boundary_band(footprint: &ImageBuffer, beta: usize) -> Result<ImageBuffer> {
    let kernel = BlurKernel::new(beta)?;
    if footprint.channels() != 1 {
        return Err(Error::invalid("footprint must be a single-channel plane"));
    }
    let (w, h) = (footprint.width() as usize, footprint.height() as usize);
    let r = kernel.radius();
    if r == 0 {
        return ImageBuffer::filled(w as u32, h as u32, &[0]);
    }
    // summed-area table of the binary footprint
    let mut sat = vec![0u32; (w + 1) * (h + 1)];
    for y in 0..h {
        let mut row = 0u32;
        for x in 0..w {
            row += (footprint.data()[y * w + x] >= FOOTPRINT_THRESHOLD) as u32;
            sat[(y + 1) * (w + 1) + x + 1] = sat[y * (w + 1) + x + 1] + row;
        }
    }
    let mut out = vec![0u8; w * h];
    for y in 0..h {
        let (y0, y1) = (y.saturating_sub(r), (y + r).min(h - 1) + 1);
        for x in 0..w {
            let (x0, x1) = (x.saturating_sub(r), (x + r).min(w - 1) + 1);
            let ones = sat[y1 * (w + 1) + x1] + sat[y0 * (w + 1) + x0]
                - sat[y0 * (w + 1) + x1]
                - sat[y1 * (w + 1) + x0];
            let area = ((y1 - y0) * (x1 - x0)) as u32;
            if ones > 0 && ones < area {
                out[y * w + x] = 255;
            }
        }
    }
    ImageBuffer::new(w as u32, h as u32, 1, out)
}

/// Replaces the boundary band of `img` with its Gaussian-blurred values; all
/// other pixels are returned untouched.
pub fn blur_boundary(img: &ImageBuffer, footprint: &ImageBuffer, beta: usize) -> Result<ImageBuffer> {
    if footprint.dimensions() != img.dimensions() {
        return Err(Error::invalid("footprint and image sizes differ"));
    }
    let band = boundary_band(footprint, beta)?;
    if band.data().iter().all(|&v| v == 0) {
        return Ok(img.clone());
    }
    gaussian_blur_masked(img, beta, &band)
}

use super::buffer::{store_u8, ImageBuffer};
use crate::error::{Error, Result};

/// Normalized 1-D Gaussian kernel of odd size.
#[derive(Debug, Clone, PartialEq)]
pub struct BlurKernel {
    size: usize,
    sigma: f64,
    coeffs: Vec<f64>,
}

impl BlurKernel {
    /// Builds the kernel for size `size` with sigma = 0.3 * ((size - 1) / 2 - 1) + 0.8.
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size % 2 == 0 {
            return Err(Error::invalid(format!(
                "blur kernel size must be odd and positive, got {size}"
            )));
        }
        let sigma = 0.3 * ((size as f64 - 1.0) * 0.5 - 1.0) + 0.8;
        let radius = (size / 2) as i64;
        let raw: Vec<f64> = (-radius..=radius)
            .map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp())
            .collect();
        let sum: f64 = raw.iter().sum();
        let coeffs = raw.into_iter().map(|c| c / sum).collect();
        Ok(Self {
            size,
            sigma,
            coeffs,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        self.size / 2
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Mirror index into `0..n` with the edge sample repeated (`cba|abc`).
#[inline]
fn reflect(mut i: i64, n: i64) -> usize {
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - i - 1;
        } else {
            return i as usize;
        }
    }
}

/// Separable Gaussian blur with reflect borders. All channels are filtered.
pub fn gaussian_blur(img: &ImageBuffer, kernel_size: usize) -> Result<ImageBuffer> {
    let kernel = BlurKernel::new(kernel_size)?;
    if kernel.size() == 1 {
        return Ok(img.clone());
    }
    let (w, h) = (img.width() as usize, img.height() as usize);
    let c = img.channels();
    let r = kernel.radius() as i64;
    let k = kernel.coefficients();
    let src = img.data();

    let mut horiz = vec![0f64; w * h * c];
    for y in 0..h {
        let row = &src[y * w * c..(y + 1) * w * c];
        for x in 0..w {
            for ch in 0..c {
                let mut acc = 0.0;
                for (j, &coef) in k.iter().enumerate() {
                    let sx = reflect(x as i64 + j as i64 - r, w as i64);
                    acc += coef * row[sx * c + ch] as f64;
                }
                horiz[(y * w + x) * c + ch] = acc;
            }
        }
    }

    let mut out = vec![0u8; w * h * c];
    for y in 0..h {
        for x in 0..w {
            for ch in 0..c {
                let mut acc = 0.0;
                for (j, &coef) in k.iter().enumerate() {
                    let sy = reflect(y as i64 + j as i64 - r, h as i64);
                    acc += coef * horiz[(sy * w + x) * c + ch];
                }
                out[(y * w + x) * c + ch] = store_u8(acc);
            }
        }
    }
    ImageBuffer::new(img.width(), img.height(), c, out)
}

/// Gaussian blur evaluated only where `region` (a single-channel plane) is
/// nonzero; other pixels are copied from `img`. Blurred pixels are bit-identical
/// to [`gaussian_blur`].
pub fn gaussian_blur_masked(
    img: &ImageBuffer,
    kernel_size: usize,
    region: &ImageBuffer,
) -> Result<ImageBuffer> {
    let kernel = BlurKernel::new(kernel_size)?;
    if region.channels() != 1 || region.dimensions() != img.dimensions() {
        return Err(Error::invalid("blur region must be a single-channel plane matching the image"));
    }
    let mut out = img.clone();
    if kernel.size() == 1 {
        return Ok(out);
    }
    let (w, h) = (img.width() as usize, img.height() as usize);
    let c = img.channels();
    let r = kernel.radius() as i64;
    let k = kernel.coefficients();
    let src = img.data();
    let mut rows = vec![0f64; k.len()];
    for (idx, _) in region.data().iter().enumerate().filter(|(_, &v)| v != 0) {
        let (x, y) = ((idx % w) as i64, (idx / w) as i64);
        for ch in 0..c {
            for (j, row) in rows.iter_mut().enumerate() {
                let sy = reflect(y + j as i64 - r, h as i64);
                let mut acc = 0.0;
                for (i, &coef) in k.iter().enumerate() {
                    let sx = reflect(x + i as i64 - r, w as i64);
                    acc += coef * src[(sy * w + sx) * c + ch] as f64;
                }
                *row = acc;
            }
            let mut acc = 0.0;
            for (&coef, &row) in k.iter().zip(&rows) {
                acc += coef * row;
            }
            out.data_mut()[idx * c + ch] = store_u8(acc);
        }
    }
    Ok(out)
}

use std::fmt;

use crate::error::{Error, Result};

/// Row-major 8-bit raster with 1 (gray/alpha), 3 (RGB) or 4 (RGBA) channels.
///
/// Channel order is fixed to R,G,B[,A]; an alpha of 255 is fully opaque.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ImageBuffer {
    width: u32,
    height: u32,
    channels: usize,
    data: Vec<u8>,
}

impl ImageBuffer {
    pub fn new(width: u32, height: u32, channels: usize, data: Vec<u8>) -> Result<Self> {
        check_dims(width, height, channels)?;
        let expected = width as usize * height as usize * channels;
        if data.len() != expected {
            return Err(Error::invalid(format!(
                "buffer of {width}x{height}x{channels} needs {expected} samples, got {}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    /// An image where every pixel equals `pixel`; the channel count is `pixel.len()`.
    pub fn filled(width: u32, height: u32, pixel: &[u8]) -> Result<Self> {
        check_dims(width, height, pixel.len())?;
        let data = pixel
            .iter()
            .copied()
            .cycle()
            .take(width as usize * height as usize * pixel.len())
            .collect();
        Ok(Self {
            width,
            height,
            channels: pixel.len(),
            data,
        })
    }

    /// Fully transparent RGBA canvas.
    pub fn transparent(width: u32, height: u32) -> Result<Self> {
        Self::filled(width, height, &[0, 0, 0, 0])
    }

    pub fn from_fn<F>(width: u32, height: u32, channels: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(u32, u32, &mut [u8]),
    {
        check_dims(width, height, channels)?;
        let mut data = vec![0u8; width as usize * height as usize * channels];
        for (i, px) in data.chunks_exact_mut(channels).enumerate() {
            let x = (i % width as usize) as u32;
            let y = (i / width as usize) as u32;
            f(x, y, px);
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn has_alpha(&self) -> bool {
        self.channels == 4
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    #[inline]
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    fn offset(&self, x: u32, y: u32) -> usize {
        (y as usize * self.width as usize + x as usize) * self.channels
    }

    #[inline]
    pub fn pixel(&self, x: u32, y: u32) -> &[u8] {
        let o = self.offset(x, y);
        &self.data[o..o + self.channels]
    }

    #[inline]
    pub fn pixel_mut(&mut self, x: u32, y: u32) -> &mut [u8] {
        let o = self.offset(x, y);
        let c = self.channels;
        &mut self.data[o..o + c]
    }

    pub fn pixels(&self) -> impl Iterator<Item = &[u8]> {
        self.data.chunks_exact(self.channels)
    }

    /// Single-channel copy of channel `c`.
    pub fn channel_plane(&self, c: usize) -> Result<ImageBuffer> {
        if c >= self.channels {
            return Err(Error::invalid(format!(
                "channel {c} out of range for a {}-channel image",
                self.channels
            )));
        }
        let data = self.pixels().map(|p| p[c]).collect();
        ImageBuffer::new(self.width, self.height, 1, data)
    }

    /// The alpha channel as a single-channel plane.
    pub fn alpha_plane(&self) -> Result<ImageBuffer> {
        if !self.has_alpha() {
            return Err(Error::invalid("image has no alpha channel"));
        }
        self.channel_plane(3)
    }

    /// Drops alpha (if any); gray planes are expanded to RGB.
    pub fn to_rgb(&self) -> ImageBuffer {
        let data = match self.channels {
            3 => self.data.clone(),
            4 => self.pixels().flat_map(|p| [p[0], p[1], p[2]]).collect(),
            _ => self.data.iter().flat_map(|&v| [v, v, v]).collect(),
        };
        ImageBuffer {
            width: self.width,
            height: self.height,
            channels: 3,
            data,
        }
    }

    /// Adds an opaque alpha channel to an RGB image; RGBA images are copied as is.
    pub fn to_rgba(&self) -> ImageBuffer {
        let data = match self.channels {
            4 => self.data.clone(),
            3 => self.pixels().flat_map(|p| [p[0], p[1], p[2], 255]).collect(),
            _ => self.data.iter().flat_map(|&v| [v, v, v, 255]).collect(),
        };
        ImageBuffer {
            width: self.width,
            height: self.height,
            channels: 4,
            data,
        }
    }

    /// Count of samples in a single-channel plane that are at least `threshold`.
    pub fn count_at_least(&self, threshold: u8) -> usize {
        self.data.iter().filter(|&&v| v >= threshold).count()
    }

    /// Per-channel arithmetic mean.
    pub fn channel_means(&self) -> Vec<f64> {
        let mut sums = vec![0f64; self.channels];
        for p in self.pixels() {
            for (s, &v) in sums.iter_mut().zip(p) {
                *s += v as f64;
            }
        }
        let n = self.pixel_count() as f64;
        sums.into_iter().map(|s| s / n).collect()
    }
}

impl fmt::Debug for ImageBuffer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImageBuffer")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("channels", &self.channels)
            .finish_non_exhaustive()
    }
}

fn check_dims(width: u32, height: u32, channels: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::invalid(format!(
            "image dimensions must be positive, got {width}x{height}"
        )));
    }
    if !matches!(channels, 1 | 3 | 4) {
        return Err(Error::invalid(format!(
            "unsupported channel count {channels} (expected 1, 3 or 4)"
        )));
    }
    Ok(())
}

/// Final 8-bit store: round half away from zero, then clamp.
#[inline]
pub(crate) fn store_u8(v: f64) -> u8 {
    // clamp first; for non-negative input, truncate-and-compare is an exact
    // half-away-from-zero rounding without the libm call
    let c = v.clamp(0.0, 255.0);
    let i = c as u32;
    (i + (c - i as f64 >= 0.5) as u32) as u8
}

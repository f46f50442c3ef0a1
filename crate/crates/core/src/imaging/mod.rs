//! Pixel-level primitives: the raster type, bilinear resize, sRGB/Lab
//! conversion, separable Gaussian blur and alpha compositing.

mod blur;
mod buffer;
mod color;
mod composite;
mod io;
mod resize;

pub use blur::{gaussian_blur, gaussian_blur_masked, BlurKernel};
pub use buffer::ImageBuffer;
pub(crate) use buffer::store_u8;
pub use color::{lab_to_rgb, lab_to_srgb, rgb_to_lab, srgb_lightness, srgb_to_lab, LabImage, LabPixel};
pub use composite::composite_alpha;
pub use io::{read_image, write_png};
pub use resize::{resize_bilinear, resize_support};

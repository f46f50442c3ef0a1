//! sRGB (D65) <-> CIE L*a*b* conversion.

use std::sync::OnceLock;

use super::buffer::ImageBuffer;
use crate::error::{Error, Result};

/// D65 reference white, Y normalized to 1.
const WHITE: [f64; 3] = [0.95047, 1.0, 1.08883];

const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

const XYZ_TO_RGB: [[f64; 3]; 3] = [
    [3.2404542, -1.5371385, -0.4985314],
    [-0.9692660, 1.8760108, 0.0415560],
    [0.0556434, -0.2040259, 1.0572252],
];

const DELTA: f64 = 6.0 / 29.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LabPixel {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

/// A plane of Lab pixels, with the source alpha carried along untouched.
#[derive(Debug, Clone, PartialEq)]
pub struct LabImage {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<LabPixel>,
    pub alpha: Option<Vec<u8>>,
}

fn srgb_decode(c: u8) -> f64 {
    let c = c as f64 / 255.0;
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

#[inline]
fn srgb_to_linear(c: u8) -> f64 {
    static TABLE: OnceLock<[f64; 256]> = OnceLock::new();
    TABLE.get_or_init(|| std::array::from_fn(|i| srgb_decode(i as u8)))[c as usize]
}

/// Linear value at which the rounded 8-bit encoding steps from `k` to `k + 1`.
fn encode_threshold(k: usize) -> f64 {
    let v = (k as f64 + 0.5) / 255.0;
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

/// Linear light to a rounded 8-bit sRGB value, clamped to [0, 255].
#[inline]
fn linear_to_srgb_u8(c: f64) -> u8 {
    static STEPS: OnceLock<[f64; 255]> = OnceLock::new();
    let steps = STEPS.get_or_init(|| std::array::from_fn(encode_threshold));
    steps.partition_point(|&t| t <= c) as u8
}

#[inline]
fn lab_f(t: f64) -> f64 {
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

#[inline]
fn lab_f_inv(t: f64) -> f64 {
    if t > DELTA {
        t * t * t
    } else {
        3.0 * DELTA * DELTA * (t - 4.0 / 29.0)
    }
}

fn mul(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

/// Converts one 8-bit sRGB triple to Lab.
pub fn srgb_to_lab(rgb: [u8; 3]) -> LabPixel {
    let lin = rgb.map(srgb_to_linear);
    let xyz = mul(&RGB_TO_XYZ, lin);
    let fx = lab_f(xyz[0] / WHITE[0]);
    let fy = lab_f(xyz[1] / WHITE[1]);
    let fz = lab_f(xyz[2] / WHITE[2]);
    LabPixel {
        l: 116.0 * fy - 16.0,
        a: 500.0 * (fx - fy),
        b: 200.0 * (fy - fz),
    }
}

/// L* of one 8-bit sRGB triple; equals `srgb_to_lab(rgb).l`.
pub fn srgb_lightness(rgb: [u8; 3]) -> f64 {
    let lin = rgb.map(srgb_to_linear);
    let m = &RGB_TO_XYZ[1];
    let y = m[0] * lin[0] + m[1] * lin[1] + m[2] * lin[2];
    116.0 * lab_f(y / WHITE[1]) - 16.0
}

/// Converts Lab back to 8-bit sRGB; out-of-gamut colors are clamped per channel.
pub fn lab_to_srgb(lab: LabPixel) -> [u8; 3] {
    let fy = (lab.l + 16.0) / 116.0;
    let fx = fy + lab.a / 500.0;
    let fz = fy - lab.b / 200.0;
    let xyz = [
        WHITE[0] * lab_f_inv(fx),
        WHITE[1] * lab_f_inv(fy),
        WHITE[2] * lab_f_inv(fz),
    ];
    mul(&XYZ_TO_RGB, xyz).map(linear_to_srgb_u8)
}

pub fn rgb_to_lab(img: &ImageBuffer) -> Result<LabImage> {
    if img.channels() < 3 {
        return Err(Error::invalid("Lab conversion needs an RGB or RGBA image"));
    }
    let pixels = img.pixels().map(|p| srgb_to_lab([p[0], p[1], p[2]])).collect();
    let alpha = img.has_alpha().then(|| img.pixels().map(|p| p[3]).collect());
    Ok(LabImage {
        width: img.width(),
        height: img.height(),
        pixels,
        alpha,
    })
}

pub fn lab_to_rgb(lab: &LabImage) -> Result<ImageBuffer> {
    let n = lab.width as usize * lab.height as usize;
    if lab.pixels.len() != n || lab.alpha.as_ref().is_some_and(|a| a.len() != n) {
        return Err(Error::invalid("Lab plane length does not match its dimensions"));
    }
    let data: Vec<u8> = match &lab.alpha {
        Some(alpha) => lab
            .pixels
            .iter()
            .zip(alpha)
            .flat_map(|(&p, &a)| {
                let [r, g, b] = lab_to_srgb(p);
                [r, g, b, a]
            })
            .collect(),
        None => lab.pixels.iter().flat_map(|&p| lab_to_srgb(p)).collect(),
    };
    let channels = if lab.alpha.is_some() { 4 } else { 3 };
    ImageBuffer::new(lab.width, lab.height, channels, data)
}

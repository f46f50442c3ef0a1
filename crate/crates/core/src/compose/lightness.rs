use crate::error::{Error, Result};
use crate::geometry::{bounds, LandmarkSet, NOSE};
use crate::imaging::{lab_to_srgb, srgb_lightness, srgb_to_lab, ImageBuffer};

/// Fraction of the nose bounding box added on each side to form the center region.
pub const CENTER_REGION_MARGIN: f64 = 0.2;

/// Inclusive pixel bounds (x0, y0, x1, y1) of the center facial region, clipped
/// to the image. `None` when the region misses the image entirely.
pub fn center_region(landmarks: &LandmarkSet, width: u32, height: u32) -> Option<(u32, u32, u32, u32)> {
    let (lo, hi) = bounds(landmarks.points()[NOSE].iter().copied())?;
    let (mx, my) = ((hi.x - lo.x) * CENTER_REGION_MARGIN, (hi.y - lo.y) * CENTER_REGION_MARGIN);
    let x0 = (lo.x - mx).ceil().max(0.0);
    let y0 = (lo.y - my).ceil().max(0.0);
    let x1 = (hi.x + mx).floor().min(width as f64 - 1.0);
    let y1 = (hi.y + my).floor().min(height as f64 - 1.0);
    (x0 <= x1 && y0 <= y1).then(|| (x0 as u32, y0 as u32, x1 as u32, y1 as u32))
}

/// Mean Lab lightness over the center facial region (nose box grown by 20%).
pub fn center_region_mean_l(face: &ImageBuffer, landmarks: &LandmarkSet) -> Result<f64> {
    if face.channels() < 3 {
        return Err(Error::invalid("face must be RGB"));
    }
    let (x0, y0, x1, y1) = center_region(landmarks, face.width(), face.height()).ok_or_else(|| {
        Error::DegenerateGeometry("center facial region lies outside the image".into())
    })?;
    let mut sum = 0.0;
    let mut n = 0usize;
    for y in y0..=y1 {
        for x in x0..=x1 {
            let p = face.pixel(x, y);
            sum += srgb_lightness([p[0], p[1], p[2]]);
            n += 1;
        }
    }
    Ok(sum / n as f64)
}

/// Mean lightness of `img` over pixels where `footprint` is nonzero.
pub fn footprint_mean_l(img: &ImageBuffer, footprint: &ImageBuffer) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for (p, &a) in img.pixels().zip(footprint.data()) {
        if a > 0 {
            sum += srgb_lightness([p[0], p[1], p[2]]);
            n += 1;
        }
    }
    (n > 0).then(|| sum / n as f64)
}

/// Shifts the lightness of every footprint pixel by `alpha * (face_mean_l - mask_mean_l)`,
/// which moves the mask's mean toward the face's while keeping its contrast.
/// Chroma (a, b) is left alone and L is clamped to [0, 100].
pub fn adjust_mask_lightness(
    composited: &ImageBuffer,
    footprint: &ImageBuffer,
    face_mean_l: f64,
    alpha: f64,
) -> Result<ImageBuffer> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if footprint.channels() != 1 || footprint.dimensions() != composited.dimensions() {
        return Err(Error::invalid("footprint must be a single-channel plane matching the image"));
    }
    if composited.channels() < 3 {
        return Err(Error::invalid("lightness adjustment needs an RGB image"));
    }
    let Some(mask_mean_l) = footprint_mean_l(composited, footprint) else {
        return Ok(composited.clone());
    };
    if alpha == 0.0 {
        return Ok(composited.clone());
    }
    let shift = alpha * (face_mean_l - mask_mean_l);
    let mut out = composited.clone();
    let c = out.channels();
    for (px, &a) in out.data_mut().chunks_exact_mut(c).zip(footprint.data()) {
        if a == 0 {
            continue;
        }
        let mut lab = srgb_to_lab([px[0], px[1], px[2]]);
        lab.l = (lab.l + shift).clamp(0.0, 100.0);
        px[..3].copy_from_slice(&lab_to_srgb(lab));
    }
    Ok(out)
}

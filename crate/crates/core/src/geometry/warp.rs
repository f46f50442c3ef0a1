use serde::Serialize;

use super::affine::{estimate_affine, MIN_TRIANGLE_AREA};
use super::landmarks::{LandmarkSet, LANDMARK_COUNT};
use super::point::{cross, triangle_area, Point};
use super::triangle::strip_triangulate;
use crate::error::{Error, Result};
use crate::imaging::{store_u8, ImageBuffer};

pub const CORRESPONDENCE_COUNT: usize = 16;

/// Patches a warp may drop before the result is rejected.
pub const MAX_SKIPPED_PATCHES: usize = 4;

/// Default face side of the correspondence: nose bridge first, then a zigzag
/// between the left (1..8) and right (15..9) jawline down to the chin.
pub const DEFAULT_FACE_INDICES: [usize; CORRESPONDENCE_COUNT] =
    [28, 1, 15, 2, 14, 3, 13, 4, 12, 5, 11, 6, 10, 7, 9, 8];

/// Ordered pairing of face landmarks with points on a mask raster.
///
/// Entry 0 is the top of the mask on both sides and is the point that
/// perturbation moves.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceSet {
    face_indices: Vec<usize>,
    mask_points: Vec<Point>,
}

impl CorrespondenceSet {
    pub fn new(face_indices: Vec<usize>, mask_points: Vec<Point>) -> Result<Self> {
        if face_indices.len() != CORRESPONDENCE_COUNT || mask_points.len() != CORRESPONDENCE_COUNT
        {
            return Err(Error::invalid(format!(
                "correspondence needs {CORRESPONDENCE_COUNT} face indices and mask points, got {} and {}",
                face_indices.len(),
                mask_points.len()
            )));
        }
        if let Some(&i) = face_indices.iter().find(|&&i| i >= LANDMARK_COUNT) {
            return Err(Error::invalid(format!("face index {i} outside 0..67")));
        }
        for (k, i) in face_indices.iter().enumerate() {
            if face_indices[..k].contains(i) {
                return Err(Error::invalid(format!("face index {i} repeated")));
            }
        }
        if let Some(k) = mask_points.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("mask point {k} is not finite")));
        }
        Ok(Self {
            face_indices,
            mask_points,
        })
    }

    pub fn with_default_indices(mask_points: Vec<Point>) -> Result<Self> {
        Self::new(DEFAULT_FACE_INDICES.to_vec(), mask_points)
    }

    pub fn face_indices(&self) -> &[usize] {
        &self.face_indices
    }

    pub fn mask_points(&self) -> &[Point] {
        &self.mask_points
    }

    pub fn with_mask_point(&self, k: usize, p: Point) -> Self {
        let mut out = self.clone();
        out.mask_points[k] = p;
        out
    }

    pub fn face_points(&self, landmarks: &LandmarkSet) -> Vec<Point> {
        self.face_indices.iter().map(|&i| landmarks.get(i)).collect()
    }
}

/// Why a patch was left out of a mask warp.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedPatch {
    pub patch: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WarpOutcome {
    Warped { pixels: usize },
    Skipped(String),
}

/// Edge value that is bit-for-bit negated when the edge is walked the other way,
/// so triangles sharing an edge agree on which side a pixel lies.
#[inline]
fn edge_value(a: Point, b: Point, p: Point) -> f64 {
    if (a.x, a.y) <= (b.x, b.y) {
        cross(a, b, p)
    } else {
        -cross(b, a, p)
    }
}

#[inline]
fn is_top_left(a: Point, b: Point) -> bool {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    dy < 0.0 || (dy == 0.0 && dx > 0.0)
}

/// Visits every pixel whose center lies inside `tri`, with the top-left rule
/// deciding centers that fall exactly on an edge.
pub fn for_each_covered_pixel<F>(tri: &[Point; 3], width: u32, height: u32, mut f: F)
where
    F: FnMut(u32, u32),
{
    let [a, mut b, mut c] = *tri;
    if cross(a, b, c) < 0.0 {
        std::mem::swap(&mut b, &mut c);
    }
    let edges = [(a, b), (b, c), (c, a)];
    let tl = edges.map(|(u, v)| is_top_left(u, v));

    let min_x = a.x.min(b.x).min(c.x).ceil().max(0.0);
    let max_x = a.x.max(b.x).max(c.x).floor().min(width as f64 - 1.0);
    let min_y = a.y.min(b.y).min(c.y).ceil().max(0.0);
    let max_y = a.y.max(b.y).max(c.y).floor().min(height as f64 - 1.0);
    if min_x > max_x || min_y > max_y {
        return;
    }
    for y in min_y as u32..=max_y as u32 {
        for x in min_x as u32..=max_x as u32 {
            let p = Point::new(x as f64, y as f64);
            let inside = edges.iter().zip(tl).all(|(&(u, v), top_left)| {
                let e = edge_value(u, v, p);
                e > 0.0 || (e == 0.0 && top_left)
            });
            if inside {
                f(x, y);
            }
        }
    }
}

pub fn covered_pixels(tri: &[Point; 3], width: u32, height: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for_each_covered_pixel(tri, width, height, |x, y| out.push((x, y)));
    out
}

/// Bilinear RGBA sample; `None` when the point is off the raster.
fn sample_rgba(src: &ImageBuffer, p: Point) -> Option<[u8; 4]> {
    let (w, h) = (src.width() as f64, src.height() as f64);
    if !(p.x >= -0.5 && p.x <= w - 0.5 && p.y >= -0.5 && p.y <= h - 0.5) {
        return None;
    }
    let x = p.x.clamp(0.0, w - 1.0);
    let y = p.y.clamp(0.0, h - 1.0);
    let (x0, y0) = (x.floor() as u32, y.floor() as u32);
    let x1 = (x0 + 1).min(src.width() - 1);
    let y1 = (y0 + 1).min(src.height() - 1);
    let (fx, fy) = (x - x0 as f64, y - y0 as f64);
    let (p00, p10) = (src.pixel(x0, y0), src.pixel(x1, y0));
    let (p01, p11) = (src.pixel(x0, y1), src.pixel(x1, y1));
    let mut out = [0u8; 4];
    for ch in 0..4 {
        let top = p00[ch] as f64 + (p10[ch] as f64 - p00[ch] as f64) * fx;
        let bottom = p01[ch] as f64 + (p11[ch] as f64 - p01[ch] as f64) * fx;
        out[ch] = store_u8(top + (bottom - top) * fy);
    }
    Some(out)
}

/// Copies the `src_tri` patch of `src` onto the `dst_tri` region of `dst` by
/// inverse-mapping every covered destination pixel.
///
/// Collapsed triangles on either side are reported as skipped, not as errors.
pub fn warp_triangle(
    src: &ImageBuffer,
    dst: &mut ImageBuffer,
    src_tri: &[Point; 3],
    dst_tri: &[Point; 3],
) -> Result<WarpOutcome> {
    if !src.has_alpha() || !dst.has_alpha() {
        return Err(Error::invalid("triangle warp operates on RGBA rasters"));
    }
    if triangle_area(dst_tri) <= MIN_TRIANGLE_AREA {
        return Ok(WarpOutcome::Skipped("destination triangle collapsed".into()));
    }
    if triangle_area(src_tri) <= MIN_TRIANGLE_AREA {
        return Ok(WarpOutcome::Skipped("source triangle collapsed".into()));
    }
    let inverse = estimate_affine(dst_tri, src_tri)?;
    let (w, h) = dst.dimensions();
    let mut pixels = 0;
    for_each_covered_pixel(dst_tri, w, h, |x, y| {
        let s = inverse.apply(Point::new(x as f64, y as f64));
        let value = sample_rgba(src, s).unwrap_or([0; 4]);
        dst.pixel_mut(x, y).copy_from_slice(&value);
        pixels += 1;
    });
    Ok(WarpOutcome::Warped { pixels })
}

/// Result of projecting a mask raster onto a face.
#[derive(Debug, Clone)]
pub struct MaskWarp {
    pub layer: ImageBuffer,
    pub skipped: Vec<SkippedPatch>,
}

/// Warps all strip patches of the mask onto a transparent canvas of
/// `target` size, in patch order.
pub fn warp_mask(
    raster: &ImageBuffer,
    correspondence: &CorrespondenceSet,
    landmarks: &LandmarkSet,
    target: (u32, u32),
) -> Result<MaskWarp> {
    let mut layer = ImageBuffer::transparent(target.0, target.1)?;
    let face = correspondence.face_points(landmarks);
    let mask = correspondence.mask_points();
    let mut skipped = Vec::new();
    for (patch, tri) in strip_triangulate(CORRESPONDENCE_COUNT)?.iter().enumerate() {
        let [i, j, k] = tri.0;
        let src_tri = [mask[i], mask[j], mask[k]];
        let dst_tri = [face[i], face[j], face[k]];
        if let WarpOutcome::Skipped(reason) = warp_triangle(raster, &mut layer, &src_tri, &dst_tri)?
        {
            log::debug!("patch {patch} skipped: {reason}");
            skipped.push(SkippedPatch { patch, reason });
        }
    }
    if skipped.len() > MAX_SKIPPED_PATCHES {
        return Err(Error::GenerationFailed(format!(
            "{} of 14 mask patches collapsed (limit {MAX_SKIPPED_PATCHES})",
            skipped.len()
        )));
    }
    Ok(MaskWarp { layer, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(v: [(f64, f64); 3]) -> [Point; 3] {
        v.map(|(x, y)| Point::new(x, y))
    }

    fn textured(w: u32, h: u32) -> ImageBuffer {
        ImageBuffer::from_fn(w, h, 4, |x, y, p| {
            p.copy_from_slice(&[(x * 7 % 256) as u8, (y * 11 % 256) as u8, ((x ^ y) * 3 % 256) as u8, 255])
        })
        .unwrap()
    }

    #[test]
    fn identity_copies_interior_exactly() {
        let src = textured(40, 40);
        let mut dst = ImageBuffer::transparent(40, 40).unwrap();
        let t = tri([(2.0, 3.0), (30.0, 3.0), (2.0, 35.0)]);
        let out = warp_triangle(&src, &mut dst, &t, &t).unwrap();
        let covered = covered_pixels(&t, 40, 40);
        assert_eq!(out, WarpOutcome::Warped { pixels: covered.len() });
        for y in 0..40 {
            for x in 0..40 {
                if covered.contains(&(x, y)) {
                    assert_eq!(dst.pixel(x, y), src.pixel(x, y));
                } else {
                    assert_eq!(dst.pixel(x, y), &[0, 0, 0, 0]);
                }
            }
        }
    }

    #[test]
    fn translation_shifts_columns() {
        let src = textured(60, 40);
        let mut dst = ImageBuffer::transparent(60, 40).unwrap();
        let s = tri([(3.0, 2.0), (25.0, 4.0), (8.0, 30.0)]);
        let d = s.map(|p| Point::new(p.x + 10.0, p.y));
        warp_triangle(&src, &mut dst, &s, &d).unwrap();
        for (x, y) in covered_pixels(&d, 60, 40) {
            assert_eq!(dst.pixel(x, y), src.pixel(x - 10, y));
        }
    }

    #[test]
    fn adjacent_triangles_partition_pixels() {
        let quad = [(0.0, 0.0), (20.0, 0.0), (20.0, 20.0), (0.0, 20.0)].map(|(x, y)| Point::new(x, y));
        let a = [quad[0], quad[1], quad[2]];
        let b = [quad[0], quad[2], quad[3]];
        let ca = covered_pixels(&a, 32, 32);
        let cb = covered_pixels(&b, 32, 32);
        assert!(ca.iter().all(|p| !cb.contains(p)));
        // the square's pixel centers 0..=19 on each axis, right/bottom edges excluded
        assert_eq!(ca.len() + cb.len(), 400);
    }

    #[test]
    fn degenerate_destination_is_skipped() {
        let src = textured(10, 10);
        let mut dst = ImageBuffer::transparent(10, 10).unwrap();
        let s = tri([(0.0, 0.0), (5.0, 0.0), (0.0, 5.0)]);
        let d = tri([(0.0, 0.0), (2.0, 2.0), (4.0, 4.0)]);
        let before = dst.clone();
        assert!(matches!(
            warp_triangle(&src, &mut dst, &s, &d).unwrap(),
            WarpOutcome::Skipped(_)
        ));
        assert_eq!(dst, before);
    }

    #[test]
    fn off_raster_samples_are_transparent() {
        let src = textured(10, 10);
        let mut dst = ImageBuffer::transparent(40, 40).unwrap();
        let s = tri([(0.0, 0.0), (30.0, 0.0), (0.0, 30.0)]);
        warp_triangle(&src, &mut dst, &s, &s).unwrap();
        assert_eq!(dst.pixel(20, 2), &[0, 0, 0, 0]);
        assert_eq!(dst.pixel(2, 2), src.pixel(2, 2));
    }

    #[test]
    fn correspondence_validation() {
        let pts = vec![Point::new(1.0, 1.0); 16];
        assert!(CorrespondenceSet::with_default_indices(pts.clone()).is_ok());
        let mut idx = DEFAULT_FACE_INDICES.to_vec();
        idx[3] = idx[4];
        assert!(CorrespondenceSet::new(idx, pts.clone()).is_err());
        let mut idx = DEFAULT_FACE_INDICES.to_vec();
        idx[0] = 68;
        assert!(CorrespondenceSet::new(idx, pts.clone()).is_err());
        assert!(CorrespondenceSet::new(DEFAULT_FACE_INDICES[..15].to_vec(), pts[..15].to_vec()).is_err());
    }
}

//! Landmarks, triangle strips, affine estimation and triangle warping.

mod affine;
mod landmarks;
mod point;
mod triangle;
mod warp;

pub use affine::{estimate_affine, AffineMatrix, MIN_TRIANGLE_AREA};
pub use landmarks::{
    LandmarkSet, BROWS, JAWLINE, LANDMARK_COUNT, LEFT_EYE, MOUTH, NOSE, RIGHT_EYE,
};
pub use point::{bounds, cross, triangle_area, Point};
pub use triangle::{strip_triangulate, Triangle};
pub use warp::{
    covered_pixels, for_each_covered_pixel, warp_mask, warp_triangle, CorrespondenceSet,
    MaskWarp, SkippedPatch, WarpOutcome, CORRESPONDENCE_COUNT, DEFAULT_FACE_INDICES,
    MAX_SKIPPED_PATCHES,
};

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::params::ComposeParams;
use crate::geometry::{bounds, CorrespondenceSet, LandmarkSet, Point};

/// Landmarks and mask points after perturbation, with the offsets applied.
#[derive(Debug, Clone)]
pub struct Perturbation {
    pub landmarks: LandmarkSet,
    pub correspondence: CorrespondenceSet,
    pub offsets: AppliedOffsets,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AppliedOffsets {
    pub face_top: Point,
    pub mask_top: Point,
}

/// Uniform draw from the disk of the given radius.
pub fn disk_offset<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Point {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    if radius == 0.0 {
        return Point::default();
    }
    let r = radius * u.sqrt();
    let theta = TAU * v;
    Point::new(r * theta.cos(), r * theta.sin())
}

/// Moves the top correspondence point on the face (scaled by interocular
/// distance) and on the mask (scaled by the mask points' height).
pub fn perturb_landmarks<R: Rng + ?Sized>(
    landmarks: &LandmarkSet,
    correspondence: &CorrespondenceSet,
    params: &ComposeParams,
    rng: &mut R,
) -> Perturbation {
    let face_radius = params.perturb_face_top * landmarks.interocular();
    let mask_height = bounds(correspondence.mask_points().iter().copied())
        .map(|(lo, hi)| hi.y - lo.y)
        .unwrap_or(0.0);
    let mask_radius = params.perturb_mask_top * mask_height;

    let face_top = disk_offset(rng, face_radius);
    let mask_top = disk_offset(rng, mask_radius);

    let top_index = correspondence.face_indices()[0];
    let landmarks = landmarks.with_point(top_index, landmarks.get(top_index).offset(face_top));
    let correspondence =
        correspondence.with_mask_point(0, correspondence.mask_points()[0].offset(mask_top));
    Perturbation {
        landmarks,
        correspondence,
        offsets: AppliedOffsets { face_top, mask_top },
    }
}

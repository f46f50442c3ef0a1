//! The masking pipeline: upscale, perturb, warp, blend, match lightness,
//! soften the boundary, downscale.

mod boundary;
mod lightness;
mod params;
mod perturb;
mod pipeline;

pub use boundary::{blur_boundary, boundary_band, FOOTPRINT_THRESHOLD};
pub use lightness::{
    adjust_mask_lightness, center_region, center_region_mean_l, footprint_mean_l,
    CENTER_REGION_MARGIN,
};
pub use params::ComposeParams;
pub use perturb::{disk_offset, perturb_landmarks, AppliedOffsets, Perturbation};
pub use pipeline::{
    apply_mask, apply_mask_traced, round_trip_face, ComposeTrace, MaskedFaceResult, Provenance,
    MIN_FOOTPRINT_FRACTION,
};

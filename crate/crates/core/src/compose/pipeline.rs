use serde::Serialize;

use super::boundary::{blur_boundary, boundary_band, FOOTPRINT_THRESHOLD};
use super::lightness::{adjust_mask_lightness, center_region_mean_l, footprint_mean_l};
use super::params::ComposeParams;
use super::perturb::{perturb_landmarks, AppliedOffsets};
use crate::error::{Error, Result};
use crate::gallery::MaskTemplate;
use crate::geometry::{warp_mask, LandmarkSet, SkippedPatch};
use crate::imaging::{composite_alpha, resize_bilinear, resize_support, ImageBuffer};
use crate::rng;

/// Smallest footprint, as a fraction of the output area, accepted as a mask.
pub const MIN_FOOTPRINT_FRACTION: f64 = 0.02;

/// A masked face at output resolution plus provenance.
#[derive(Debug, Clone)]
pub struct MaskedFaceResult {
    /// RGB, `output_side` x `output_side`.
    pub image: ImageBuffer,
    /// Binary (0/255) single-channel mask footprint, same size as `image`.
    pub footprint: ImageBuffer,
    /// Input landmarks mapped to the output raster.
    pub landmarks: LandmarkSet,
    pub template_id: String,
    pub seed: u64,
    pub offsets: AppliedOffsets,
    pub warnings: Vec<String>,
}

/// Provenance record written next to generated images.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance<'a> {
    pub template_id: &'a str,
    pub seed: u64,
    pub offsets: AppliedOffsets,
    pub params: ComposeParams,
    pub warnings: &'a [String],
}

impl MaskedFaceResult {
    pub fn provenance(&self, params: &ComposeParams) -> Provenance<'_> {
        Provenance {
            template_id: &self.template_id,
            seed: self.seed,
            offsets: self.offsets,
            params: *params,
            warnings: &self.warnings,
        }
    }

    pub fn footprint_fraction(&self) -> f64 {
        self.footprint.count_at_least(FOOTPRINT_THRESHOLD) as f64 / self.footprint.pixel_count() as f64
    }
}

/// Every intermediate raster of one pipeline run, at working resolution.
#[derive(Debug, Clone)]
pub struct ComposeTrace {
    pub upscaled: ImageBuffer,
    pub landmarks: LandmarkSet,
    /// Warped RGBA mask layer.
    pub layer: ImageBuffer,
    /// Alpha channel of `layer`.
    pub alpha: ImageBuffer,
    pub composited: ImageBuffer,
    pub adjusted: ImageBuffer,
    pub blurred: ImageBuffer,
    pub band: ImageBuffer,
    pub face_mean_l: f64,
    pub mask_mean_l_before: Option<f64>,
    pub mask_mean_l_after: Option<f64>,
    pub skipped: Vec<SkippedPatch>,
}

impl ComposeTrace {
    /// Pixels at working resolution the pipeline may have changed: nonzero mask
    /// alpha plus the blur band.
    pub fn touched(&self) -> ImageBuffer {
        let data = self
            .alpha
            .data()
            .iter()
            .zip(self.band.data())
            .map(|(&a, &b)| if a > 0 || b > 0 { 255 } else { 0 })
            .collect();
        ImageBuffer::new(self.alpha.width(), self.alpha.height(), 1, data)
            .expect("same dimensions as alpha")
    }

    /// `touched` carried through the final downscale: output pixels whose
    /// bilinear support includes any touched pixel.
    pub fn affected_region(&self, output_side: u32) -> Result<ImageBuffer> {
        resize_support(&self.touched(), output_side, output_side)
    }
}

/// The face resized to the working canvas and back, with no mask applied.
pub fn round_trip_face(face: &ImageBuffer, params: &ComposeParams) -> Result<ImageBuffer> {
    let up = resize_bilinear(&face.to_rgb(), params.target_side, params.target_side)?;
    resize_bilinear(&up, params.output_side, params.output_side)
}

/// Puts `template` on `face`.
pub fn apply_mask(
    face: &ImageBuffer,
    landmarks: &LandmarkSet,
    template: &MaskTemplate,
    params: &ComposeParams,
) -> Result<MaskedFaceResult> {
    apply_mask_traced(face, landmarks, template, params).map(|(result, _)| result)
}

/// [`apply_mask`] that also returns every intermediate stage.
pub fn apply_mask_traced(
    face: &ImageBuffer,
    landmarks: &LandmarkSet,
    template: &MaskTemplate,
    params: &ComposeParams,
) -> Result<(MaskedFaceResult, ComposeTrace)> {
    params.validate()?;
    let face = face.to_rgb();
    let side = params.target_side;

    // statistic taken on the original, unmasked face
    let face_mean_l = center_region_mean_l(&face, landmarks)?;

    let upscaled = resize_bilinear(&face, side, side)?;
    let landmarks_hi = landmarks.resized(face.dimensions(), (side, side));

    let mut stream = rng::stream(params.seed, "perturb");
    let perturbed = perturb_landmarks(&landmarks_hi, &template.correspondence, params, &mut stream);

    let warped = warp_mask(
        &template.raster,
        &perturbed.correspondence,
        &perturbed.landmarks,
        (side, side),
    )?;
    let alpha = warped.layer.alpha_plane()?;
    let composited = composite_alpha(&warped.layer, &upscaled)?;

    let mask_mean_l_before = footprint_mean_l(&composited, &alpha);
    let adjusted = adjust_mask_lightness(&composited, &alpha, face_mean_l, params.alpha)?;
    let mask_mean_l_after = footprint_mean_l(&adjusted, &alpha);

    let band = boundary_band(&alpha, params.beta)?;
    let blurred = blur_boundary(&adjusted, &alpha, params.beta)?;

    let out = params.output_side;
    let image = resize_bilinear(&blurred, out, out)?;
    let mut footprint = resize_bilinear(&alpha, out, out)?;
    for v in footprint.data_mut() {
        *v = if *v >= FOOTPRINT_THRESHOLD { 255 } else { 0 };
    }

    let warnings: Vec<String> = warped
        .skipped
        .iter()
        .map(|s| format!("patch {} skipped: {}", s.patch, s.reason))
        .collect();
    let result = MaskedFaceResult {
        image,
        footprint,
        landmarks: landmarks.resized(face.dimensions(), (out, out)),
        template_id: template.id.clone(),
        seed: params.seed,
        offsets: perturbed.offsets,
        warnings,
    };
    let fraction = result.footprint_fraction();
    if fraction < MIN_FOOTPRINT_FRACTION {
        return Err(Error::GenerationFailed(format!(
            "mask footprint covers {:.2}% of the image (minimum {:.0}%)",
            fraction * 100.0,
            MIN_FOOTPRINT_FRACTION * 100.0
        )));
    }
    let trace = ComposeTrace {
        upscaled,
        landmarks: perturbed.landmarks,
        layer: warped.layer,
        alpha,
        composited,
        adjusted,
        blurred,
        band,
        face_mean_l,
        mask_mean_l_before,
        mask_mean_l_after,
        skipped: warped.skipped,
    };
    Ok((result, trace))
}

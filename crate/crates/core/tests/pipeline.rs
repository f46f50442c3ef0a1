mod common;

use maskface::compose::{apply_mask, apply_mask_traced, round_trip_face, ComposeParams};
use maskface::geometry::{warp_mask, LandmarkSet, Point};
use maskface::imaging::{composite_alpha, resize_bilinear};
use maskface::synth::{fixture_templates, mask_template, synthetic_face, MaskStyle};
use maskface::Error;
use proptest::prelude::*;

#[test]
fn footprint_is_one_8_connected_component() {
    for identity in 0..6 {
        let (face, landmarks) = synthetic_face(identity, 0);
        for template in fixture_templates() {
            let params = ComposeParams::default().with_seed(identity as u64);
            let r = apply_mask(&face, &landmarks, &template, &params).unwrap();
            assert!(r.warnings.is_empty(), "{:?}", r.warnings);
            assert_eq!(common::components_8(&r.footprint), 1, "face {identity} {}", template.id);
        }
    }
}

#[test]
fn post_processing_disabled_is_plain_warp_and_composite() {
    let (face, landmarks) = synthetic_face(3, 2);
    let template = mask_template(MaskStyle::Striped);
    let params = ComposeParams {
        alpha: 0.0,
        beta: 1,
        ..ComposeParams::default().without_perturbation()
    };
    let got = apply_mask(&face, &landmarks, &template, &params).unwrap();

    let up = resize_bilinear(&face, 500, 500).unwrap();
    let lm = landmarks.resized((250, 250), (500, 500));
    let warp = warp_mask(&template.raster, &template.correspondence, &lm, (500, 500)).unwrap();
    let composited = composite_alpha(&warp.layer, &up).unwrap();
    let want = resize_bilinear(&composited, 250, 250).unwrap();
    assert_eq!(got.image, want);
}

#[test]
fn same_seed_same_output_different_seed_different_fit() {
    let (face, landmarks) = synthetic_face(1, 0);
    let template = mask_template(MaskStyle::Surgical);
    let p = ComposeParams::default().with_seed(3);
    let a = apply_mask(&face, &landmarks, &template, &p).unwrap();
    let b = apply_mask(&face, &landmarks, &template, &p).unwrap();
    assert_eq!(a.image, b.image);
    assert_eq!(a.offsets, b.offsets);
    let c = apply_mask(&face, &landmarks, &template, &p.with_seed(4)).unwrap();
    assert_ne!(a.offsets, c.offsets);
    assert_ne!(a.image, c.image);
}

#[test]
fn tiny_face_fails_generation() {
    let (face, landmarks) = synthetic_face(0, 0);
    let center = Point::new(125.0, 125.0);
    let shrunk: Vec<Point> = landmarks
        .points()
        .iter()
        .map(|p| Point::new(center.x + (p.x - center.x) * 0.08, center.y + (p.y - center.y) * 0.08))
        .collect();
    let shrunk = LandmarkSet::new(shrunk).unwrap();
    let err = apply_mask(&face, &shrunk, &mask_template(MaskStyle::Cloth), &ComposeParams::default())
        .unwrap_err();
    assert!(matches!(err, Error::GenerationFailed(_)), "{err}");
}

#[test]
fn output_sizes_follow_params() {
    let (face, landmarks) = synthetic_face(2, 1);
    let params = ComposeParams {
        target_side: 400,
        output_side: 128,
        ..ComposeParams::default()
    };
    let r = apply_mask(&face, &landmarks, &mask_template(MaskStyle::Gradient), &params).unwrap();
    assert_eq!(r.image.dimensions(), (128, 128));
    assert_eq!(r.footprint.dimensions(), (128, 128));
    assert!(r.footprint.data().iter().all(|&v| v == 0 || v == 255));
}

#[test]
fn invalid_params_rejected() {
    let (face, landmarks) = synthetic_face(0, 0);
    let t = mask_template(MaskStyle::Cloth);
    for p in [
        ComposeParams { beta: 4, ..Default::default() },
        ComposeParams { alpha: 1.5, ..Default::default() },
        ComposeParams { target_side: 100, ..Default::default() },
    ] {
        assert!(matches!(apply_mask(&face, &landmarks, &t, &p), Err(Error::InvalidArgument(_))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn changes_stay_inside_footprint_and_band(
        identity in 0u32..40,
        variant in 0u32..4,
        style in 0usize..4,
        seed in any::<u64>(),
        beta in prop::sample::select(vec![1usize, 3, 5, 9]),
        alpha in 0.0..=1.0f64,
    ) {
        let (face, landmarks) = synthetic_face(identity, variant);
        let template = mask_template(MaskStyle::ALL[style]);
        let params = ComposeParams { alpha, beta, ..ComposeParams::default().with_seed(seed) };
        let (r, trace) = apply_mask_traced(&face, &landmarks, &template, &params).unwrap();
        let base = round_trip_face(&face, &params).unwrap();
        let region = trace.affected_region(params.output_side).unwrap();
        for (i, (a, b)) in r.image.data().chunks(3).zip(base.data().chunks(3)).enumerate() {
            prop_assert!(a == b || region.data()[i] != 0, "pixel {} changed outside", i);
        }
    }

    #[test]
    fn lightness_gap_shrinks_with_alpha(identity in 0u32..40, style in 0usize..4) {
        let (face, landmarks) = synthetic_face(identity, 0);
        let template = mask_template(MaskStyle::ALL[style]);
        let mut last = f64::INFINITY;
        for alpha in [0.0, 0.3, 0.6, 1.0] {
            let params = ComposeParams { alpha, ..ComposeParams::default().with_seed(1) };
            let (_, t) = apply_mask_traced(&face, &landmarks, &template, &params).unwrap();
            let gap = (t.mask_mean_l_after.unwrap() - t.face_mean_l).abs();
            prop_assert!(gap <= last);
            last = gap;
        }
    }
}

//! Sweeps the lightness weight and blur kernel and reports what each does to
//! the mask's mean lightness and to the boundary band.

use maskface::compose::{apply_mask_traced, ComposeParams};
use maskface::imaging::write_png;
use maskface::synth::{mask_template, synthetic_face, MaskStyle};

fn main() -> maskface::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "sweep_out".into());
    std::fs::create_dir_all(&out).expect("create output dir");
    let (face, landmarks) = synthetic_face(2, 0);
    let template = mask_template(MaskStyle::Cloth);
    let base = ComposeParams::default().without_perturbation();

    println!("alpha  face L  mask L before  mask L after");
    for alpha in [0.0, 0.3, 0.6, 1.0] {
        let params = ComposeParams { alpha, ..base };
        let (result, trace) = apply_mask_traced(&face, &landmarks, &template, &params)?;
        println!(
            "{alpha:>5.1}  {:>6.2}  {:>13.2}  {:>12.2}",
            trace.face_mean_l,
            trace.mask_mean_l_before.unwrap_or(f64::NAN),
            trace.mask_mean_l_after.unwrap_or(f64::NAN),
        );
        write_png(format!("{out}/alpha_{alpha:.1}.png"), &result.image)?;
    }

    println!("\nbeta  band pixels");
    for beta in [1, 3, 5, 9, 15] {
        let params = ComposeParams { beta, ..base };
        let (result, trace) = apply_mask_traced(&face, &landmarks, &template, &params)?;
        println!("{beta:>4}  {:>11}", trace.band.count_at_least(1));
        write_png(format!("{out}/beta_{beta}.png"), &result.image)?;
    }
    Ok(())
}

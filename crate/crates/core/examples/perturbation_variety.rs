//! Same face and template under different seeds: the landmark perturbation
//! gives each sample a slightly different fit.

use maskface::compose::{apply_mask, ComposeParams};
use maskface::imaging::write_png;
use maskface::synth::{mask_template, synthetic_face, MaskStyle};

fn main() -> maskface::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "perturb_out".into());
    std::fs::create_dir_all(&out).expect("create output dir");
    let (face, landmarks) = synthetic_face(5, 1);
    let template = mask_template(MaskStyle::Surgical);
    for seed in 0..6 {
        let params = ComposeParams::default().with_seed(seed);
        let r = apply_mask(&face, &landmarks, &template, &params)?;
        println!(
            "seed {seed}: face top ({:+.2}, {:+.2})  mask top ({:+.2}, {:+.2})  footprint {:.1}%",
            r.offsets.face_top.x,
            r.offsets.face_top.y,
            r.offsets.mask_top.x,
            r.offsets.mask_top.y,
            r.footprint_fraction() * 100.0
        );
        write_png(format!("{out}/seed_{seed}.png"), &r.image)?;
    }
    Ok(())
}

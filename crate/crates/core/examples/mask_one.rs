//! Masks one synthetic face with every bundled template.
//!
//!     cargo run --example mask_one [-- out_dir]

use maskface::compose::{apply_mask, ComposeParams};
use maskface::imaging::write_png;
use maskface::synth::{fixture_templates, synthetic_face};

fn main() -> maskface::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "mask_one_out".into());
    std::fs::create_dir_all(&out).expect("create output dir");
    let (face, landmarks) = synthetic_face(0, 0);
    write_png(format!("{out}/face.png"), &face)?;
    let params = ComposeParams::default().with_seed(7);
    for template in fixture_templates() {
        let result = apply_mask(&face, &landmarks, &template, &params)?;
        let path = format!("{out}/{}.png", template.id);
        write_png(&path, &result.image)?;
        println!(
            "{path}: footprint {:.1}%, offsets face ({:.2}, {:.2}) mask ({:.2}, {:.2})",
            result.footprint_fraction() * 100.0,
            result.offsets.face_top.x,
            result.offsets.face_top.y,
            result.offsets.mask_top.x,
            result.offsets.mask_top.y,
        );
    }
    Ok(())
}

//! Validates a gallery and shows what a broken template reports.
//!
//!     cargo run --example validate_gallery [-- gallery_dir]

use maskface::gallery::{load_unvalidated, validate_template, MaskTemplate};
use maskface::geometry::Point;
use maskface::synth::{mask_template, MaskStyle};

fn main() -> maskface::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/gallery").to_string());
    let (name, templates) = load_unvalidated(&dir)?;
    println!("gallery '{name}'");
    for t in &templates {
        let findings = validate_template(t);
        println!("  {:<16} {} finding(s)", t.id, findings.len());
    }

    // three collinear mask points
    let good = mask_template(MaskStyle::Surgical);
    let c = good.correspondence.with_mask_point(2, {
        let (p0, p1) = (good.correspondence.mask_points()[0], good.correspondence.mask_points()[1]);
        Point::new((p0.x + p1.x) / 2.0, (p0.y + p1.y) / 2.0)
    });
    let broken = MaskTemplate::new("broken", good.raster.clone(), c, vec![]);
    for f in validate_template(&broken) {
        println!("  {f}");
    }
    Ok(())
}

//! Regenerates the bundled gallery under `gallery/` from the procedural styles.
//!
//!     cargo run --example render_gallery [-- <dir>]

use maskface::synth::write_fixture_gallery;

fn main() -> maskface::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/gallery").to_string());
    let manifest = write_fixture_gallery(&dir)?;
    println!("wrote {}", manifest.display());
    Ok(())
}

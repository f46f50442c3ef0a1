//! End-to-end dataset build on synthetic faces: fixtures, gallery, split,
//! generation, folds.
//!
//!     cargo run --release --example build_dataset [-- out_dir]

use std::path::PathBuf;

use maskface::compose::ComposeParams;
use maskface::dataset::{build_dataset, BuildConfig};
use maskface::synth::{write_fixture_gallery, write_fixture_set, FixtureSpec};

fn main() -> maskface::Result<()> {
    let root = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "dataset_out".into()));
    let set = write_fixture_set(root.join("faces"), &FixtureSpec::small())?;
    let gallery = write_fixture_gallery(root.join("gallery"))?;

    let summary = build_dataset(&BuildConfig {
        pairs: set.pairs,
        images: set.images,
        landmarks: set.landmarks,
        gallery,
        out: root.join("masked"),
        seed: 2021,
        params: ComposeParams::default(),
        folds_from: None,
        jobs: None,
    })?;
    print!("{}", summary.report());
    Ok(())
}

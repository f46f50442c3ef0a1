//! Writes a synthetic face collection (images/, landmarks/, pairs.txt).
//!
//!     cargo run --example make_fixtures -- out/faces [identities] [per_identity] [pairs]
//!
//! `pairs` is split evenly into positives and negatives.

use maskface::synth::{write_fixture_set, FixtureSpec};

fn main() -> maskface::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let root = args.first().map(String::as_str).unwrap_or("fixtures");
    let num = |i: usize, default: usize| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let pairs = num(3, 60);
    let spec = FixtureSpec {
        identities: num(1, 12) as u32,
        images_per_identity: num(2, 3) as u32,
        positives: pairs / 2,
        negatives: pairs - pairs / 2,
        ..FixtureSpec::small()
    };
    let set = write_fixture_set(root, &spec)?;
    println!("images:    {}", set.images.display());
    println!("landmarks: {}", set.landmarks.display());
    println!("pairs:     {}", set.pairs.display());
    Ok(())
}

#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};
use std::path::{Path, PathBuf};

use maskface::compose::ComposeParams;
use maskface::dataset::{build_dataset, BuildConfig, BuildSummary};
use maskface::imaging::ImageBuffer;
use maskface::synth::{write_fixture_gallery, write_fixture_set, FixtureSet, FixtureSpec};
use sha2::{Digest, Sha256};

pub const GALLERY_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/gallery");

/// Synthetic faces, pair list and the procedural gallery under `root`.
pub struct Fixture {
    pub set: FixtureSet,
    pub gallery: PathBuf,
}

pub fn write_fixture(root: &Path, spec: &FixtureSpec) -> Fixture {
    let set = write_fixture_set(root.join("faces"), spec).expect("fixture set");
    let gallery = write_fixture_gallery(root.join("gallery")).expect("fixture gallery");
    Fixture { set, gallery }
}

pub fn build(fixture: &Fixture, out: &Path, seed: u64) -> BuildSummary {
    build_dataset(&BuildConfig {
        pairs: fixture.set.pairs.clone(),
        images: fixture.set.images.clone(),
        landmarks: fixture.set.landmarks.clone(),
        gallery: fixture.gallery.clone(),
        out: out.to_path_buf(),
        seed,
        params: ComposeParams::default(),
        folds_from: None,
        jobs: None,
    })
    .expect("dataset build")
}

/// SHA-256 of every file below `root`, keyed by relative path.
pub fn hash_tree(root: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/");
                let digest = Sha256::digest(std::fs::read(&path).unwrap());
                let hex = digest.iter().map(|b| format!("{b:02x}")).collect();
                out.insert(rel, hex);
            }
        }
    }
    out
}

/// Number of 8-connected components of nonzero pixels in a single-channel plane.
pub fn components_8(plane: &ImageBuffer) -> usize {
    let (w, h) = (plane.width() as i64, plane.height() as i64);
    let data = plane.data();
    let mut seen = vec![false; data.len()];
    let mut count = 0;
    for start in 0..data.len() {
        if data[start] == 0 || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (x, y) = ((i as i64) % w, (i as i64) / w);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w || ny >= h {
                        continue;
                    }
                    let j = (ny * w + nx) as usize;
                    if data[j] != 0 && !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    count
}

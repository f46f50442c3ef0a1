//! Seed derivation. Every random stream in the crate is ChaCha8 keyed by the
//! SHA-256 of (seed, label), so results never depend on platform or on the
//! order in which parallel work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

fn digest(seed: u64, label: &str) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(label.as_bytes());
    h.finalize().into()
}

/// Independent generator for the stream named `label` under `seed`.
pub fn stream(seed: u64, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(digest(seed, label))
}

/// A 64-bit seed derived from (seed, label), e.g. a per-image seed.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let d = digest(seed, label);
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

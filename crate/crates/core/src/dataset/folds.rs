use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;

use super::plan::GenerationPlan;
use crate::error::{Error, Result};
use crate::rng;

pub const FOLD_COUNT: usize = 10;

/// Fold index (0-based) per pair, indexed by pair index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    pub folds: Vec<usize>,
    pub k: usize,
}

impl FoldAssignment {
    pub fn new(folds: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("fold count must be positive"));
        }
        if let Some((i, &f)) = folds.iter().enumerate().find(|(_, &f)| f >= k) {
            return Err(Error::invalid(format!("pair {i} has fold {f}, expected < {k}")));
        }
        Ok(Self { folds, k })
    }

    pub fn len(&self) -> usize {
        self.folds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.folds.is_empty()
    }

    pub fn fold_of(&self, pair_index: usize) -> Option<usize> {
        self.folds.get(pair_index).copied()
    }

    /// Pair count per fold.
    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for &f in &self.folds {
            out[f] += 1;
        }
        out
    }

    /// `(positives, negatives)` per fold.
    pub fn balance(&self, labels: &[bool]) -> Vec<(usize, usize)> {
        let mut out = vec![(0, 0); self.k];
        for (&f, &same) in self.folds.iter().zip(labels) {
            if same {
                out[f].0 += 1;
            } else {
                out[f].1 += 1;
            }
        }
        out
    }

    /// `pair_index fold` per line.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.folds.len() * 8);
        for (i, f) in self.folds.iter().enumerate() {
            let _ = writeln!(s, "{i} {f}");
        }
        s
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| Error::parse(origin, format!("line {}: {m}", lineno + 1));
            let mut it = line.split_whitespace();
            let (Some(i), Some(f), None) = (it.next(), it.next(), it.next()) else {
                return Err(bad("expected `pair_index fold`"));
            };
            let i: usize = i.parse().map_err(|_| bad("bad pair index"))?;
            let f: usize = f.parse().map_err(|_| bad("bad fold"))?;
            entries.push((i, f));
        }
        let n = entries.len();
        let mut folds = vec![usize::MAX; n];
        for (i, f) in entries {
            if i >= n || folds[i] != usize::MAX {
                return Err(Error::parse(origin, format!("pair index {i} duplicated or out of range")));
            }
            folds[i] = f;
        }
        let k = folds.iter().max().map_or(FOLD_COUNT, |&m| (m + 1).max(FOLD_COUNT));
        FoldAssignment::new(folds, k)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}

/// Seeded balanced split into [`FOLD_COUNT`] folds: positives and negatives are
/// shuffled separately and dealt in equal blocks.
pub fn make_folds(plan: &GenerationPlan, seed: u64) -> Result<FoldAssignment> {
    let labels: Vec<bool> = plan.records.iter().map(|r| r.same_identity).collect();
    make_folds_for_labels(&labels, FOLD_COUNT, seed)
}

pub fn make_folds_for_labels(labels: &[bool], k: usize, seed: u64) -> Result<FoldAssignment> {
    let n = labels.len();
    let mut pos: Vec<usize> = (0..n).filter(|&i| labels[i]).collect();
    let mut neg: Vec<usize> = (0..n).filter(|&i| !labels[i]).collect();
    if k == 0 || n == 0 || n % k != 0 || pos.len() % k != 0 || neg.len() % k != 0 {
        return Err(Error::invalid(format!(
            "{n} pairs ({} positive, {} negative) cannot be split evenly into {k} balanced folds",
            pos.len(),
            neg.len()
        )));
    }
    let mut r = rng::stream(seed, "folds");
    pos.shuffle(&mut r);
    neg.shuffle(&mut r);
    let mut folds = vec![0; n];
    for group in [&pos, &neg] {
        let per = group.len() / k;
        for (rank, &i) in group.iter().enumerate() {
            folds[i] = rank / per.max(1);
        }
    }
    FoldAssignment::new(folds, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<bool> {
        (0..n).map(|i| i % 2 == 0).collect()
    }

    #[test]
    fn canonical_folds() {
        let l = labels(6000);
        let f = make_folds_for_labels(&l, 10, 7).unwrap();
        assert!(f.sizes().iter().all(|&s| s == 600));
        assert!(f.balance(&l).iter().all(|&b| b == (300, 300)));
    }

    #[test]
    fn fixture_folds() {
        let l = labels(60);
        let f = make_folds_for_labels(&l, 10, 7).unwrap();
        assert!(f.balance(&l).iter().all(|&b| b == (3, 3)));
        assert_eq!(f, make_folds_for_labels(&l, 10, 7).unwrap());
    }

    #[test]
    fn indivisible_rejected() {
        assert!(make_folds_for_labels(&labels(50), 10, 1).is_err());
        assert!(make_folds_for_labels(&labels(65), 10, 1).is_err());
    }

    #[test]
    fn text_round_trip() {
        let f = make_folds_for_labels(&labels(20), 10, 3).unwrap();
        let back = FoldAssignment::parse(&f.to_text(), Path::new("folds.txt")).unwrap();
        assert_eq!(back, f);
        assert!(FoldAssignment::parse("0 1\n0 2\n", Path::new("f")).is_err());
    }
}

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::embeddings::EmbeddingTable;
use super::metrics::{best_threshold, correct_at, cosine_similarity};
use crate::dataset::FoldAssignment;
use crate::error::{Error, Result};

/// One verification pair as evaluated: the two embedding ids and the label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalPair {
    pub image_a: String,
    pub image_b: String,
    pub same_identity: bool,
}

/// Parses a pairing file. Five-column lines
/// (`source_a source_b label image_a image_b`) use the image columns, three-column
/// lines (`image_a image_b label`) use their ids directly.
pub fn parse_pairing(text: &str, origin: &Path) -> Result<Vec<EvalPair>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        let (a, b, label) = match cols.as_slice() {
            [_, _, l, a, b] => (*a, *b, *l),
            [a, b, l] => (*a, *b, *l),
            _ => {
                return Err(Error::parse(
                    origin,
                    format!("line {}: expected 3 or 5 columns, found {}", lineno + 1, cols.len()),
                ))
            }
        };
        let same_identity = match label {
            "1" => true,
            "0" => false,
            _ => {
                return Err(Error::parse(
                    origin,
                    format!("line {}: label must be 0 or 1, got '{label}'", lineno + 1),
                ))
            }
        };
        out.push(EvalPair {
            image_a: a.to_string(),
            image_b: b.to_string(),
            same_identity,
        });
    }
    Ok(out)
}

pub fn read_pairing(path: impl AsRef<Path>) -> Result<Vec<EvalPair>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_pairing(&text, path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub threshold: f64,
    pub accuracy: f64,
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub folds: Vec<FoldResult>,
    pub mean_accuracy: f64,
    /// Population standard deviation of the fold accuracies.
    pub std_accuracy: f64,
    pub pair_count: usize,
}

impl VerificationReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Mean line plus a per-fold table, accuracies in percent.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "accuracy: {:.2}% +- {:.2}% over {} pairs\n",
            self.mean_accuracy * 100.0,
            self.std_accuracy * 100.0,
            self.pair_count
        );
        s.push_str("fold  pairs  threshold  accuracy\n");
        for f in &self.folds {
            let _ = writeln!(
                s,
                "{:>4}  {:>5}  {:>9.6}  {:>7.2}%",
                f.fold,
                f.pairs,
                f.threshold,
                f.accuracy * 100.0
            );
        }
        s
    }
}

/// Cosine similarity of every pair; fails listing every missing id.
pub fn pair_similarities(pairs: &[EvalPair], table: &EmbeddingTable) -> Result<Vec<f64>> {
    let missing: BTreeSet<&str> = pairs
        .iter()
        .flat_map(|p| [p.image_a.as_str(), p.image_b.as_str()])
        .filter(|id| !table.contains(id))
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingEmbeddings(missing.into_iter().map(String::from).collect()));
    }
    pairs
        .iter()
        .map(|p| cosine_similarity(table.get(&p.image_a).unwrap(), table.get(&p.image_b).unwrap()))
        .collect()
}

/// k-fold verification accuracy: each fold is scored at the threshold chosen
/// on the other k-1 folds.
pub fn kfold_accuracy(
    pairs: &[EvalPair],
    folds: &FoldAssignment,
    table: &EmbeddingTable,
    k: usize,
) -> Result<VerificationReport> {
    let sims = pair_similarities(pairs, table)?;
    let labels: Vec<bool> = pairs.iter().map(|p| p.same_identity).collect();
    kfold_from_similarities(&sims, &labels, &folds.folds, k)
}

pub fn kfold_from_similarities(
    sims: &[f64],
    labels: &[bool],
    folds: &[usize],
    k: usize,
) -> Result<VerificationReport> {
    if folds.len() != sims.len() || labels.len() != sims.len() {
        return Err(Error::invalid(format!(
            "fold assignment covers {} pairs, pairing has {}",
            folds.len(),
            sims.len()
        )));
    }
    if k < 2 {
        return Err(Error::invalid("need at least 2 folds"));
    }
    let mut results = Vec::with_capacity(k);
    for f in 0..k {
        let (mut tr_s, mut tr_l, mut te_s, mut te_l) = (vec![], vec![], vec![], vec![]);
        for i in 0..sims.len() {
            if folds[i] == f {
                te_s.push(sims[i]);
                te_l.push(labels[i]);
            } else if folds[i] < k {
                tr_s.push(sims[i]);
                tr_l.push(labels[i]);
            } else {
                return Err(Error::invalid(format!("pair {i} has fold {}, expected < {k}", folds[i])));
            }
        }
        if te_s.is_empty() {
            return Err(Error::invalid(format!("fold {f} is empty")));
        }
        let (threshold, _) = best_threshold(&tr_s, &tr_l)?;
        let accuracy = correct_at(&te_s, &te_l, threshold) as f64 / te_s.len() as f64;
        results.push(FoldResult {
            fold: f,
            threshold,
            accuracy,
            pairs: te_s.len(),
        });
    }
    let mean = results.iter().map(|r| r.accuracy).sum::<f64>() / k as f64;
    let var = results.iter().map(|r| (r.accuracy - mean).powi(2)).sum::<f64>() / k as f64;
    Ok(VerificationReport {
        folds: results,
        mean_accuracy: mean,
        std_accuracy: var.sqrt(),
        pair_count: sims.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pairing_formats() {
        let p = parse_pairing(
            "# header\na b 1 a_0001 b\nx y 0\n",
            Path::new("pairing.txt"),
        )
        .unwrap();
        assert_eq!(p[0].image_a, "a_0001");
        assert_eq!(p[0].image_b, "b");
        assert!(p[0].same_identity && !p[1].same_identity);
        assert!(parse_pairing("a b\n", Path::new("p")).is_err());
        assert!(parse_pairing("a b 2\n", Path::new("p")).is_err());
    }

    #[test]
    fn missing_ids_listed_sorted() {
        let table = EmbeddingTable::from_entries(vec![("a", vec![1.0])]).unwrap();
        let pairs = parse_pairing("z a 1\nb a 0\n", Path::new("p")).unwrap();
        match pair_similarities(&pairs, &table) {
            Err(Error::MissingEmbeddings(ids)) => assert_eq!(ids, ["b", "z"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn separable_scores_perfect() {
        let n = 60;
        let labels: Vec<bool> = (0..n).map(|i| i % 2 == 0).collect();
        let sims: Vec<f64> = (0..n).map(|i| if labels[i] { 0.8 } else { 0.1 } + i as f64 * 1e-3).collect();
        let folds: Vec<usize> = (0..n).map(|i| i / 6).collect();
        let r = kfold_from_similarities(&sims, &labels, &folds, 10).unwrap();
        assert_eq!(r.mean_accuracy, 1.0);
        assert_eq!(r.std_accuracy, 0.0);
    }

    #[test]
    fn shuffled_labels_near_chance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 600;
        let sims: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let labels: Vec<bool> = (0..n).map(|i| i % 2 == 0).collect();
        let folds: Vec<usize> = (0..n).map(|i| (i / 2) % 10).collect();
        let r = kfold_from_similarities(&sims, &labels, &folds, 10).unwrap();
        assert!((0.45..=0.55).contains(&r.mean_accuracy), "{}", r.mean_accuracy);
    }
}

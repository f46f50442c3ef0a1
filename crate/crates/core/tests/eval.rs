use std::path::Path;

use maskface::dataset::make_folds_for_labels;
use maskface::eval::{
    best_threshold, kfold_accuracy, kfold_from_similarities, EmbeddingTable, EvalPair,
};
use proptest::prelude::*;

fn samples() -> impl Strategy<Value = Vec<(f64, bool)>> {
    prop::collection::vec(((0u32..40).prop_map(|v| v as f64 / 40.0 - 0.5), any::<bool>()), 1..80)
}

proptest! {
    #[test]
    fn accuracy_invariant_under_monotone_transform(s in samples()) {
        let (sims, labels): (Vec<f64>, Vec<bool>) = s.into_iter().unzip();
        let (_, acc) = best_threshold(&sims, &labels).unwrap();
        let warped: Vec<f64> = sims.iter().map(|x| (3.0 * x).exp() + 0.25).collect();
        let (_, acc2) = best_threshold(&warped, &labels).unwrap();
        prop_assert_eq!(acc, acc2);
    }

    #[test]
    fn chosen_threshold_reproduces_accuracy(s in samples()) {
        let (sims, labels): (Vec<f64>, Vec<bool>) = s.into_iter().unzip();
        let (t, acc) = best_threshold(&sims, &labels).unwrap();
        let ok = sims.iter().zip(&labels).filter(|(&x, &l)| (x >= t) == l).count();
        prop_assert_eq!(acc, ok as f64 / sims.len() as f64);
        prop_assert!(acc >= 0.5);
    }

    #[test]
    fn kfold_invariant_under_reordering(seed in any::<u64>(), perm_seed in any::<u64>()) {
        use rand::{seq::SliceRandom, Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = 60;
        let labels: Vec<bool> = (0..n).map(|i| i % 2 == 0).collect();
        let sims: Vec<f64> = (0..n).map(|i| rng.random::<f64>() + labels[i] as u8 as f64 * 0.3).collect();
        let folds = make_folds_for_labels(&labels, 10, seed).unwrap().folds;
        let base = kfold_from_similarities(&sims, &labels, &folds, 10).unwrap();

        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
        let pick = |v: &[f64]| order.iter().map(|&i| v[i]).collect::<Vec<_>>();
        let l2: Vec<bool> = order.iter().map(|&i| labels[i]).collect();
        let f2: Vec<usize> = order.iter().map(|&i| folds[i]).collect();
        let shuffled = kfold_from_similarities(&pick(&sims), &l2, &f2, 10).unwrap();
        prop_assert_eq!(base, shuffled);
    }
}

#[test]
fn report_mean_is_fold_average() {
    let labels: Vec<bool> = (0..60).map(|i| i % 2 == 0).collect();
    let sims: Vec<f64> = (0..60).map(|i| ((i * 37) % 60) as f64 / 60.0).collect();
    let folds = make_folds_for_labels(&labels, 10, 3).unwrap().folds;
    let r = kfold_from_similarities(&sims, &labels, &folds, 10).unwrap();
    let mean = r.folds.iter().map(|f| f.accuracy).sum::<f64>() / 10.0;
    assert!((r.mean_accuracy - mean).abs() < 1e-12);
    assert!(r.folds.iter().all(|f| (0.0..=1.0).contains(&f.accuracy) && f.pairs == 6));
    assert_eq!(r.pair_count, 60);
}

#[test]
fn embedding_files_by_extension() {
    let dir = tempfile::tempdir().unwrap();
    let table = EmbeddingTable::from_entries(vec![("x", vec![1.0, 2.0]), ("y", vec![-1.0, 0.5])]).unwrap();
    for name in ["e.txt", "e.bin"] {
        let p = dir.path().join(name);
        table.write(&p).unwrap();
        assert_eq!(EmbeddingTable::read(&p).unwrap(), table);
    }
    let text = std::fs::read_to_string(dir.path().join("e.txt")).unwrap();
    assert_eq!(text, "x 2 1 2\ny 2 -1 0.5\n");
    assert!(EmbeddingTable::read(Path::new("/nonexistent/e.txt")).is_err());
}

#[test]
fn separable_embeddings_score_perfectly() {
    let mut table = EmbeddingTable::new();
    let mut pairs = Vec::new();
    for i in 0..60 {
        let same = i % 2 == 0;
        let dir = |k: usize| {
            let a = k as f32 * 0.7;
            vec![a.cos(), a.sin(), 0.0]
        };
        table.insert(format!("a{i}"), dir(i)).unwrap();
        let b = if same { dir(i) } else { dir(i + 2) };
        table.insert(format!("b{i}"), b).unwrap();
        pairs.push(EvalPair { image_a: format!("a{i}"), image_b: format!("b{i}"), same_identity: same });
    }
    let labels: Vec<bool> = pairs.iter().map(|p| p.same_identity).collect();
    let folds = make_folds_for_labels(&labels, 10, 0).unwrap();
    let r = kfold_accuracy(&pairs, &folds, &table, 10).unwrap();
    assert_eq!(r.mean_accuracy, 1.0);
}

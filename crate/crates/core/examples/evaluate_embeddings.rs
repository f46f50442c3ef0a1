//! 10-fold verification accuracy on synthetic identity-cluster embeddings,
//! with growing noise on the masked side of each pair.

use maskface::dataset::make_folds_for_labels;
use maskface::eval::{kfold_accuracy, EmbeddingTable, EvalPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DIM: usize = 64;

fn unit(rng: &mut ChaCha8Rng) -> Vec<f32> {
    let v: Vec<f32> = (0..DIM).map(|_| rng.random::<f32>() - 0.5).collect();
    let n = v.iter().map(|x| x * x).sum::<f32>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

fn main() -> maskface::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let identities: Vec<Vec<f32>> = (0..40).map(|_| unit(&mut rng)).collect();
    let pairs: Vec<(usize, usize, bool)> = (0..600)
        .map(|i| {
            let a = rng.random_range(0..identities.len());
            if i % 2 == 0 {
                (a, a, true)
            } else {
                (a, (a + 1 + rng.random_range(0..identities.len() - 1)) % identities.len(), false)
            }
        })
        .collect();
    let labels: Vec<bool> = pairs.iter().map(|p| p.2).collect();
    let folds = make_folds_for_labels(&labels, 10, 1)?;

    for sigma in [0.0f32, 0.2, 0.5, 1.0] {
        let mut table = EmbeddingTable::new();
        let mut eval_pairs = Vec::new();
        for (i, &(a, b, same)) in pairs.iter().enumerate() {
            let jitter = |rng: &mut ChaCha8Rng, c: &[f32], s: f32| -> Vec<f32> {
                c.iter().map(|x| x + s * (rng.random::<f32>() - 0.5) * 0.3).collect()
            };
            let (ia, ib) = (format!("p{i}_a"), format!("p{i}_b"));
            table.insert(&ia, jitter(&mut rng, &identities[a], 1.0))?;
            let masked = jitter(&mut rng, &identities[b], 1.0);
            table.insert(&ib, jitter(&mut rng, &masked, sigma * 4.0))?;
            eval_pairs.push(EvalPair { image_a: ia, image_b: ib, same_identity: same });
        }
        let report = kfold_accuracy(&eval_pairs, &folds, &table, 10)?;
        println!(
            "sigma {sigma:.1}: {:.2}% +- {:.2}%",
            report.mean_accuracy * 100.0,
            report.std_accuracy * 100.0
        );
    }
    Ok(())
}

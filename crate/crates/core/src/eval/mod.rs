//! k-fold face verification accuracy over precomputed embeddings.

mod embeddings;
mod kfold;
mod metrics;

pub use embeddings::EmbeddingTable;
pub use kfold::{
    kfold_accuracy, kfold_from_similarities, pair_similarities, parse_pairing, read_pairing,
    EvalPair, FoldResult, VerificationReport,
};
pub use metrics::{best_threshold, correct_at, cosine_similarity, threshold_candidates, THRESHOLD_EPSILON};

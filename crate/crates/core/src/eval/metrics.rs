use crate::error::{Error, Result};

/// Margin placed below the smallest and above the largest similarity.
pub const THRESHOLD_EPSILON: f64 = 1e-6;

/// `u.v / (|u| |v|)`, accumulated in f64 and clamped to [-1, 1].
pub fn cosine_similarity(u: &[f32], v: &[f32]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            u.len(),
            v.len()
        )));
    }
    let (mut dot, mut nu, mut nv) = (0.0f64, 0.0f64, 0.0f64);
    for (&a, &b) in u.iter().zip(v) {
        let (a, b) = (a as f64, b as f64);
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::invalid("zero-norm vector"));
    }
    Ok((dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0))
}

/// Candidate thresholds in increasing order: just below the minimum, every
/// midpoint of consecutive distinct values, just above the maximum.
pub fn threshold_candidates(similarities: &[f64]) -> Vec<f64> {
    let mut u: Vec<f64> = similarities.to_vec();
    u.sort_by(f64::total_cmp);
    u.dedup();
    let mut c = Vec::with_capacity(u.len() + 1);
    if let (Some(&lo), Some(&hi)) = (u.first(), u.last()) {
        c.push(lo - THRESHOLD_EPSILON);
        c.extend(u.windows(2).map(|w| (w[0] + w[1]) / 2.0));
        c.push(hi + THRESHOLD_EPSILON);
    }
    c
}

/// Number of pairs classified correctly by "same iff sim >= t".
pub fn correct_at(similarities: &[f64], labels: &[bool], t: f64) -> usize {
    similarities
        .iter()
        .zip(labels)
        .filter(|&(&s, &same)| (s >= t) == same)
        .count()
}

/// Threshold maximizing accuracy over [`threshold_candidates`], ties going to
/// the smallest threshold. Returns `(threshold, accuracy)`.
pub fn best_threshold(similarities: &[f64], labels: &[bool]) -> Result<(f64, f64)> {
    if similarities.is_empty() {
        return Err(Error::invalid("best_threshold needs at least one sample"));
    }
    if similarities.len() != labels.len() {
        return Err(Error::invalid("similarities and labels differ in length"));
    }
    if similarities.iter().any(|s| !s.is_finite()) {
        return Err(Error::invalid("non-finite similarity"));
    }
    let mut order: Vec<usize> = (0..similarities.len()).collect();
    order.sort_by(|&a, &b| similarities[a].total_cmp(&similarities[b]));

    // Sweep upward: at the first candidate everything is predicted "same".
    let candidates = threshold_candidates(similarities);
    let mut correct = labels.iter().filter(|&&l| l).count() as i64;
    let (mut best_t, mut best_c) = (candidates[0], correct);
    let mut i = 0;
    for &t in &candidates[1..] {
        // samples below t switch to "different"
        while i < order.len() && similarities[order[i]] < t {
            correct += if labels[order[i]] { -1 } else { 1 };
            i += 1;
        }
        if correct > best_c {
            best_c = correct;
            best_t = t;
        }
    }
    let acc = correct_at(similarities, labels, best_t) as f64 / similarities.len() as f64;
    Ok((best_t, acc))
}

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::pairs::PairList;
use crate::error::{Error, Result};
use crate::gallery::Gallery;
use crate::rng;

/// The three pair categories of a masked verification set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Scenario {
    /// One side masked; positives and negatives.
    OneMasked = 1,
    /// Same identity, both masked with different templates.
    DifferentMasks = 2,
    /// Different identities, both masked with the same template.
    SameMask = 3,
}

impl Scenario {
    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn mask_count(self) -> usize {
        match self {
            Scenario::OneMasked => 1,
            _ => 2,
        }
    }
}

impl From<Scenario> for u8 {
    fn from(s: Scenario) -> u8 {
        s as u8
    }
}

impl TryFrom<u8> for Scenario {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            1 => Ok(Scenario::OneMasked),
            2 => Ok(Scenario::DifferentMasks),
            3 => Ok(Scenario::SameMask),
            _ => Err(format!("unknown scenario {v}")),
        }
    }
}

/// One side of a pair: the source image and, if masked, how.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SidePlan {
    pub source: String,
    pub masked: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Output image id (suffixed source id) for masked sides.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl SidePlan {
    fn new(source: &str, masked: bool) -> Self {
        Self {
            source: source.to_string(),
            masked,
            template_id: None,
            seed: None,
            output: None,
        }
    }

    /// The id this side is evaluated under: the masked output if any, else the source.
    pub fn image_id(&self) -> &str {
        self.output.as_deref().unwrap_or(&self.source)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub pair_index: usize,
    pub same_identity: bool,
    pub scenario: Scenario,
    pub a: SidePlan,
    pub b: SidePlan,
}

impl PairRecord {
    pub fn sides(&self) -> [(&'static str, &SidePlan); 2] {
        [("a", &self.a), ("b", &self.b)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationPlan {
    pub global_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gallery_id: Option<String>,
    pub records: Vec<PairRecord>,
}

/// Scenario sizes for a pair list of `total` pairs: half one-masked, a quarter each
/// of the two-mask scenarios.
pub fn scenario_sizes(total: usize) -> [usize; 3] {
    [total / 2, total / 4, total / 4]
}

/// Seeded split of a balanced pair list into the three scenarios.
///
/// A quarter of the list (all positives) becomes [`Scenario::DifferentMasks`], a
/// quarter (all negatives) [`Scenario::SameMask`], and the remaining half, with
/// equal polarity, [`Scenario::OneMasked`] with a uniformly chosen masked side.
pub fn split_pairs(pairs: &PairList, seed: u64) -> Result<GenerationPlan> {
    let total = pairs.len();
    if total == 0 || total % 4 != 0 {
        return Err(Error::invalid(format!(
            "pair count must be a positive multiple of 4, got {total}"
        )));
    }
    let quarter = total / 4;
    let (pos, neg) = (pairs.positives(), pairs.negatives());
    if pos < 2 * quarter || neg < 2 * quarter {
        return Err(Error::invalid(format!(
            "insufficient pairs: need {} positive and {} negative, got {pos} positive and {neg} negative",
            2 * quarter,
            2 * quarter
        )));
    }

    let mut r = rng::stream(seed, "split");
    let mut positives: Vec<usize> = (0..total).filter(|&i| pairs.entries[i].same_identity).collect();
    let mut negatives: Vec<usize> = (0..total).filter(|&i| !pairs.entries[i].same_identity).collect();
    positives.shuffle(&mut r);
    negatives.shuffle(&mut r);

    let mut scenario = vec![Scenario::OneMasked; total];
    for &i in &positives[..quarter] {
        scenario[i] = Scenario::DifferentMasks;
    }
    for &i in &negatives[..quarter] {
        scenario[i] = Scenario::SameMask;
    }

    let records = pairs
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (mask_a, mask_b) = match scenario[i] {
                Scenario::OneMasked => {
                    let a = r.random_bool(0.5);
                    (a, !a)
                }
                _ => (true, true),
            };
            PairRecord {
                pair_index: i,
                same_identity: e.same_identity,
                scenario: scenario[i],
                a: SidePlan::new(&e.name_a, mask_a),
                b: SidePlan::new(&e.name_b, mask_b),
            }
        })
        .collect();
    Ok(GenerationPlan {
        global_seed: seed,
        gallery_id: None,
        records,
    })
}

/// Fills template ids, per-image seeds and suffixed output names.
///
/// Scenario 2 records get two distinct templates, scenario 3 records one
/// shared template, all drawn uniformly. Each masked occurrence of a source
/// image gets the next suffix `_0001`, `_0002`, ... in plan order.
pub fn assign_template_ids(
    plan: &GenerationPlan,
    template_ids: &[&str],
    gallery_id: &str,
    seed: u64,
) -> Result<GenerationPlan> {
    let n = template_ids.len();
    let needs_two = plan.records.iter().any(|r| r.scenario == Scenario::DifferentMasks);
    if n == 0 || (needs_two && n < 2) {
        return Err(Error::invalid(format!(
            "gallery has {n} template(s); at least 2 are needed for different-mask pairs"
        )));
    }
    let mut r = rng::stream(seed, "templates");
    let mut out = plan.clone();
    out.gallery_id = Some(gallery_id.to_string());
    for rec in &mut out.records {
        let (ta, tb) = match rec.scenario {
            Scenario::OneMasked => {
                let t = template_ids[r.random_range(0..n)];
                (t, t)
            }
            Scenario::DifferentMasks => {
                let i = r.random_range(0..n);
                let mut j = r.random_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                (template_ids[i], template_ids[j])
            }
            Scenario::SameMask => {
                let t = template_ids[r.random_range(0..n)];
                (t, t)
            }
        };
        rec.a.template_id = rec.a.masked.then(|| ta.to_string());
        rec.b.template_id = rec.b.masked.then(|| tb.to_string());
    }

    let mut counters: BTreeMap<String, u32> = BTreeMap::new();
    for rec in &mut out.records {
        for side in [&mut rec.a, &mut rec.b] {
            if !side.masked {
                continue;
            }
            let count = counters.entry(side.source.clone()).or_insert(0);
            *count += 1;
            let name = format!("{}_{:04}", side.source, *count);
            side.seed = Some(rng::derive_seed(out.global_seed, &name));
            side.output = Some(name);
        }
    }
    Ok(out)
}

pub fn assign_templates(plan: &GenerationPlan, gallery: &Gallery, seed: u64) -> Result<GenerationPlan> {
    assign_template_ids(plan, &gallery.ids(), &gallery.name, seed)
}

/// Per-mask-count pair tallies plus scenario sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Statistics {
    pub one_mask_positive: usize,
    pub one_mask_negative: usize,
    pub two_masks_positive: usize,
    pub two_masks_negative: usize,
    pub scenario_sizes: [usize; 3],
    pub masked_images: usize,
}

impl Statistics {
    pub fn of(plan: &GenerationPlan) -> Self {
        let mut s = Statistics::default();
        for r in &plan.records {
            s.scenario_sizes[r.scenario.number() as usize - 1] += 1;
            s.masked_images += r.a.masked as usize + r.b.masked as usize;
            match (r.scenario.mask_count(), r.same_identity) {
                (1, true) => s.one_mask_positive += 1,
                (1, false) => s.one_mask_negative += 1,
                (_, true) => s.two_masks_positive += 1,
                (_, false) => s.two_masks_negative += 1,
            }
        }
        s
    }

    /// Mask-count table followed by scenario sizes.
    pub fn table(&self) -> String {
        format!(
            "Mask count | Positive pairs | Negative pairs\n\
             ---------- | -------------- | --------------\n\
             {:>10} | {:>14} | {:>14}\n\
             {:>10} | {:>14} | {:>14}\n\
             scenario sizes: {} / {} / {}; masked images: {}\n",
            1,
            self.one_mask_positive,
            self.one_mask_negative,
            2,
            self.two_masks_positive,
            self.two_masks_negative,
            self.scenario_sizes[0],
            self.scenario_sizes[1],
            self.scenario_sizes[2],
            self.masked_images
        )
    }
}

impl GenerationPlan {
    pub fn statistics(&self) -> Statistics {
        Statistics::of(self)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::parse(path, e.to_string()))
    }

    /// Checks the scenario constraints; returns one message per violation.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.records {
            let i = r.pair_index;
            match r.scenario {
                Scenario::OneMasked => {
                    if r.a.masked == r.b.masked {
                        out.push(format!("pair {i}: scenario 1 must mask exactly one side"));
                    }
                }
                Scenario::DifferentMasks => {
                    if !r.same_identity || !r.a.masked || !r.b.masked {
                        out.push(format!("pair {i}: scenario 2 needs a positive pair with both sides masked"));
                    }
                    if r.a.template_id.is_some() && r.a.template_id == r.b.template_id {
                        out.push(format!("pair {i}: scenario 2 templates must differ"));
                    }
                }
                Scenario::SameMask => {
                    if r.same_identity || !r.a.masked || !r.b.masked {
                        out.push(format!("pair {i}: scenario 3 needs a negative pair with both sides masked"));
                    }
                    if r.a.template_id != r.b.template_id {
                        out.push(format!("pair {i}: scenario 3 templates must match"));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn balanced(n: usize) -> PairList {
        PairList::from_tuples((0..n).map(|i| (format!("x{i}"), format!("y{i}"), i % 2 == 0)))
    }

    #[test]
    fn canonical_split_sizes() {
        let plan = split_pairs(&balanced(6000), 1).unwrap();
        let s = plan.statistics();
        assert_eq!(s.scenario_sizes, [3000, 1500, 1500]);
        assert_eq!((s.one_mask_positive, s.one_mask_negative), (1500, 1500));
        assert_eq!((s.two_masks_positive, s.two_masks_negative), (1500, 1500));
        assert!(plan.violations().is_empty());
    }

    #[test]
    fn split_is_seeded() {
        let pairs = balanced(60);
        assert_eq!(split_pairs(&pairs, 9).unwrap(), split_pairs(&pairs, 9).unwrap());
        assert_ne!(split_pairs(&pairs, 9).unwrap(), split_pairs(&pairs, 10).unwrap());
    }

    #[test]
    fn unbalanced_list_rejected_with_counts() {
        let pairs = PairList::from_tuples((0..8).map(|i| (format!("a{i}"), format!("b{i}"), i < 6)));
        let err = split_pairs(&pairs, 1).unwrap_err().to_string();
        assert!(err.contains("6 positive") && err.contains("2 negative"), "{err}");
        assert!(split_pairs(&balanced(6), 1).is_err());
    }

    #[test]
    fn single_template_gallery_rejected() {
        let plan = split_pairs(&balanced(8), 1).unwrap();
        assert!(assign_template_ids(&plan, &["only"], "g", 1).is_err());
    }

    #[test]
    fn suffixes_count_per_source() {
        let pairs = PairList::from_tuples(vec![
            ("p_0001", "p_0002", true),
            ("p_0001", "p_0003", true),
            ("p_0001", "q_0001", false),
            ("r_0001", "q_0001", false),
        ]);
        let plan = split_pairs(&pairs, 3).unwrap();
        let plan = assign_template_ids(&plan, &["t1", "t2", "t3"], "g", 3).unwrap();
        let mut names: Vec<&str> = plan
            .records
            .iter()
            .flat_map(|r| [&r.a, &r.b])
            .filter_map(|s| s.output.as_deref())
            .collect();
        let total = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), total, "output names must be unique");
        for n in names {
            let (_, suffix) = n.rsplit_once('_').unwrap();
            assert_eq!(suffix.len(), 4);
        }
    }

    #[test]
    fn uniform_template_law() {
        // many scenario-3 records over a 2-template gallery
        let records: Vec<PairRecord> = (0..10_000)
            .map(|i| PairRecord {
                pair_index: i,
                same_identity: false,
                scenario: Scenario::SameMask,
                a: SidePlan::new(&format!("a{i}"), true),
                b: SidePlan::new(&format!("b{i}"), true),
            })
            .collect();
        let plan = GenerationPlan { global_seed: 4, gallery_id: None, records };
        let plan = assign_template_ids(&plan, &["t0", "t1"], "g", 4).unwrap();
        let t0 = plan
            .records
            .iter()
            .filter(|r| r.a.template_id.as_deref() == Some("t0"))
            .count() as f64
            / 10_000.0;
        assert!((0.45..=0.55).contains(&t0), "{t0}");
        // chi-square with 1 dof below the 0.1% critical value
        let e = 5000.0;
        let o = t0 * 10_000.0;
        let chi2 = (o - e).powi(2) / e * 2.0;
        assert!(chi2 < 10.83, "{chi2}");
    }

    #[test]
    fn plan_json_round_trip() {
        let plan = split_pairs(&balanced(8), 5).unwrap();
        let plan = assign_template_ids(&plan, &["a", "b"], "g", 5).unwrap();
        let back: GenerationPlan = serde_json::from_str(&plan.to_json().unwrap()).unwrap();
        assert_eq!(back, plan);
    }
}

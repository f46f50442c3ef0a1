//! Verification-pair dataset construction: scenario split, template
//! assignment, masked image generation and cross-validation folds.

mod folds;
mod generate;
mod pairs;
mod plan;

pub use folds::{make_folds, make_folds_for_labels, FoldAssignment, FOLD_COUNT};
pub use generate::{
    build_dataset, find_image, generate, pairing_text, Artifact, BuildConfig, BuildSummary,
    GenerationManifest, PairError, IMAGE_EXTENSIONS,
};
pub use pairs::{PairEntry, PairList};
pub use plan::{
    assign_template_ids, assign_templates, scenario_sizes, split_pairs, GenerationPlan, PairRecord,
    Scenario, SidePlan, Statistics,
};

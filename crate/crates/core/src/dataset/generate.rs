use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::folds::{make_folds, FoldAssignment};
use super::pairs::PairList;
use super::plan::{assign_templates, split_pairs, GenerationPlan, Statistics};
use crate::compose::{apply_mask, AppliedOffsets, ComposeParams};
use crate::error::{Error, Result};
use crate::gallery::{load_gallery, Gallery};
use crate::geometry::LandmarkSet;
use crate::imaging::{read_image, write_png};

pub const IMAGE_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];
pub const MANIFEST_VERSION: u32 = 1;

/// Finds `<dir>/<id>.{png,jpg,jpeg}`.
pub fn find_image(dir: &Path, id: &str) -> Option<PathBuf> {
    IMAGE_EXTENSIONS
        .iter()
        .map(|ext| dir.join(format!("{id}.{ext}")))
        .find(|p| p.is_file())
}

/// One generated masked face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub pair_index: usize,
    pub side: String,
    pub source: String,
    pub output: String,
    pub image: String,
    pub landmarks: String,
    pub template_id: String,
    pub seed: u64,
    pub offsets: AppliedOffsets,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairError {
    pub pair_index: usize,
    pub side: String,
    pub source: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationManifest {
    pub version: u32,
    pub gallery: String,
    pub global_seed: u64,
    pub params: ComposeParams,
    pub statistics: Statistics,
    pub artifacts: Vec<Artifact>,
    pub errors: Vec<PairError>,
}

impl GenerationManifest {
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
}

struct Job<'a> {
    pair_index: usize,
    side: &'static str,
    source: &'a str,
    output: &'a str,
    template_id: &'a str,
    seed: u64,
}

fn run_job(
    job: &Job<'_>,
    image_dir: &Path,
    landmark_dir: &Path,
    gallery: &Gallery,
    params: &ComposeParams,
    out_dir: &Path,
) -> Result<Artifact> {
    let face_path = find_image(image_dir, job.source).ok_or_else(|| {
        Error::invalid(format!(
            "no image for '{}' in {} (tried .png/.jpg/.jpeg)",
            job.source,
            image_dir.display()
        ))
    })?;
    let face = read_image(&face_path)?;
    let landmarks = LandmarkSet::read(landmark_dir.join(format!("{}.txt", job.source)))?;
    let template = gallery
        .get(job.template_id)
        .ok_or_else(|| Error::Gallery(format!("template '{}' not in gallery", job.template_id)))?;
    let result = apply_mask(&face, &landmarks, template, &params.with_seed(job.seed))?;

    let image = format!("images/{}.png", job.output);
    let lm = format!("landmarks/{}.txt", job.output);
    write_png(out_dir.join(&image), &result.image)?;
    result.landmarks.write(out_dir.join(&lm))?;
    Ok(Artifact {
        pair_index: job.pair_index,
        side: job.side.to_string(),
        source: job.source.to_string(),
        output: job.output.to_string(),
        image,
        landmarks: lm,
        template_id: result.template_id,
        seed: job.seed,
        offsets: result.offsets,
        warnings: result.warnings,
    })
}

/// Renders every masked side of `plan` into `out_dir/images` and
/// `out_dir/landmarks`. Failures are collected per pair; the build goes on.
pub fn generate(
    plan: &GenerationPlan,
    image_dir: &Path,
    landmark_dir: &Path,
    gallery: &Gallery,
    params: &ComposeParams,
    out_dir: &Path,
) -> Result<GenerationManifest> {
    params.validate()?;
    for d in ["images", "landmarks"] {
        let p = out_dir.join(d);
        std::fs::create_dir_all(&p).map_err(|e| Error::io(&p, e))?;
    }
    let mut jobs = Vec::new();
    for rec in &plan.records {
        for (side, s) in rec.sides() {
            if !s.masked {
                continue;
            }
            let (Some(output), Some(template_id), Some(seed)) = (&s.output, &s.template_id, s.seed) else {
                return Err(Error::invalid(format!(
                    "pair {} side {side} is masked but has no template assignment",
                    rec.pair_index
                )));
            };
            jobs.push(Job {
                pair_index: rec.pair_index,
                side,
                source: &s.source,
                output,
                template_id,
                seed,
            });
        }
    }

    let results: Vec<(usize, Result<Artifact>)> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, job)| (i, run_job(job, image_dir, landmark_dir, gallery, params, out_dir)))
        .collect();

    let mut artifacts = Vec::new();
    let mut errors = Vec::new();
    for (i, r) in results {
        let job = &jobs[i];
        match r {
            Ok(a) => artifacts.push(a),
            Err(e) => {
                log::warn!("pair {} side {}: {e}", job.pair_index, job.side);
                errors.push(PairError {
                    pair_index: job.pair_index,
                    side: job.side.to_string(),
                    source: job.source.to_string(),
                    message: e.to_string(),
                })
            }
        }
    }
    artifacts.sort_by(|a, b| (a.pair_index, &a.side).cmp(&(b.pair_index, &b.side)));
    errors.sort_by(|a, b| (a.pair_index, &a.side).cmp(&(b.pair_index, &b.side)));

    Ok(GenerationManifest {
        version: MANIFEST_VERSION,
        gallery: plan.gallery_id.clone().unwrap_or_else(|| gallery.name.clone()),
        global_seed: plan.global_seed,
        params: *params,
        statistics: plan.statistics(),
        artifacts,
        errors,
    })
}

/// Pairing file: a header comment, then one
/// `source_a source_b label image_a image_b` line per pair in input order.
/// Image columns are the ids to look up in an embedding table; unmasked sides
/// repeat the source id.
pub fn pairing_text(plan: &GenerationPlan) -> String {
    let mut s = String::from("# source_a source_b label image_a image_b\n");
    for r in &plan.records {
        let _ = writeln!(
            s,
            "{} {} {} {} {}",
            r.a.source,
            r.b.source,
            r.same_identity as u8,
            r.a.image_id(),
            r.b.image_id()
        );
    }
    s
}

/// Inputs of a full dataset build.
#[derive(Debug, Clone)]
pub struct BuildConfig {
    pub pairs: PathBuf,
    pub images: PathBuf,
    pub landmarks: PathBuf,
    pub gallery: PathBuf,
    pub out: PathBuf,
    pub seed: u64,
    pub params: ComposeParams,
    /// Reuse an existing fold file instead of drawing new folds.
    pub folds_from: Option<PathBuf>,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct BuildSummary {
    pub plan: GenerationPlan,
    pub folds: FoldAssignment,
    pub manifest: GenerationManifest,
}

impl BuildSummary {
    pub fn statistics(&self) -> Statistics {
        self.plan.statistics()
    }

    pub fn report(&self) -> String {
        let mut s = self.statistics().table();
        let sizes = self.folds.sizes();
        let _ = writeln!(
            s,
            "folds: {} x {} pairs",
            sizes.len(),
            sizes.first().copied().unwrap_or(0)
        );
        let _ = writeln!(
            s,
            "generated {} masked images, {} failures",
            self.manifest.artifacts.len(),
            self.manifest.errors.len()
        );
        s
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Split, assign, generate and fold; writes plan.json, pairing.txt,
/// folds.txt and manifest.json under `config.out`.
pub fn build_dataset(config: &BuildConfig) -> Result<BuildSummary> {
    let pairs = PairList::read(&config.pairs)?;
    let gallery = load_gallery(&config.gallery)?;
    let plan = split_pairs(&pairs, config.seed)?;
    let plan = assign_templates(&plan, &gallery, config.seed)?;
    let folds = match &config.folds_from {
        Some(p) => {
            let f = FoldAssignment::read(p)?;
            if f.len() != plan.records.len() {
                return Err(Error::invalid(format!(
                    "fold file {} covers {} pairs, pair list has {}",
                    p.display(),
                    f.len(),
                    plan.records.len()
                )));
            }
            f
        }
        None => make_folds(&plan, config.seed)?,
    };

    let out = &config.out;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    write_text(&out.join("plan.json"), &plan.to_json()?)?;

    let run = || generate(&plan, &config.images, &config.landmarks, &gallery, &config.params, out);
    let manifest = match config.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };

    write_text(&out.join("pairing.txt"), &pairing_text(&plan))?;
    write_text(&out.join("folds.txt"), &folds.to_text())?;
    write_text(&out.join("manifest.json"), &manifest.to_json()?)?;
    Ok(BuildSummary { plan, folds, manifest })
}

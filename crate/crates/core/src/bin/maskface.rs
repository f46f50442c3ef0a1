use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use maskface::compose::{apply_mask, ComposeParams};
use maskface::dataset::{build_dataset, BuildConfig, FoldAssignment};
use maskface::eval::{kfold_accuracy, read_pairing, EmbeddingTable};
use maskface::gallery::{load_gallery, load_unvalidated, validate_template, Severity};
use maskface::geometry::LandmarkSet;
use maskface::imaging::{read_image, write_png};
use maskface::{Error, Result};

/// Masked-face synthesis and masked face verification benchmarking.
#[derive(Parser)]
#[command(name = "maskface", version)]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Put one mask template on one face.
    MaskOne(MaskOneArgs),
    /// Build a masked verification dataset from a pair list.
    BuildDataset(BuildArgs),
    /// Score an embedding table with k-fold verification accuracy.
    Eval(EvalArgs),
    /// Check every template of a gallery.
    ValidateGallery(ValidateArgs),
}

#[derive(Args)]
struct ParamArgs {
    /// Side of the square working canvas.
    #[arg(long, default_value_t = 500)]
    target_side: u32,
    /// Side of the square output image.
    #[arg(long, default_value_t = 250)]
    output_side: u32,
    /// Lightness matching weight in [0, 1].
    #[arg(long, default_value_t = 0.6)]
    alpha: f64,
    /// Odd Gaussian kernel size for the mask boundary (1 disables blur).
    #[arg(long, default_value_t = 5)]
    beta: usize,
    /// Face-top perturbation radius, fraction of interocular distance.
    #[arg(long, default_value_t = 0.1)]
    perturb_face_top: f64,
    /// Mask-top perturbation radius, fraction of mask point height.
    #[arg(long, default_value_t = 0.1)]
    perturb_mask_top: f64,
    /// Sets both perturbation radii at once.
    #[arg(long)]
    perturb: Option<f64>,
}

impl ParamArgs {
    fn params(&self, seed: u64) -> ComposeParams {
        ComposeParams {
            target_side: self.target_side,
            output_side: self.output_side,
            alpha: self.alpha,
            beta: self.beta,
            perturb_face_top: self.perturb.unwrap_or(self.perturb_face_top),
            perturb_mask_top: self.perturb.unwrap_or(self.perturb_mask_top),
            seed,
        }
    }
}

#[derive(Args)]
struct MaskOneArgs {
    /// Face image (PNG or JPEG).
    #[arg(long)]
    face: PathBuf,
    /// 68-point landmark file, one `x y` per line.
    #[arg(long)]
    landmarks: PathBuf,
    /// Gallery directory or manifest.json.
    #[arg(long)]
    gallery: PathBuf,
    /// Template id within the gallery.
    #[arg(long)]
    template: String,
    /// Output PNG; `.txt` landmark and `.json` provenance sidecars are written next to it.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct BuildArgs {
    /// Pair list (`a b label` or LFW-style lines).
    #[arg(long)]
    pairs: PathBuf,
    /// Directory of source images named `<id>.png|jpg|jpeg`.
    #[arg(long)]
    images: PathBuf,
    /// Directory of landmark files named `<id>.txt`.
    #[arg(long)]
    landmarks: PathBuf,
    /// Gallery directory or manifest.json.
    #[arg(long)]
    gallery: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reuse this fold file instead of drawing new folds.
    #[arg(long)]
    folds_from: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct EvalArgs {
    /// pairing.txt from build-dataset (or `a b label` lines).
    #[arg(long)]
    pairing: PathBuf,
    /// folds.txt (`pair_index fold` lines).
    #[arg(long)]
    folds: PathBuf,
    /// Embedding table; `.bin` selects the binary layout.
    #[arg(long)]
    embeddings: PathBuf,
    /// Where to write the JSON report.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Gallery directory or manifest.json.
    gallery: PathBuf,
}

fn with_extension(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn mask_one(args: &MaskOneArgs) -> Result<()> {
    let params = args.params.params(args.seed);
    let face = read_image(&args.face)?;
    let landmarks = LandmarkSet::read(&args.landmarks)?;
    let gallery = load_gallery(&args.gallery)?;
    let template = gallery.get(&args.template).ok_or_else(|| {
        Error::Gallery(format!(
            "template '{}' not found; available: {}",
            args.template,
            gallery.ids().join(", ")
        ))
    })?;
    let result = apply_mask(&face, &landmarks, template, &params)?;
    for w in &result.warnings {
        log::warn!("{w}");
    }
    if let Some(dir) = args.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.into(), source: e })?;
    }
    let lm_path = with_extension(&args.out, "txt");
    let prov_path = with_extension(&args.out, "json");
    write_png(&args.out, &result.image)?;
    result.landmarks.write(&lm_path)?;
    let mut prov = serde_json::to_string_pretty(&result.provenance(&params))?;
    prov.push('\n');
    std::fs::write(&prov_path, prov).map_err(|e| Error::Io { path: prov_path.clone(), source: e })?;
    for p in [&args.out, &lm_path, &prov_path] {
        println!("{}", p.display());
    }
    Ok(())
}

fn build(args: &BuildArgs) -> Result<bool> {
    let config = BuildConfig {
        pairs: args.pairs.clone(),
        images: args.images.clone(),
        landmarks: args.landmarks.clone(),
        gallery: args.gallery.clone(),
        out: args.out.clone(),
        seed: args.seed,
        params: args.params.params(args.seed),
        folds_from: args.folds_from.clone(),
        jobs: args.jobs,
    };
    let summary = build_dataset(&config)?;
    print!("{}", summary.report());
    let errors = &summary.manifest.errors;
    for e in errors {
        eprintln!("pair {} side {} ({}): {}", e.pair_index, e.side, e.source, e.message);
    }
    Ok(errors.is_empty())
}

fn eval(args: &EvalArgs) -> Result<()> {
    let pairs = read_pairing(&args.pairing)?;
    let folds = FoldAssignment::read(&args.folds)?;
    let table = EmbeddingTable::read(&args.embeddings)?;
    let report = kfold_accuracy(&pairs, &folds, &table, folds.k)?;
    print!("{}", report.to_text());
    if let Some(path) = &args.json {
        std::fs::write(path, report.to_json()?).map_err(|e| Error::Io { path: path.clone(), source: e })?;
    }
    Ok(())
}

fn validate(args: &ValidateArgs) -> Result<bool> {
    let (name, templates) = load_unvalidated(&args.gallery)?;
    let mut ok = true;
    for t in &templates {
        let findings = validate_template(t);
        if findings.is_empty() {
            println!("ok    {}", t.id);
        }
        for f in findings {
            ok &= f.severity != Severity::Error;
            println!("{f}");
        }
    }
    println!(
        "gallery '{name}': {} template(s), {}",
        templates.len(),
        if ok { "valid" } else { "invalid" }
    );
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let params = match &cli.command {
        Command::MaskOne(a) => Some(a.params.params(a.seed)),
        Command::BuildDataset(a) => Some(a.params.params(a.seed)),
        _ => None,
    };
    if let Some(Err(e)) = params.map(|p| p.validate()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }

    let outcome = match &cli.command {
        Command::MaskOne(a) => mask_one(a).map(|_| true),
        Command::BuildDataset(a) => build(a),
        Command::Eval(a) => eval(a).map(|_| true),
        Command::ValidateGallery(a) => validate(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

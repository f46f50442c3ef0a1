mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use maskface::eval::{EmbeddingTable, VerificationReport};
use maskface::imaging::{read_image, write_png};
use maskface::synth::{synthetic_face, FixtureSpec};

const BIN: &str = env!("CARGO_BIN_EXE_maskface");
const GOLDEN: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/mask_one_surgical_blue_seed7.png");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn maskface")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Writes synthetic face 0/0 and its landmarks into `dir`.
fn face_files(dir: &Path) -> (PathBuf, PathBuf) {
    let (face, lm) = synthetic_face(0, 0);
    let (f, l) = (dir.join("face.png"), dir.join("face.txt"));
    write_png(&f, &face).unwrap();
    lm.write(&l).unwrap();
    (f, l)
}

fn mask_one(dir: &Path, extra: &[&str]) -> (Output, PathBuf) {
    let (face, lm) = face_files(dir);
    let out = dir.join("out/masked.png");
    let mut args = vec![
        "mask-one",
        "--face",
        face.to_str().unwrap(),
        "--landmarks",
        lm.to_str().unwrap(),
        "--gallery",
        common::GALLERY_DIR,
        "--template",
        "surgical_blue",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    (run(&args), out)
}

#[test]
fn mask_one_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = mask_one(dir.path(), &["--seed", "7"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let bytes = std::fs::read(&out).unwrap();
    if std::env::var_os("MASKFACE_BLESS").is_some() {
        std::fs::write(GOLDEN, &bytes).unwrap();
    }
    assert!(bytes == std::fs::read(GOLDEN).unwrap(), "output differs from golden PNG");

    let prov: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    assert_eq!(prov["template_id"], "surgical_blue");
    assert_eq!(prov["seed"], 7);
    assert!(prov["offsets"]["face_top"].is_array());
    let lm = std::fs::read_to_string(out.with_extension("txt")).unwrap();
    assert_eq!(lm.lines().count(), 68);
    assert!(stdout(&o).contains("masked.png"));
}

#[test]
fn mask_one_without_post_processing() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = mask_one(dir.path(), &["--alpha", "0", "--beta", "1", "--perturb", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let face = read_image(dir.path().join("face.png")).unwrap();
    let lm = maskface::geometry::LandmarkSet::read(dir.path().join("face.txt")).unwrap();
    let gallery = maskface::gallery::load_gallery(common::GALLERY_DIR).unwrap();
    let template = gallery.get("surgical_blue").unwrap();
    let up = maskface::imaging::resize_bilinear(&face, 500, 500).unwrap();
    let warp = maskface::geometry::warp_mask(
        &template.raster,
        &template.correspondence,
        &lm.resized((250, 250), (500, 500)),
        (500, 500),
    )
    .unwrap();
    let composited = maskface::imaging::composite_alpha(&warp.layer, &up).unwrap();
    let want = maskface::imaging::resize_bilinear(&composited, 250, 250).unwrap();
    assert_eq!(read_image(&out).unwrap(), want);
}

#[test]
fn mask_one_missing_landmarks_names_path() {
    let dir = tempfile::tempdir().unwrap();
    let (face, _) = face_files(dir.path());
    let o = run(&[
        "mask-one",
        "--face",
        face.to_str().unwrap(),
        "--landmarks",
        "/no/such/landmarks.txt",
        "--gallery",
        common::GALLERY_DIR,
        "--template",
        "surgical_blue",
        "--out",
        dir.path().join("x.png").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/no/such/landmarks.txt"), "{}", stderr(&o));
}

#[test]
fn bad_arguments_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = mask_one(dir.path(), &["--beta", "4"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert_eq!(run(&["mask-one", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn help_documents_defaults() {
    let o = run(&["mask-one", "--help"]);
    let help = stdout(&o);
    for flag in ["--target-side", "--output-side", "--alpha", "--beta", "--seed", "--perturb"] {
        assert!(help.contains(flag), "missing {flag}");
    }
    for default in ["[default: 500]", "[default: 0.6]", "[default: 5]", "[default: 250]", "[default: 0.1]"] {
        assert!(help.contains(default), "missing {default}\n{help}");
    }
    assert!(stdout(&run(&["build-dataset", "--help"])).contains("--jobs"));
}

#[test]
fn build_then_eval() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = common::write_fixture(&dir.path().join("in"), &FixtureSpec::small());
    let build = |out: &Path| {
        run(&[
            "build-dataset",
            "--pairs",
            fixture.set.pairs.to_str().unwrap(),
            "--images",
            fixture.set.images.to_str().unwrap(),
            "--landmarks",
            fixture.set.landmarks.to_str().unwrap(),
            "--gallery",
            fixture.gallery.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--seed",
            "5",
        ])
    };
    let (out1, out2) = (dir.path().join("b1"), dir.path().join("b2"));
    let o = build(&out1);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("         1 |             15 |             15"), "{text}");
    assert!(text.contains("         2 |             15 |             15"), "{text}");
    assert!(build(&out2).status.success());
    assert_eq!(common::hash_tree(&out1), common::hash_tree(&out2));

    // separable embeddings: identity direction, shared by masked and unmasked ids
    let pairing = out1.join("pairing.txt");
    let pairs = maskface::eval::read_pairing(&pairing).unwrap();
    let mut table = EmbeddingTable::new();
    for p in &pairs {
        for id in [&p.image_a, &p.image_b] {
            let person: f32 = id[7..10].parse().unwrap();
            let v = (0..12).map(|k| if k == person as usize { 1.0 } else { 0.0 }).collect();
            table.insert(id.clone(), v).unwrap();
        }
    }
    let emb = dir.path().join("emb.bin");
    table.write(&emb).unwrap();
    let json = dir.path().join("report.json");
    let o = run(&[
        "eval",
        "--pairing",
        pairing.to_str().unwrap(),
        "--folds",
        out1.join("folds.txt").to_str().unwrap(),
        "--embeddings",
        emb.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("accuracy: 100.00%"), "{}", stdout(&o));
    let report: VerificationReport = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report.mean_accuracy, 1.0);
    assert_eq!(report.folds.len(), 10);

    // drop one id: exit 1 naming it
    let victim = pairs[0].image_a.clone();
    let partial = EmbeddingTable::from_entries(
        table.iter().filter(|(id, _)| *id != victim).map(|(id, v)| (id.to_string(), v.to_vec())),
    )
    .unwrap();
    let emb2 = dir.path().join("partial.txt");
    partial.write(&emb2).unwrap();
    let o = run(&[
        "eval",
        "--pairing",
        pairing.to_str().unwrap(),
        "--folds",
        out1.join("folds.txt").to_str().unwrap(),
        "--embeddings",
        emb2.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains(&victim), "{}", stderr(&o));
}

#[test]
fn validate_gallery_cases() {
    let o = run(&["validate-gallery", common::GALLERY_DIR]);
    assert!(o.status.success(), "{}", stdout(&o));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("manifest.json");
    std::fs::write(&bad, "{\n  \"version\": 1,\n  \"templates\": [\n").unwrap();
    let o = run(&["validate-gallery", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));

    // collinear mask points in a copy of the bundled gallery
    let copy = dir.path().join("g");
    std::fs::create_dir(&copy).unwrap();
    for e in std::fs::read_dir(common::GALLERY_DIR).unwrap() {
        let p = e.unwrap().path();
        std::fs::copy(&p, copy.join(p.file_name().unwrap())).unwrap();
    }
    let mut m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(copy.join("manifest.json")).unwrap()).unwrap();
    let pts = m["templates"][0]["mask_points"].as_array_mut().unwrap();
    let (p0, p1) = (pts[0].clone(), pts[1].clone());
    let mid = |k: usize| (p0[k].as_f64().unwrap() + p1[k].as_f64().unwrap()) / 2.0;
    pts[2] = serde_json::json!([mid(0), mid(1)]);
    std::fs::write(copy.join("manifest.json"), m.to_string()).unwrap();
    let o = run(&["validate-gallery", copy.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("mask triangle 0 (points 0, 1, 2) is degenerate"), "{}", stdout(&o));
}

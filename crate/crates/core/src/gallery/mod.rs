//! Mask template gallery: a JSON manifest listing RGBA rasters and their
//! 16 correspondence points.
//!
//! ```json
//! {
//!   "version": 1,
//!   "name": "default",
//!   "templates": [
//!     {
//!       "id": "surgical_blue",
//!       "raster_path": "surgical_blue.png",
//!       "mask_points": [[180.0, 22.12], [10.0, 37.33], ...],
//!       "face_indices": [28, 1, 15, ...],
//!       "style_tags": ["surgical", "solid"]
//!     }
//!   ]
//! }
//! ```
//!
//! `raster_path` is relative to the manifest's directory. `face_indices` is
//! optional and defaults to [`DEFAULT_FACE_INDICES`].

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    strip_triangulate, triangle_area, warp_mask, CorrespondenceSet, LandmarkSet, Point,
    CORRESPONDENCE_COUNT, DEFAULT_FACE_INDICES, MIN_TRIANGLE_AREA,
};
use crate::imaging::{read_image, ImageBuffer};

pub const MANIFEST_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

/// Working-canvas side used for the validation warp.
const VALIDATION_SIDE: u32 = 500;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalleryManifest {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub templates: Vec<TemplateEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateEntry {
    pub id: String,
    pub raster_path: String,
    pub mask_points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_indices: Option<Vec<usize>>,
    #[serde(default)]
    pub style_tags: Vec<String>,
}

/// A mask raster with its correspondence to the face landmarks.
#[derive(Debug, Clone)]
pub struct MaskTemplate {
    pub id: String,
    pub raster: ImageBuffer,
    pub correspondence: CorrespondenceSet,
    pub style_tags: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub template: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev}: [{}] {}", self.template, self.message)
    }
}

/// Loaded, validated templates in manifest order.
#[derive(Debug, Clone)]
pub struct Gallery {
    pub name: String,
    templates: Vec<MaskTemplate>,
}

impl Gallery {
    pub fn new(name: impl Into<String>, templates: Vec<MaskTemplate>) -> Result<Self> {
        let mut seen = HashSet::new();
        for t in &templates {
            if !seen.insert(t.id.as_str()) {
                return Err(Error::Gallery(format!("duplicate template id '{}'", t.id)));
            }
        }
        Ok(Self {
            name: name.into(),
            templates,
        })
    }

    pub fn templates(&self) -> &[MaskTemplate] {
        &self.templates
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.templates.iter().map(|t| t.id.as_str()).collect()
    }

    pub fn get(&self, id: &str) -> Option<&MaskTemplate> {
        self.templates.iter().find(|t| t.id == id)
    }
}

impl MaskTemplate {
    pub fn new(
        id: impl Into<String>,
        raster: ImageBuffer,
        correspondence: CorrespondenceSet,
        style_tags: Vec<String>,
    ) -> Self {
        Self {
            id: id.into(),
            raster,
            correspondence,
            style_tags,
        }
    }

    /// Manifest entry describing this template, with the raster at `raster_path`.
    pub fn entry(&self, raster_path: impl Into<String>) -> TemplateEntry {
        let indices = self.correspondence.face_indices();
        TemplateEntry {
            id: self.id.clone(),
            raster_path: raster_path.into(),
            mask_points: self.correspondence.mask_points().to_vec(),
            face_indices: (indices != DEFAULT_FACE_INDICES).then(|| indices.to_vec()),
            style_tags: self.style_tags.clone(),
        }
    }
}

/// Checks a template's invariants. An empty list means the template is valid.
pub fn validate_template(template: &MaskTemplate) -> Vec<Finding> {
    let mut findings = Vec::new();
    let mut error = |message: String| {
        findings.push(Finding {
            severity: Severity::Error,
            template: template.id.clone(),
            message,
        })
    };
    let raster = &template.raster;
    if !raster.has_alpha() {
        error("raster has no alpha channel".into());
        return findings;
    }
    let alpha = raster.pixels().map(|p| p[3]);
    let (mut opaque, mut transparent) = (false, false);
    for a in alpha {
        opaque |= a == 255;
        transparent |= a == 0;
    }
    if !opaque {
        error("no opaque pixels".into());
    }
    if !transparent {
        error("no transparent pixels".into());
    }

    let points = template.correspondence.mask_points();
    let (w, h) = (raster.width() as f64, raster.height() as f64);
    for (k, p) in points.iter().enumerate() {
        if !(p.x >= 0.0 && p.x <= w - 1.0 && p.y >= 0.0 && p.y <= h - 1.0) {
            error(format!(
                "mask point {k} ({:.2}, {:.2}) lies outside the {}x{} raster",
                p.x,
                p.y,
                raster.width(),
                raster.height()
            ));
        }
    }

    let triangles = strip_triangulate(CORRESPONDENCE_COUNT).expect("16 points");
    let mut degenerate = false;
    for (t, tri) in triangles.iter().enumerate() {
        let [i, j, k] = tri.0;
        if triangle_area(&[points[i], points[j], points[k]]) <= MIN_TRIANGLE_AREA {
            degenerate = true;
            error(format!(
                "mask triangle {t} (points {i}, {j}, {k}) is degenerate"
            ));
        }
    }

    if !degenerate {
        let canonical = LandmarkSet::canonical_frontal_at(VALIDATION_SIDE);
        match warp_mask(
            raster,
            &template.correspondence,
            &canonical,
            (VALIDATION_SIDE, VALIDATION_SIDE),
        ) {
            Ok(warp) => {
                for s in warp.skipped {
                    error(format!(
                        "validation warp onto the canonical face skipped patch {}: {}",
                        s.patch, s.reason
                    ));
                }
            }
            Err(e) => error(format!("validation warp onto the canonical face failed: {e}")),
        }
    }
    findings
}

/// A gallery directory resolves to its `manifest.json`; files pass through.
pub fn resolve_manifest(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.join(MANIFEST_FILE)
    } else {
        path.to_path_buf()
    }
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<GalleryManifest> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let manifest: GalleryManifest =
        serde_json::from_str(&text).map_err(|e| Error::parse(path, e.to_string()))?;
    if manifest.version != MANIFEST_VERSION {
        return Err(Error::parse(
            path,
            format!("unsupported manifest version {}", manifest.version),
        ));
    }
    Ok(manifest)
}

fn load_entry(base: &Path, entry: &TemplateEntry) -> Result<MaskTemplate> {
    let raster_path: PathBuf = base.join(&entry.raster_path);
    let raster = read_image(&raster_path).map_err(|e| {
        Error::Gallery(format!(
            "template '{}': cannot read raster {}: {e}",
            entry.id,
            raster_path.display()
        ))
    })?;
    let indices = entry
        .face_indices
        .clone()
        .unwrap_or_else(|| DEFAULT_FACE_INDICES.to_vec());
    let correspondence = CorrespondenceSet::new(indices, entry.mask_points.clone())
        .map_err(|e| Error::Gallery(format!("template '{}': {e}", entry.id)))?;
    Ok(MaskTemplate::new(
        entry.id.clone(),
        raster,
        correspondence,
        entry.style_tags.clone(),
    ))
}

/// Loads every template of a manifest, without rejecting invalid ones.
/// Returns the gallery name and the templates in manifest order.
pub fn load_unvalidated(manifest_path: impl AsRef<Path>) -> Result<(String, Vec<MaskTemplate>)> {
    let manifest_path = &resolve_manifest(manifest_path.as_ref());
    let manifest = read_manifest(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let mut seen = HashSet::new();
    let mut templates = Vec::with_capacity(manifest.templates.len());
    for entry in &manifest.templates {
        if !seen.insert(entry.id.clone()) {
            return Err(Error::Gallery(format!("duplicate template id '{}'", entry.id)));
        }
        templates.push(load_entry(base, entry)?);
    }
    let name = manifest.name.clone().unwrap_or_else(|| {
        base.file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "gallery".into())
    });
    Ok((name, templates))
}

/// Loads and validates a gallery. Any error-severity finding fails the load.
pub fn load_gallery(manifest_path: impl AsRef<Path>) -> Result<Gallery> {
    let (name, templates) = load_unvalidated(manifest_path)?;
    for t in &templates {
        let errors: Vec<String> = validate_template(t)
            .into_iter()
            .filter(|f| f.severity == Severity::Error)
            .map(|f| f.message)
            .collect();
        if !errors.is_empty() {
            return Err(Error::Gallery(format!(
                "template '{}' failed validation: {}",
                t.id,
                errors.join("; ")
            )));
        }
    }
    Gallery::new(name, templates)
}

/// Puts arrays holding only numbers on one line, so points read as `[x, y]`.
fn compact_number_arrays(pretty: &str) -> String {
    let mut out = String::with_capacity(pretty.len());
    let mut rest = pretty;
    while let Some(open) = rest.find('[') {
        out.push_str(&rest[..=open]);
        rest = &rest[open + 1..];
        let Some(close) = rest.find(']') else { break };
        let inner = &rest[..close];
        let numeric = !inner.trim().is_empty()
            && inner
                .split(',')
                .all(|t| t.trim().parse::<f64>().is_ok());
        if numeric {
            let items: Vec<&str> = inner.split(',').map(str::trim).collect();
            out.push_str(&items.join(", "));
            out.push(']');
            rest = &rest[close + 1..];
        }
    }
    out.push_str(rest);
    out
}

/// Writes the rasters and a manifest for `templates` into `dir`.
pub fn write_gallery(dir: impl AsRef<Path>, name: &str, templates: &[MaskTemplate]) -> Result<PathBuf> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut entries = Vec::with_capacity(templates.len());
    for t in templates {
        let file = format!("{}.png", t.id);
        crate::imaging::write_png(dir.join(&file), &t.raster)?;
        entries.push(t.entry(file));
    }
    let manifest = GalleryManifest {
        version: MANIFEST_VERSION,
        name: Some(name.to_string()),
        templates: entries,
    };
    let path = dir.join(MANIFEST_FILE);
    let mut text = compact_number_arrays(&serde_json::to_string_pretty(&manifest)?);
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

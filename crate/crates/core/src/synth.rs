//! Procedural fixtures: synthetic faces with known landmarks, synthetic mask
//! templates, and small pair lists. Used by the bundled gallery, the examples
//! and the test suites; nothing here depends on real face data.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gallery::{write_gallery, MaskTemplate};
use crate::geometry::{
    bounds, CorrespondenceSet, LandmarkSet, Point, DEFAULT_FACE_INDICES,
};
use crate::imaging::{store_u8, write_png, ImageBuffer};
use crate::rng;

/// Side of the canonical face canvas all synthetic faces are drawn on.
pub const FACE_SIDE: u32 = 250;

/// Outline of the default correspondence, as face landmark indices, walked
/// around the mask: nose bridge, right jaw down to the chin, left jaw back up.
const OUTLINE: [usize; 16] = [28, 15, 14, 13, 12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskStyle {
    Surgical,
    Striped,
    Gradient,
    Cloth,
}

impl MaskStyle {
    pub const ALL: [MaskStyle; 4] = [Self::Surgical, Self::Striped, Self::Gradient, Self::Cloth];

    pub fn id(self) -> &'static str {
        match self {
            Self::Surgical => "surgical_blue",
            Self::Striped => "striped_navy",
            Self::Gradient => "gradient_gray",
            Self::Cloth => "cloth_black",
        }
    }

    fn tags(self) -> Vec<String> {
        let tags: &[&str] = match self {
            Self::Surgical => &["surgical", "pleated", "solid"],
            Self::Striped => &["cloth", "striped"],
            Self::Gradient => &["cloth", "gradient"],
            Self::Cloth => &["cloth", "solid", "dark"],
        };
        tags.iter().map(|s| s.to_string()).collect()
    }

    fn color(self, u: f64, v: f64, x: u32, y: u32) -> [f64; 3] {
        match self {
            Self::Surgical => {
                let pleat = [0.42, 0.55, 0.68]
                    .iter()
                    .any(|&c| (v - c).abs() < 0.012);
                let base = [132.0, 178.0, 212.0];
                if pleat {
                    base.map(|c| c * 0.82)
                } else {
                    base
                }
            }
            Self::Striped => {
                if ((u * 9.0 + v * 6.0).floor() as i64) % 2 == 0 {
                    [44.0, 54.0, 96.0]
                } else {
                    [222.0, 222.0, 228.0]
                }
            }
            Self::Gradient => {
                let g = 200.0 - 90.0 * v;
                [g, g, g + 4.0]
            }
            Self::Cloth => {
                let n = hash_noise(x, y, 17) * 10.0;
                [38.0 + n, 38.0 + n, 42.0 + n]
            }
        }
    }
}

fn hash_noise(x: u32, y: u32, salt: u32) -> f64 {
    let mut h = x.wrapping_mul(0x9E37_79B1) ^ y.wrapping_mul(0x85EB_CA77) ^ salt.wrapping_mul(0xC2B2_AE3D);
    h ^= h >> 15;
    h = h.wrapping_mul(0x2C1B_3C6D);
    h ^= h >> 12;
    (h & 0xFFFF) as f64 / 65535.0 - 0.5
}

fn point_in_polygon(p: Point, poly: &[Point]) -> bool {
    let mut inside = false;
    let mut j = poly.len() - 1;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[j]);
        if (a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Procedurally drawn mask of the given style with default correspondence.
///
/// Mask points are the canonical face's correspondence landmarks mapped onto
/// the raster, so an unperturbed warp onto a canonical face is a similarity.
pub fn mask_template(style: MaskStyle) -> MaskTemplate {
    const W: u32 = 360;
    const H: u32 = 240;
    const MARGIN: f64 = 10.0;
    let canonical = LandmarkSet::canonical_frontal();
    let face_pts: Vec<Point> = DEFAULT_FACE_INDICES.iter().map(|&i| canonical.get(i)).collect();
    let (lo, hi) = bounds(face_pts.iter().copied()).expect("non-empty");
    let scale = ((W as f64 - 2.0 * MARGIN) / (hi.x - lo.x)).min((H as f64 - 2.0 * MARGIN) / (hi.y - lo.y));
    let map = |p: Point| {
        Point::new(
            (p.x - lo.x) * scale + (W as f64 - (hi.x - lo.x) * scale) / 2.0,
            (p.y - lo.y) * scale + (H as f64 - (hi.y - lo.y) * scale) / 2.0,
        )
    };
    let mask_points: Vec<Point> = face_pts
        .iter()
        .map(|&p| {
            let q = map(p);
            Point::new((q.x * 100.0).round() / 100.0, (q.y * 100.0).round() / 100.0)
        })
        .collect();
    let outline: Vec<Point> = OUTLINE.iter().map(|&i| map(canonical.get(i))).collect();
    let (olo, ohi) = bounds(outline.iter().copied()).expect("non-empty");

    let raster = ImageBuffer::from_fn(W, H, 4, |x, y, px| {
        // 4x4 supersampled coverage for a soft edge
        let mut hits = 0;
        for sy in 0..4 {
            for sx in 0..4 {
                let p = Point::new(
                    x as f64 - 0.375 + sx as f64 * 0.25,
                    y as f64 - 0.375 + sy as f64 * 0.25,
                );
                hits += point_in_polygon(p, &outline) as u32;
            }
        }
        if hits == 0 {
            px.copy_from_slice(&[0, 0, 0, 0]);
            return;
        }
        let u = (x as f64 - olo.x) / (ohi.x - olo.x);
        let v = (y as f64 - olo.y) / (ohi.y - olo.y);
        let rgb = style.color(u, v, x, y);
        // slight shading toward the sides
        let shade = 1.0 - 0.12 * (2.0 * u - 1.0).powi(2);
        px[0] = store_u8(rgb[0] * shade);
        px[1] = store_u8(rgb[1] * shade);
        px[2] = store_u8(rgb[2] * shade);
        px[3] = store_u8(hits as f64 * 255.0 / 16.0);
    })
    .expect("valid raster size");
    let correspondence =
        CorrespondenceSet::with_default_indices(mask_points).expect("16 default correspondences");
    MaskTemplate::new(style.id(), raster, correspondence, style.tags())
}

pub fn fixture_templates() -> Vec<MaskTemplate> {
    MaskStyle::ALL.iter().map(|&s| mask_template(s)).collect()
}

/// Writes the four procedural templates plus manifest into `dir`.
pub fn write_fixture_gallery(dir: impl AsRef<Path>) -> Result<PathBuf> {
    write_gallery(dir, "default", &fixture_templates())
}

/// Appearance and pose of one synthetic photo.
#[derive(Debug, Clone, Copy)]
struct FaceLook {
    skin: [f64; 3],
    hair: [f64; 3],
    background: [f64; 3],
    lips: [f64; 3],
    angle: f64,
    scale: f64,
    shift: Point,
    light: f64,
    salt: u32,
}

const SKIN: [[f64; 3]; 6] = [
    [236.0, 200.0, 170.0],
    [224.0, 180.0, 145.0],
    [198.0, 150.0, 112.0],
    [170.0, 120.0, 88.0],
    [130.0, 90.0, 65.0],
    [96.0, 66.0, 48.0],
];

fn look(identity: u32, variant: u32) -> FaceLook {
    let mut id_rng = rng::stream(identity as u64, "synth-identity");
    let skin = SKIN[id_rng.random_range(0..SKIN.len())].map(|c| c * id_rng.random_range(0.94..1.04));
    let hair_level = id_rng.random_range(20.0..120.0);
    let hair = [hair_level, hair_level * 0.8, hair_level * 0.6];
    let background = [
        id_rng.random_range(60.0..200.0),
        id_rng.random_range(60.0..200.0),
        id_rng.random_range(60.0..200.0),
    ];
    let lips = [id_rng.random_range(150.0..200.0), 80.0, 85.0];
    let mut var_rng = rng::stream(((identity as u64) << 32) | variant as u64, "synth-variant");
    FaceLook {
        skin,
        hair,
        background,
        lips,
        angle: var_rng.random_range(-0.08..0.08),
        scale: var_rng.random_range(0.94..1.06),
        shift: Point::new(var_rng.random_range(-6.0..6.0), var_rng.random_range(-6.0..6.0)),
        light: var_rng.random_range(0.88..1.1),
        salt: identity.wrapping_mul(131).wrapping_add(variant),
    }
}

fn ellipse(p: Point, c: Point, rx: f64, ry: f64) -> f64 {
    ((p.x - c.x) / rx).powi(2) + ((p.y - c.y) / ry).powi(2)
}

/// Shade of the canonical-frame point `p`.
fn shade(p: Point, lm: &LandmarkSet, look: &FaceLook, px: u32, py: u32) -> [f64; 3] {
    let noise = hash_noise(px, py, look.salt) * 6.0;
    let head = ellipse(p, Point::new(125.0, 105.0), 88.0, 114.0);
    if head > 1.0 {
        let g = 1.0 - 0.25 * p.y / FACE_SIDE as f64;
        return look.background.map(|c| c * g + noise);
    }
    if p.y < 42.0 + 0.35 * (p.x - 125.0).abs() * (p.x - 125.0).abs() / 88.0 {
        return look.hair.map(|c| c + noise);
    }
    let eye_l = bounds(lm.points()[36..42].iter().copied()).expect("eye");
    let eye_r = bounds(lm.points()[42..48].iter().copied()).expect("eye");
    for (lo, hi) in [eye_l, eye_r] {
        let c = Point::new((lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0);
        let e = ellipse(p, c, (hi.x - lo.x) / 2.0 + 1.0, (hi.y - lo.y) / 2.0 + 1.0);
        if e <= 1.0 {
            if p.distance(c) < 4.5 {
                return [50.0, 40.0, 35.0];
            }
            return [235.0, 232.0, 228.0];
        }
    }
    for brow in [17..21, 22..26] {
        for i in brow {
            let (a, b) = (lm.get(i), lm.get(i + 1));
            let t = (((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y))
                / ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)))
            .clamp(0.0, 1.0);
            let q = Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
            if p.distance(q) < 3.0 {
                return look.hair.map(|c| c * 0.8);
            }
        }
    }
    let mouth = ellipse(p, lm.get(66).offset(Point::new(0.0, -1.0)), 29.0, 10.0);
    if mouth <= 1.0 {
        return look.lips.map(|c| c + noise);
    }
    let mut s = 1.0 - 0.22 * head;
    for nostril in [31, 35] {
        if p.distance(lm.get(nostril)) < 4.0 {
            s *= 0.7;
        }
    }
    if (p.x - 125.0).abs() < 5.0 && p.y > 100.0 && p.y < 150.0 {
        s *= 1.04;
    }
    look.skin.map(|c| c * s + noise)
}

/// A synthetic 250x250 face photo for (identity, variant) with its landmarks.
/// Same identity means same appearance; the variant changes pose and lighting.
pub fn synthetic_face(identity: u32, variant: u32) -> (ImageBuffer, LandmarkSet) {
    let look = look(identity, variant);
    let canonical = LandmarkSet::canonical_frontal();
    let center = Point::new(125.0, 125.0);
    let (sin, cos) = look.angle.sin_cos();
    let forward = |p: Point| {
        let (dx, dy) = (p.x - center.x, p.y - center.y);
        Point::new(
            center.x + look.scale * (cos * dx - sin * dy) + look.shift.x,
            center.y + look.scale * (sin * dx + cos * dy) + look.shift.y,
        )
    };
    let inverse = |q: Point| {
        let (dx, dy) = ((q.x - center.x - look.shift.x) / look.scale, (q.y - center.y - look.shift.y) / look.scale);
        Point::new(center.x + cos * dx + sin * dy, center.y - sin * dx + cos * dy)
    };
    let image = ImageBuffer::from_fn(FACE_SIDE, FACE_SIDE, 3, |x, y, px| {
        let p = inverse(Point::new(x as f64, y as f64));
        let rgb = shade(p, &canonical, &look, x, y);
        for c in 0..3 {
            px[c] = store_u8(rgb[c] * look.light);
        }
    })
    .expect("valid size");
    let landmarks = LandmarkSet::new(canonical.points().iter().map(|&p| forward(p)).collect())
        .expect("similarity keeps landmarks valid");
    (image, landmarks)
}

/// Image id in the usual `Name_0001` style.
pub fn image_id(identity: u32, variant: u32) -> String {
    format!("person_{identity:03}_{:04}", variant + 1)
}

/// Layout of a synthetic image collection with a verification pair list.
#[derive(Debug, Clone, Copy)]
pub struct FixtureSpec {
    pub identities: u32,
    pub images_per_identity: u32,
    pub positives: usize,
    pub negatives: usize,
    pub seed: u64,
}

impl FixtureSpec {
    /// 60 pairs over 12 identities, the small standard fixture.
    pub fn small() -> Self {
        Self {
            identities: 12,
            images_per_identity: 3,
            positives: 30,
            negatives: 30,
            seed: 2021,
        }
    }
}

/// Where a fixture collection was written.
#[derive(Debug, Clone)]
pub struct FixtureSet {
    pub root: PathBuf,
    pub images: PathBuf,
    pub landmarks: PathBuf,
    pub pairs: PathBuf,
}

/// Random pair list over the fixture ids: `positives` same-identity pairs and
/// `negatives` cross-identity pairs, shuffled.
pub fn fixture_pairs(spec: &FixtureSpec) -> Vec<(String, String, bool)> {
    assert!(spec.identities >= 2 && spec.images_per_identity >= 2);
    let mut r = rng::stream(spec.seed, "synth-pairs");
    let mut pairs = Vec::with_capacity(spec.positives + spec.negatives);
    for _ in 0..spec.positives {
        let id = r.random_range(0..spec.identities);
        let a = r.random_range(0..spec.images_per_identity);
        let mut b = r.random_range(0..spec.images_per_identity - 1);
        if b >= a {
            b += 1;
        }
        pairs.push((image_id(id, a), image_id(id, b), true));
    }
    for _ in 0..spec.negatives {
        let ia = r.random_range(0..spec.identities);
        let mut ib = r.random_range(0..spec.identities - 1);
        if ib >= ia {
            ib += 1;
        }
        let a = r.random_range(0..spec.images_per_identity);
        let b = r.random_range(0..spec.images_per_identity);
        pairs.push((image_id(ia, a), image_id(ib, b), false));
    }
    pairs.shuffle(&mut r);
    pairs
}

/// Pair list text, one `a b label` line per pair.
pub fn pairs_text(pairs: &[(String, String, bool)]) -> String {
    let mut out = String::new();
    for (a, b, same) in pairs {
        let _ = writeln!(out, "{a} {b} {}", *same as u8);
    }
    out
}

/// Writes images/, landmarks/ and pairs.txt for `spec` under `root`.
pub fn write_fixture_set(root: impl AsRef<Path>, spec: &FixtureSpec) -> Result<FixtureSet> {
    let root = root.as_ref().to_path_buf();
    let images = root.join("images");
    let landmarks = root.join("landmarks");
    for d in [&images, &landmarks] {
        std::fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
    }
    for identity in 0..spec.identities {
        for variant in 0..spec.images_per_identity {
            let (img, lm) = synthetic_face(identity, variant);
            let id = image_id(identity, variant);
            write_png(images.join(format!("{id}.png")), &img)?;
            lm.write(landmarks.join(format!("{id}.txt")))?;
        }
    }
    let pairs = root.join("pairs.txt");
    std::fs::write(&pairs, pairs_text(&fixture_pairs(spec))).map_err(|e| Error::io(&pairs, e))?;
    Ok(FixtureSet {
        root,
        images,
        landmarks,
        pairs,
    })
}

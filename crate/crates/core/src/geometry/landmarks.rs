use std::fmt::Write as _;
use std::ops::Range;
use std::path::Path;

use super::point::Point;
use crate::error::{Error, Result};

pub const LANDMARK_COUNT: usize = 68;

pub const JAWLINE: Range<usize> = 0..17;
pub const BROWS: Range<usize> = 17..27;
pub const NOSE: Range<usize> = 27..36;
pub const LEFT_EYE: Range<usize> = 36..42;
pub const RIGHT_EYE: Range<usize> = 42..48;
pub const MOUTH: Range<usize> = 48..68;

/// Canonical frontal layout for a 250x250 face, used to validate mask templates.
const CANONICAL_FRONTAL_250: &str = include_str!("../../fixtures/canonical_frontal_250.txt");

/// The 68-point facial annotation of one face, in pixel coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkSet {
    points: Vec<Point>,
}

impl LandmarkSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() != LANDMARK_COUNT {
            return Err(Error::invalid(format!(
                "expected {LANDMARK_COUNT} landmarks, got {}",
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("landmark {i} is not finite")));
        }
        let set = Self { points };
        if set.interocular() <= 0.0 {
            return Err(Error::DegenerateGeometry(
                "interocular distance is zero".into(),
            ));
        }
        Ok(set)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, i: usize) -> Point {
        self.points[i]
    }

    /// Copy with one landmark replaced.
    pub fn with_point(&self, i: usize, p: Point) -> Self {
        let mut points = self.points.clone();
        points[i] = p;
        Self { points }
    }

    /// Distance between the left-eye and right-eye landmark means.
    pub fn interocular(&self) -> f64 {
        let left = Point::centroid(self.points[LEFT_EYE].iter().copied());
        let right = Point::centroid(self.points[RIGHT_EYE].iter().copied());
        left.distance(right)
    }

    /// Maps landmarks through a resize by (sx, sy) under pixel-center alignment.
    pub fn scaled(&self, sx: f64, sy: f64) -> Self {
        let points = self
            .points
            .iter()
            .map(|p| Point::new((p.x + 0.5) * sx - 0.5, (p.y + 0.5) * sy - 0.5))
            .collect();
        Self { points }
    }

    /// Landmarks after resizing a `from` sized image to `to`.
    pub fn resized(&self, from: (u32, u32), to: (u32, u32)) -> Self {
        self.scaled(to.0 as f64 / from.0 as f64, to.1 as f64 / from.1 as f64)
    }

    /// Parses the sidecar format: 68 lines of "x y". Blank lines are ignored.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut points = Vec::with_capacity(LANDMARK_COUNT);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut coord = |name: &str| -> Result<f64> {
                fields
                    .next()
                    .ok_or_else(|| {
                        Error::parse(origin, format!("line {}: missing {name}", lineno + 1))
                    })?
                    .parse::<f64>()
                    .map_err(|e| Error::parse(origin, format!("line {}: {e}", lineno + 1)))
            };
            let x = coord("x")?;
            let y = coord("y")?;
            if fields.next().is_some() {
                return Err(Error::parse(
                    origin,
                    format!("line {}: expected two values", lineno + 1),
                ));
            }
            points.push(Point::new(x, y));
        }
        if points.len() != LANDMARK_COUNT {
            return Err(Error::parse(
                origin,
                format!("expected {LANDMARK_COUNT} landmark lines, found {}", points.len()),
            ));
        }
        Self::new(points).map_err(|e| Error::parse(origin, e.to_string()))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Sidecar text with three decimals, newline terminated.
    pub fn to_sidecar(&self) -> String {
        let mut out = String::with_capacity(LANDMARK_COUNT * 16);
        for p in &self.points {
            let _ = writeln!(out, "{:.3} {:.3}", p.x, p.y);
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_sidecar()).map_err(|e| Error::io(path, e))
    }

    /// The bundled frontal layout on a 250x250 canvas.
    pub fn canonical_frontal() -> Self {
        Self::parse(CANONICAL_FRONTAL_250, Path::new("canonical_frontal_250.txt"))
            .expect("bundled canonical landmarks are valid")
    }

    /// The frontal layout rescaled to a `side` x `side` canvas.
    pub fn canonical_frontal_at(side: u32) -> Self {
        Self::canonical_frontal().resized((250, 250), (side, side))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_layout_is_plausible() {
        let lm = LandmarkSet::canonical_frontal();
        assert!((lm.interocular() - 75.0).abs() < 1.0);
        // chin below nose below eyes
        assert!(lm.get(8).y > lm.get(30).y && lm.get(30).y > lm.get(36).y);
        // left/right symmetry of the jaw
        for i in 0..8 {
            let (l, r) = (lm.get(i), lm.get(16 - i));
            assert!((l.x + r.x - 250.0).abs() < 1e-2 && (l.y - r.y).abs() < 1e-2);
        }
    }

    #[test]
    fn parse_rejects_wrong_count_and_garbage() {
        let p = Path::new("x.txt");
        assert!(LandmarkSet::parse("1 2\n3 4\n", p).is_err());
        let mut text = LandmarkSet::canonical_frontal().to_sidecar();
        text = text.replacen("40.000", "forty", 1);
        let err = LandmarkSet::parse(&text, p).unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn sidecar_round_trip() {
        let lm = LandmarkSet::canonical_frontal();
        let back = LandmarkSet::parse(&lm.to_sidecar(), Path::new("a")).unwrap();
        assert_eq!(back, lm);
    }

    #[test]
    fn zero_interocular_rejected() {
        let pts = vec![Point::new(1.0, 1.0); LANDMARK_COUNT];
        assert!(matches!(
            LandmarkSet::new(pts),
            Err(Error::DegenerateGeometry(_))
        ));
    }

    #[test]
    fn scaling_uses_pixel_centers() {
        let lm = LandmarkSet::canonical_frontal();
        let up = lm.resized((250, 250), (500, 500));
        assert_eq!(up.get(0), Point::new(80.5, 200.5));
        let back = up.resized((500, 500), (250, 250));
        assert!((back.get(0).x - 40.0).abs() < 1e-12);
    }
}

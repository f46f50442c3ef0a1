use serde::{Deserialize, Serialize};

/// A 2-D position in pixel units; integer coordinates are pixel centers.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn offset(&self, d: Point) -> Point {
        Point::new(self.x + d.x, self.y + d.y)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Mean of a non-empty set of points.
    pub fn centroid(points: impl IntoIterator<Item = Point>) -> Point {
        let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
        for p in points {
            sx += p.x;
            sy += p.y;
            n += 1;
        }
        Point::new(sx / n as f64, sy / n as f64)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// Twice the signed area of (a, b, c); positive when c lies to the left of a->b
/// in y-down image coordinates' mathematical sense.
#[inline]
pub fn cross(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

pub fn triangle_area(tri: &[Point; 3]) -> f64 {
    0.5 * cross(tri[0], tri[1], tri[2]).abs()
}

/// Axis-aligned bounds of a point set as (min, max).
pub fn bounds(points: impl IntoIterator<Item = Point>) -> Option<(Point, Point)> {
    points.into_iter().fold(None, |acc, p| match acc {
        None => Some((p, p)),
        Some((lo, hi)) => Some((
            Point::new(lo.x.min(p.x), lo.y.min(p.y)),
            Point::new(hi.x.max(p.x), hi.y.max(p.y)),
        )),
    })
}

use serde::{Deserialize, Serialize};

use super::point::{cross, Point};
use crate::error::{Error, Result};

/// Minimum source-triangle area (px^2) for an affine estimate to be accepted.
pub const MIN_TRIANGLE_AREA: f64 = 1e-6;

/// 2x3 affine map `[a b tx; c d ty]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMatrix(pub [[f64; 3]; 2]);

impl AffineMatrix {
    pub const IDENTITY: AffineMatrix = AffineMatrix([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        let m = &self.0;
        Point::new(
            m[0][0] * p.x + m[0][1] * p.y + m[0][2],
            m[1][0] * p.x + m[1][1] * p.y + m[1][2],
        )
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// `other` applied after `self`.
    pub fn then(&self, other: &AffineMatrix) -> AffineMatrix {
        let (a, b) = (&self.0, &other.0);
        let mut out = [[0.0; 3]; 2];
        for r in 0..2 {
            out[r][0] = b[r][0] * a[0][0] + b[r][1] * a[1][0];
            out[r][1] = b[r][0] * a[0][1] + b[r][1] * a[1][1];
            out[r][2] = b[r][0] * a[0][2] + b[r][1] * a[1][2] + b[r][2];
        }
        AffineMatrix(out)
    }

    pub fn max_abs_diff(&self, other: &AffineMatrix) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Solves for the affine map taking each `src[i]` to `dst[i]`.
///
/// The linear part is `[q1 - q0, q2 - q0] * [p1 - p0, p2 - p0]^-1`, the
/// translation then pins `p0` onto `q0`.
pub fn estimate_affine(src: &[Point; 3], dst: &[Point; 3]) -> Result<AffineMatrix> {
    let det = cross(src[0], src[1], src[2]);
    if 0.5 * det.abs() <= MIN_TRIANGLE_AREA || !det.is_finite() {
        return Err(Error::DegenerateGeometry(format!(
            "source triangle {src:?} is collinear (area {:.3e})",
            0.5 * det.abs()
        )));
    }
    let (e1x, e1y) = (src[1].x - src[0].x, src[1].y - src[0].y);
    let (e2x, e2y) = (src[2].x - src[0].x, src[2].y - src[0].y);
    let (f1x, f1y) = (dst[1].x - dst[0].x, dst[1].y - dst[0].y);
    let (f2x, f2y) = (dst[2].x - dst[0].x, dst[2].y - dst[0].y);

    // inverse of [[e1x, e2x], [e1y, e2y]]
    let (i00, i01) = (e2y / det, -e2x / det);
    let (i10, i11) = (-e1y / det, e1x / det);

    let a = f1x * i00 + f2x * i10;
    let b = f1x * i01 + f2x * i11;
    let c = f1y * i00 + f2y * i10;
    let d = f1y * i01 + f2y * i11;
    let tx = dst[0].x - (a * src[0].x + b * src[0].y);
    let ty = dst[0].y - (c * src[0].x + d * src[0].y);
    Ok(AffineMatrix([[a, b, tx], [c, d, ty]]))
}

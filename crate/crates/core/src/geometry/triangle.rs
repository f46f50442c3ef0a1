use crate::error::{Error, Result};

/// Three distinct vertex indices into a point list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triangle(pub [usize; 3]);

/// Triangle strip over `point_count` ordered points: (i, i+1, i+2) for each i.
pub fn strip_triangulate(point_count: usize) -> Result<Vec<Triangle>> {
    if point_count < 3 {
        return Err(Error::invalid(format!(
            "a triangle strip needs at least 3 points, got {point_count}"
        )));
    }
    Ok((0..point_count - 2)
        .map(|i| Triangle([i, i + 1, i + 2]))
        .collect())
}

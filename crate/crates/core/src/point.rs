use crate::error::{Error, Result};

/// A point of the domain: a vector in R^d under the Euclidean norm.
///
/// The scalar case is `d = 1`; all coordinates must be finite.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Config("a point needs at least one coordinate".into()));
        }
        for (index, &value) in coords.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
        }
        Ok(Point { coords })
    }

    /// Scalar point (d = 1).
    pub fn scalar(x: f64) -> Self {
        Point { coords: vec![x] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// The scalar value of a d = 1 point.
    pub fn as_scalar(&self) -> Result<f64> {
        if self.coords.len() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.coords.len() });
        }
        Ok(self.coords[0])
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0.0)
    }

    /// Sum of coordinates; the canonical linear functional used by the
    /// multiadditive catalog kernels (reduces to the identity for d = 1).
    pub fn coord_sum(&self) -> f64 {
        self.coords.iter().sum()
    }

    pub fn scaled(&self, s: f64) -> Point {
        Point { coords: self.coords.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point {
            coords: self
                .coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Check that a tuple has the expected number of points.
pub fn check_arity(points: &[Point], expected: usize) -> Result<()> {
    if points.len() != expected {
        return Err(Error::ArityMismatch { expected, got: points.len() });
    }
    Ok(())
}

/// Check that every point has the expected dimension.
pub fn check_dims(points: &[Point], d: usize) -> Result<()> {
    for p in points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: p.dim() });
        }
    }
    Ok(())
}

/// Scale every point of a tuple by the same factor.
pub fn scale_tuple(points: &[Point], s: f64) -> Vec<Point> {
    points.iter().map(|p| p.scaled(s)).collect()
}

/// Largest absolute coordinate across the tuple; used for range guards.
pub fn max_abs_coord(points: &[Point]) -> f64 {
    points
        .iter()
        .flat_map(|p| p.coords().iter())
        .fold(0.0_f64, |acc, &c| acc.max(c.abs()))
}

/// Convenience constructor for scalar tuples (d = 1).
pub fn scalars(xs: &[f64]) -> Vec<Point> {
    xs.iter().map(|&x| Point::scalar(x)).collect()
}

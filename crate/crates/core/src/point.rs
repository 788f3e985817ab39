//! Decision vectors and probe directions.

use std::ops::Deref;

use crate::error::{Error, Result};

/// A decision vector `x ∈ R^d` with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::arg("point must have dimension >= 1"));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::arg(format!("point coordinate {i} is not finite")));
        }
        Ok(Point(coords))
    }

    /// Constant vector `value · 1`.
    pub fn filled(dimension: usize, value: f64) -> Result<Self> {
        Point::new(vec![value; dimension])
    }

    /// Skips validation. Used for probe points `x ± μv`, which may leave the
    /// finite range only when the caller already holds a broken input.
    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    /// `self + scale · v`
    pub fn offset(&self, v: &[f64], scale: f64) -> Point {
        debug_assert_eq!(v.len(), self.0.len());
        Point(self.0.iter().zip(v).map(|(x, d)| x + scale * d).collect())
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionKind {
    /// Standard basis vector `e_i` (zero-based index).
    Coordinate(usize),
    Sphere,
    Gaussian,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    pub coords: Vec<f64>,
    pub kind: DirectionKind,
}

impl Direction {
    pub fn dimension(&self) -> usize {
        self.coords.len()
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

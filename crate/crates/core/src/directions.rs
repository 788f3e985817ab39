//! Probe-direction generators.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::point::{norm, Direction, DirectionKind};
use crate::rng::StreamRng;

/// Standard basis vector `e_index` in `R^dimension` (zero-based index).
pub fn draw_coordinate(index: usize, dimension: usize) -> Result<Direction> {
    if index >= dimension {
        return Err(Error::arg(format!(
            "coordinate index {index} out of range for dimension {dimension}"
        )));
    }
    let mut coords = vec![0.0; dimension];
    coords[index] = 1.0;
    Ok(Direction {
        coords,
        kind: DirectionKind::Coordinate(index),
    })
}

/// Uniform draw from the unit sphere `S^{d-1}`, by normalizing a standard
/// Gaussian vector.
pub fn draw_sphere(rng: &mut StreamRng, dimension: usize) -> Result<Direction> {
    check_dimension(dimension)?;
    loop {
        let mut coords = gaussian_vector(rng, dimension);
        let r = norm(&coords);
        // Probability zero for any d >= 1, but a zero draw cannot be normalized.
        if r > 0.0 && r.is_finite() {
            coords.iter_mut().for_each(|c| *c /= r);
            return Ok(Direction {
                coords,
                kind: DirectionKind::Sphere,
            });
        }
    }
}

/// `u ~ N(0, I_d)`.
pub fn draw_gaussian(rng: &mut StreamRng, dimension: usize) -> Result<Direction> {
    check_dimension(dimension)?;
    Ok(Direction {
        coords: gaussian_vector(rng, dimension),
        kind: DirectionKind::Gaussian,
    })
}

fn check_dimension(dimension: usize) -> Result<()> {
    if dimension == 0 {
        Err(Error::arg("direction dimension must be >= 1"))
    } else {
        Ok(())
    }
}

fn gaussian_vector(rng: &mut StreamRng, dimension: usize) -> Vec<f64> {
    (0..dimension).map(|_| StandardNormal.sample(rng)).collect()
}

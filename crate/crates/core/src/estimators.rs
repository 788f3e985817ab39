//! Zeroth-order gradient estimators for decision-dependent sampling.
//!
//! All two-point estimators share the form
//!
//! ```text
//! g = (1/m) Σ_j  scale · Σ_i [f(x + μv_i, ξ¹ᵢⱼ) − f(x − μv_i, ξ²ᵢⱼ)] / (2μ) · v_i
//! ```
//!
//! where every probe point draws its own `ξ` (the forward and backward draws
//! are never shared, since `D(x + μv)` and `D(x − μv)` differ). Directions
//! are drawn once per call and reused by all `m` batch replicates.
//!
//! | kind       | directions `v_i`        | scale   | draws per call |
//! |------------|-------------------------|---------|----------------|
//! | coordinate | `e_1 … e_d`             | `1`     | `2·d·m`        |
//! | sphere     | `N` uniform on `S^{d-1}`| `d/N`   | `2·N·m`        |
//! | gaussian   | `N` draws of `N(0, I)`  | `1/N`   | `2·N·m`        |
//! | one-point  | `N` uniform on `S^{d-1}`| `d/N`   | `N·m`          |

use std::fmt;
use std::str::FromStr;

use crate::directions::{draw_coordinate, draw_gaussian, draw_sphere};
use crate::error::{Error, Result};
use crate::oracle::SampleOracle;
use crate::point::{Direction, Point};
use crate::rng::{tags, RngStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    Coordinate,
    Sphere,
    Gaussian,
    OnePoint,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [
        EstimatorKind::Coordinate,
        EstimatorKind::Sphere,
        EstimatorKind::Gaussian,
        EstimatorKind::OnePoint,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorKind::Coordinate => "coordinate",
            EstimatorKind::Sphere => "sphere",
            EstimatorKind::Gaussian => "gaussian",
            EstimatorKind::OnePoint => "one_point",
        }
    }

    /// Conventional method label used in reports.
    pub fn method_label(&self) -> &'static str {
        match self {
            EstimatorKind::Coordinate => "ZO-CO",
            EstimatorKind::Sphere => "ZO-SPH",
            EstimatorKind::Gaussian => "ZO-GA",
            EstimatorKind::OnePoint => "ZO-OG",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "coordinate" | "co" | "zo_co" => Ok(EstimatorKind::Coordinate),
            "sphere" | "sph" | "zo_sph" => Ok(EstimatorKind::Sphere),
            "gaussian" | "ga" | "zo_ga" => Ok(EstimatorKind::Gaussian),
            "one_point" | "onepoint" | "og" | "zo_og" => Ok(EstimatorKind::OnePoint),
            other => Err(Error::arg(format!("unknown estimator kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorConfig {
    pub kind: EstimatorKind,
    /// Smoothing radius `μ > 0`.
    pub smoothing: f64,
    /// Number of random directions `N`; the coordinate estimator always
    /// uses the `d` basis vectors and ignores this.
    pub directions: usize,
    /// Mini-batch size `m`: draws averaged per probe point.
    pub batch: usize,
    /// Keep per-probe values in [`GradientEstimate::probes`].
    pub record_probes: bool,
}

impl EstimatorConfig {
    pub fn new(
        kind: EstimatorKind,
        smoothing: f64,
        directions: usize,
        batch: usize,
    ) -> Result<Self> {
        let cfg = EstimatorConfig {
            kind,
            smoothing,
            directions,
            batch,
            record_probes: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_probes(mut self) -> Self {
        self.record_probes = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.smoothing > 0.0 && self.smoothing.is_finite()) {
            return Err(Error::arg(format!(
                "smoothing parameter must be finite and > 0, got {}",
                self.smoothing
            )));
        }
        if self.directions == 0 {
            return Err(Error::arg("direction count N must be >= 1"));
        }
        if self.batch == 0 {
            return Err(Error::arg("batch size m must be >= 1"));
        }
        Ok(())
    }

    /// Directions actually used at dimension `d`.
    pub fn direction_count(&self, dimension: usize) -> usize {
        match self.kind {
            EstimatorKind::Coordinate => dimension,
            _ => self.directions,
        }
    }

    /// Oracle draws consumed by one call at dimension `d`.
    pub fn samples_per_call(&self, dimension: usize) -> u64 {
        let per_direction = match self.kind {
            EstimatorKind::OnePoint => 1,
            _ => 2,
        };
        (per_direction * self.direction_count(dimension) * self.batch) as u64
    }
}

/// Values observed along one direction.
#[derive(Clone, Debug, PartialEq)]
pub struct Probe {
    pub direction: Direction,
    /// `f(x + μv, ξ)` for each batch replicate.
    pub forward: Vec<f64>,
    /// `f(x − μv, ξ)` for each batch replicate; empty for one-point.
    pub backward: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradientEstimate {
    pub g: Vec<f64>,
    pub samples_used: u64,
    /// Populated only when the config asks for probe recording.
    pub probes: Vec<Probe>,
}

/// Runs the estimator selected by `cfg.kind`.
pub fn estimate(
    x: &Point,
    cfg: &EstimatorConfig,
    oracle: &SampleOracle<'_>,
    rng: &RngStream,
) -> Result<GradientEstimate> {
    match cfg.kind {
        EstimatorKind::Coordinate => grad_coordinate(x, cfg, oracle, rng),
        EstimatorKind::Sphere => grad_sphere(x, cfg, oracle, rng),
        EstimatorKind::Gaussian => grad_gaussian(x, cfg, oracle, rng),
        EstimatorKind::OnePoint => grad_one_point(x, cfg, oracle, rng),
    }
}

/// Central differences along every coordinate axis.
pub fn grad_coordinate(
    x: &Point,
    cfg: &EstimatorConfig,
    oracle: &SampleOracle<'_>,
    rng: &RngStream,
) -> Result<GradientEstimate> {
    expect_kind(cfg, EstimatorKind::Coordinate)?;
    let d = check_point(x, oracle)?;
    let dirs = (0..d)
        .map(|i| draw_coordinate(i, d))
        .collect::<Result<Vec<_>>>()?;
    two_point_with_directions(x, cfg, oracle, rng, &dirs, 1.0)
}

/// Two-point estimator with directions uniform on the unit sphere.
pub fn grad_sphere(
    x: &Point,
    cfg: &EstimatorConfig,
    oracle: &SampleOracle<'_>,
    rng: &RngStream,
) -> Result<GradientEstimate> {
    expect_kind(cfg, EstimatorKind::Sphere)?;
    let d = check_point(x, oracle)?;
    let dirs = sphere_directions(rng, d, cfg.directions)?;
    two_point_with_directions(x, cfg, oracle, rng, &dirs, d as f64 / cfg.directions as f64)
}

/// Two-point estimator with standard Gaussian directions.
pub fn grad_gaussian(
    x: &Point,
    cfg: &EstimatorConfig,
    oracle: &SampleOracle<'_>,
    rng: &RngStream,
) -> Result<GradientEstimate> {
    expect_kind(cfg, EstimatorKind::Gaussian)?;
    let d = check_point(x, oracle)?;
    let mut g = rng.derive(tags::DIRECTION, 0).generator();
    let dirs = (0..cfg.directions)
        .map(|_| draw_gaussian(&mut g, d))
        .collect::<Result<Vec<_>>>()?;
    two_point_with_directions(x, cfg, oracle, rng, &dirs, 1.0 / cfg.directions as f64)
}

/// One-point estimator: a single forward evaluation per direction, sphere
/// directions scaled by `d/N`.
pub fn grad_one_point(
    x: &Point,
    cfg: &EstimatorConfig,
    oracle: &SampleOracle<'_>,
    rng: &RngStream,
) -> Result<GradientEstimate> {
    expect_kind(cfg, EstimatorKind::OnePoint)?;
    let d = check_point(x, oracle)?;
    let dirs = sphere_directions(rng, d, cfg.directions)?;
    one_point_with_directions(x, cfg, oracle, rng, &dirs, d as f64 / cfg.directions as f64)
}

fn sphere_directions(rng: &RngStream, d: usize, n: usize) -> Result<Vec<Direction>> {
    let mut g = rng.derive(tags::DIRECTION, 0).generator();
    (0..n).map(|_| draw_sphere(&mut g, d)).collect()
}

/// Two-point estimate along caller-supplied directions:
/// `g = scale · Σ_i mean_j[f(x+μv_i) − f(x−μv_i)] / (2μ) · v_i`.
///
/// Probe `(i, j, side)` draws from stream `rng.derive_path(PROBE, [i, j, side])`,
/// so the result does not depend on evaluation order.
pub fn two_point_with_directions(
    x: &Point,
    cfg: &EstimatorConfig,
    oracle: &SampleOracle<'_>,
    rng: &RngStream,
    directions: &[Direction],
    scale: f64,
) -> Result<GradientEstimate> {
    cfg.validate()?;
    let d = check_point(x, oracle)?;
    let mu = cfg.smoothing;
    let m = cfg.batch;
    let mut g = vec![0.0; d];
    let mut used = 0u64;
    let mut probes = Vec::new();
    let mut forward = vec![0.0; m];
    let mut backward = vec![0.0; m];

    for (i, dir) in directions.iter().enumerate() {
        if dir.dimension() != d {
            return Err(Error::arg("direction dimension does not match the point"));
        }
        let plus = x.offset(&dir.coords, mu);
        let minus = x.offset(&dir.coords, -mu);
        let mut diff = 0.0;
        for j in 0..m {
            let path = [i as u64, j as u64];
            let fp = draw(oracle, &plus, rng, &path, 0, used)?;
            used += 1;
            let fm = draw(oracle, &minus, rng, &path, 1, used)?;
            used += 1;
            forward[j] = fp;
            backward[j] = fm;
            diff += fp - fm;
        }
        let coef = scale * (diff / m as f64) / (2.0 * mu);
        g.iter_mut()
            .zip(&dir.coords)
            .for_each(|(gk, vk)| *gk += coef * vk);
        if cfg.record_probes {
            probes.push(Probe {
                direction: dir.clone(),
                forward: forward.clone(),
                backward: backward.clone(),
            });
        }
    }

    Ok(GradientEstimate {
        g,
        samples_used: used,
        probes,
    })
}

/// One-point estimate along caller-supplied directions:
/// `g = scale · Σ_i mean_j[f(x+μv_i)] / (2μ) · v_i`.
pub fn one_point_with_directions(
    x: &Point,
    cfg: &EstimatorConfig,
    oracle: &SampleOracle<'_>,
    rng: &RngStream,
    directions: &[Direction],
    scale: f64,
) -> Result<GradientEstimate> {
    cfg.validate()?;
    let d = check_point(x, oracle)?;
    let mu = cfg.smoothing;
    let m = cfg.batch;
    let mut g = vec![0.0; d];
    let mut used = 0u64;
    let mut probes = Vec::new();
    let mut forward = vec![0.0; m];

    for (i, dir) in directions.iter().enumerate() {
        if dir.dimension() != d {
            return Err(Error::arg("direction dimension does not match the point"));
        }
        let plus = x.offset(&dir.coords, mu);
        let mut total = 0.0;
        for (j, slot) in forward.iter_mut().enumerate() {
            let fp = draw(oracle, &plus, rng, &[i as u64, j as u64], 0, used)?;
            used += 1;
            *slot = fp;
            total += fp;
        }
        let coef = scale * (total / m as f64) / (2.0 * mu);
        g.iter_mut()
            .zip(&dir.coords)
            .for_each(|(gk, vk)| *gk += coef * vk);
        if cfg.record_probes {
            probes.push(Probe {
                direction: dir.clone(),
                forward: forward.clone(),
                backward: Vec::new(),
            });
        }
    }

    Ok(GradientEstimate {
        g,
        samples_used: used,
        probes,
    })
}

fn draw(
    oracle: &SampleOracle<'_>,
    at: &Point,
    rng: &RngStream,
    path: &[u64; 2],
    side: u64,
    used_so_far: u64,
) -> Result<f64> {
    let stream = rng.derive_path(tags::PROBE, &[path[0], path[1], side]);
    oracle.sample(at, &stream).map_err(|e| match e {
        Error::BudgetExhausted { limit, .. } => Error::BudgetExhausted {
            limit,
            wasted: used_so_far,
        },
        other => other,
    })
}

fn expect_kind(cfg: &EstimatorConfig, kind: EstimatorKind) -> Result<()> {
    if cfg.kind != kind {
        return Err(Error::arg(format!(
            "estimator config has kind {}, expected {kind}",
            cfg.kind
        )));
    }
    Ok(())
}

fn check_point(x: &Point, oracle: &SampleOracle<'_>) -> Result<usize> {
    let d = oracle.dimension();
    if x.dimension() != d {
        return Err(Error::arg(format!(
            "point has dimension {}, oracle expects {d}",
            x.dimension()
        )));
    }
    Ok(d)
}

//! Smoothed-function gradients, smoothing-bias bounds and exact moments of
//! the direction distributions.
//!
//! These are reference quantities: the statistical checks compare estimator
//! output against them, so nothing here calls into `estimators`.

use nalgebra::{DMatrix, DVector};

use crate::directions::{draw_gaussian, draw_sphere};
use crate::error::{Error, Result};
use crate::oracle::Environment;
use crate::point::Point;
use crate::rng::{tags, RngStream};
use crate::stats::MomentAccumulator;

pub const DEFAULT_MC_DRAWS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmoothingKernel {
    /// Uniform on the unit ball (`F_{μ,B}`).
    Ball,
    /// Standard Gaussian (`F_{μ,N}`).
    Gaussian,
}

/// Monte-Carlo mean with per-coordinate standard errors.
#[derive(Clone, Debug, PartialEq)]
pub struct McVector {
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
}

impl McVector {
    fn from_acc(acc: &MomentAccumulator) -> Self {
        McVector {
            mean: acc.mean().to_vec(),
            stderr: acc.stderr(),
        }
    }

    /// True when every coordinate lies within `z` standard errors of `target`.
    pub fn within(&self, target: &[f64], z: f64) -> bool {
        self.mean
            .iter()
            .zip(&self.stderr)
            .zip(target)
            .all(|((m, s), t)| (m - t).abs() <= z * s)
    }
}

/// Monte-Carlo estimator of `∇F_{μ,B}` or `∇F_{μ,N}` from exact `F`.
pub struct SmoothedFunctionOracle<'e> {
    env: &'e dyn Environment,
    smoothing: f64,
    kernel: SmoothingKernel,
    draws: usize,
}

impl<'e> SmoothedFunctionOracle<'e> {
    pub fn new(env: &'e dyn Environment, smoothing: f64, kernel: SmoothingKernel) -> Result<Self> {
        if !(smoothing > 0.0 && smoothing.is_finite()) {
            return Err(Error::arg("smoothing radius must be finite and > 0"));
        }
        Ok(SmoothedFunctionOracle {
            env,
            smoothing,
            kernel,
            draws: DEFAULT_MC_DRAWS,
        })
    }

    pub fn with_draws(mut self, draws: usize) -> Result<Self> {
        if draws == 0 {
            return Err(Error::arg("Monte-Carlo draw count must be >= 1"));
        }
        self.draws = draws;
        Ok(self)
    }

    /// Ball kernel: `E_s[d(F(x+μs) − F(x−μs))/(2μ) · s]` with `s` uniform on
    /// the sphere, which equals `∇F_{μ,B}(x)`. Gaussian kernel:
    /// `E_u[(F(x+μu) − F(x−μu))/(2μ) · u] = ∇F_{μ,N}(x)`.
    pub fn smoothed_gradient(&self, x: &Point, rng: &RngStream) -> Result<McVector> {
        let d = self.env.dimension();
        if x.dimension() != d {
            return Err(Error::arg("point dimension does not match environment"));
        }
        if self.env.exact_value(x).is_none() {
            return Err(Error::UnsupportedEnvironment(
                "smoothed gradient needs exact objective values".into(),
            ));
        }
        let mu = self.smoothing;
        let mut g = rng.derive(tags::DIRECTION, 0).generator();
        let mut acc = MomentAccumulator::new(d);
        let mut term = vec![0.0; d];
        for _ in 0..self.draws {
            let (v, scale) = match self.kernel {
                SmoothingKernel::Ball => (draw_sphere(&mut g, d)?.coords, d as f64),
                SmoothingKernel::Gaussian => (draw_gaussian(&mut g, d)?.coords, 1.0),
            };
            let fp = self.exact(&x.offset(&v, mu))?;
            let fm = self.exact(&x.offset(&v, -mu))?;
            let c = scale * (fp - fm) / (2.0 * mu);
            term.iter_mut().zip(&v).for_each(|(t, vk)| *t = c * vk);
            acc.push(&term);
        }
        Ok(McVector::from_acc(&acc))
    }

    fn exact(&self, p: &Point) -> Result<f64> {
        self.env.exact_value(p).ok_or_else(|| {
            Error::UnsupportedEnvironment("exact objective unavailable at probe point".into())
        })
    }
}

/// Bound on `‖∇F_μ(x) − ∇F(x)‖` for the given kernel.
///
/// Ball: `μM`, or `μ²H` under a Hessian-Lipschitz constant.
/// Gaussian: `√d·μM`, or `d·μ²H`. When both constants are supplied the
/// smaller (still valid) bound is returned; with neither, no finite bound
/// exists and the result is `+∞`.
pub fn smoothing_bias_bound(
    kernel: SmoothingKernel,
    smoothing: f64,
    dimension: usize,
    smoothness: Option<f64>,
    hessian_lipschitz: Option<f64>,
) -> f64 {
    let d = dimension as f64;
    let mu = smoothing;
    let from_m = smoothness.map(|m| match kernel {
        SmoothingKernel::Ball => mu * m,
        SmoothingKernel::Gaussian => d.sqrt() * mu * m,
    });
    let from_h = hessian_lipschitz.map(|h| match kernel {
        SmoothingKernel::Ball => mu * mu * h,
        SmoothingKernel::Gaussian => d * mu * mu * h,
    });
    match (from_m, from_h) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => f64::INFINITY,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentKind {
    /// `E[‖s‖^k s sᵀ]`, `s` uniform on the sphere.
    SphereKthSsT,
    /// `E[(aᵀs)² s sᵀ]`.
    SphereQuadForm,
    /// `E[‖u‖^k u uᵀ]`, `u ~ N(0, I)`.
    GaussKthUuT,
    /// `E[(aᵀu)² u uᵀ]`.
    GaussQuadForm,
}

/// Exact value of the requested moment matrix.
pub fn analytic_moment(
    kind: MomentKind,
    dimension: usize,
    k: u32,
    a: Option<&[f64]>,
) -> Result<DMatrix<f64>> {
    if dimension == 0 {
        return Err(Error::arg("dimension must be >= 1"));
    }
    let d = dimension as f64;
    let id = DMatrix::<f64>::identity(dimension, dimension);
    match kind {
        MomentKind::SphereKthSsT | MomentKind::GaussKthUuT if k % 2 == 1 => {
            Err(Error::arg(format!("moment order k must be even, got {k}")))
        }
        MomentKind::SphereKthSsT => Ok(id / d),
        MomentKind::GaussKthUuT => {
            let factor: f64 = (1..=k / 2).map(|j| d + 2.0 * j as f64).product();
            Ok(id * factor)
        }
        MomentKind::SphereQuadForm | MomentKind::GaussQuadForm => {
            let a = a.ok_or_else(|| Error::arg("quadratic-form moment needs a vector a"))?;
            if a.len() != dimension {
                return Err(Error::arg("vector a must have length d"));
            }
            let av = DVector::from_column_slice(a);
            let m = id * av.dot(&av) + (&av * av.transpose()) * 2.0;
            Ok(match kind {
                MomentKind::SphereQuadForm => m / (d * (d + 2.0)),
                _ => m,
            })
        }
    }
}

/// Monte-Carlo estimate of a moment matrix (entrywise mean and standard
/// error), for comparison with [`analytic_moment`].
pub fn monte_carlo_moment(
    kind: MomentKind,
    dimension: usize,
    k: u32,
    a: Option<&[f64]>,
    draws: usize,
    rng: &RngStream,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if draws < 2 {
        return Err(Error::arg("need at least two draws"));
    }
    if let Some(a) = a {
        if a.len() != dimension {
            return Err(Error::arg("vector a must have length d"));
        }
    }
    let d = dimension;
    let mut g = rng.generator();
    let mut acc = MomentAccumulator::new(d * d);
    let mut buf = vec![0.0; d * d];
    for _ in 0..draws {
        let v = match kind {
            MomentKind::SphereKthSsT | MomentKind::SphereQuadForm => draw_sphere(&mut g, d)?.coords,
            MomentKind::GaussKthUuT | MomentKind::GaussQuadForm => draw_gaussian(&mut g, d)?.coords,
        };
        let w = match kind {
            MomentKind::SphereKthSsT | MomentKind::GaussKthUuT => {
                v.iter().map(|x| x * x).sum::<f64>().powf(k as f64 / 2.0)
            }
            MomentKind::SphereQuadForm | MomentKind::GaussQuadForm => {
                let a = a.ok_or_else(|| Error::arg("quadratic-form moment needs a vector a"))?;
                let p: f64 = a.iter().zip(&v).map(|(x, y)| x * y).sum();
                p * p
            }
        };
        for r in 0..d {
            for c in 0..d {
                buf[r * d + c] = w * v[r] * v[c];
            }
        }
        acc.push(&buf);
    }
    let mean = DMatrix::from_row_slice(d, d, acc.mean());
    let se = DMatrix::from_row_slice(d, d, &acc.stderr());
    Ok((mean, se))
}

/// Empirical variance of batch means divided by (single-draw variance / m).
///
/// `samples` is `m × K`: column `k` holds the `m` draws of replicate `k`.
/// Values near 1 confirm that averaging `m` independent draws divides the
/// variance by `m`.
pub fn minibatch_variance_ratio(samples: &DMatrix<f64>) -> Result<f64> {
    let (m, k) = samples.shape();
    if m == 0 || k < 2 {
        return Err(Error::arg("need m >= 1 draws per batch and K >= 2 batches"));
    }
    let means: Vec<f64> = samples.column_iter().map(|c| c.mean()).collect();
    // column-major storage: for m = 1 this is the same sequence as `means`
    let singles = samples.as_slice();
    let var_mean = unbiased_variance(&means);
    let var_single = unbiased_variance(singles);
    if var_single == 0.0 || var_mean == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(var_mean / (var_single / m as f64))
}

fn unbiased_variance(xs: &[f64]) -> f64 {
    let mut acc = MomentAccumulator::new(1);
    xs.iter().for_each(|x| acc.push(&[*x]));
    acc.variance()[0]
}

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::estimators::{EstimatorConfig, EstimatorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `F` is `M`-smooth.
    GradLipschitz,
    /// `∇²F` is additionally `H`-Lipschitz.
    HessianLipschitz,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::GradLipschitz => "grad_lipschitz",
            Regime::HessianLipschitz => "hessian_lipschitz",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "grad" | "grad_lipschitz" | "gradient" => Ok(Regime::GradLipschitz),
            "hessian" | "hessian_lipschitz" => Ok(Regime::HessianLipschitz),
            other => Err(Error::arg(format!("unknown regime '{other}'"))),
        }
    }
}

/// Step size, iteration count and estimator settings for one descent run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParameterPlan {
    pub kind: EstimatorKind,
    pub regime: Regime,
    /// `μ`
    pub smoothing: f64,
    /// `N`; ignored by the coordinate estimator, which always uses `d`.
    pub directions: usize,
    /// `m`
    pub batch: usize,
    /// `η`
    pub step: f64,
    /// `T`; the run performs `T + 1` estimates and updates.
    pub iterations: usize,
}

impl ParameterPlan {
    pub fn new(
        kind: EstimatorKind,
        regime: Regime,
        smoothing: f64,
        directions: usize,
        batch: usize,
        step: f64,
        iterations: usize,
    ) -> Result<Self> {
        let plan = ParameterPlan {
            kind,
            regime,
            smoothing,
            directions,
            batch,
            step,
            iterations,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::arg("step size must be finite and > 0"));
        }
        self.estimator_config().map(|_| ())
    }

    pub fn estimator_config(&self) -> Result<EstimatorConfig> {
        EstimatorConfig::new(self.kind, self.smoothing, self.directions, self.batch)
    }

    /// Oracle draws per run: `(T + 1)` times the per-estimate cost.
    pub fn total_samples(&self, dimension: usize) -> Result<u64> {
        let per = self.estimator_config()?.samples_per_call(dimension);
        Ok(per.saturating_mul(self.iterations as u64 + 1))
    }

    /// Whether `η ≤ 1/(4M)`, the condition behind the descent inequality.
    pub fn step_admissible(&self, smoothness: f64) -> bool {
        self.step * 4.0 * smoothness <= 1.0 + 1e-12
    }
}

/// Constants resolving the `Θ(·)` orders in the schedules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlannerConstants {
    pub c_mu: f64,
    pub c_m: f64,
    /// Defaults to `16·M·(F(x_0) − F*)` when the gap is known, else 1.
    pub c_t: Option<f64>,
    /// Reject `ε` above the range the convergence guarantees cover.
    pub enforce_epsilon_range: bool,
}

impl Default for PlannerConstants {
    fn default() -> Self {
        PlannerConstants {
            c_mu: 1.0,
            c_m: 1.0,
            c_t: None,
            enforce_epsilon_range: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanRequest {
    pub kind: EstimatorKind,
    pub regime: Regime,
    pub epsilon: f64,
    pub dimension: usize,
    pub sigma: f64,
    pub smoothness: f64,
    pub hessian_lipschitz: Option<f64>,
    /// `F(x_0) − F*`, when known.
    pub initial_gap: Option<f64>,
}

impl PlanRequest {
    pub fn new(
        kind: EstimatorKind,
        regime: Regime,
        epsilon: f64,
        dimension: usize,
        sigma: f64,
        smoothness: f64,
    ) -> Self {
        PlanRequest {
            kind,
            regime,
            epsilon,
            dimension,
            sigma,
            smoothness,
            hessian_lipschitz: None,
            initial_gap: None,
        }
    }

    pub fn with_hessian_lipschitz(mut self, h: f64) -> Self {
        self.hessian_lipschitz = Some(h);
        self
    }

    pub fn with_initial_gap(mut self, gap: f64) -> Self {
        self.initial_gap = Some(gap);
        self
    }

    /// Largest admissible `ε` for this kind and regime.
    pub fn epsilon_limit(&self) -> f64 {
        match (self.kind, self.regime) {
            (EstimatorKind::Gaussian, Regime::HessianLipschitz) => 0.25,
            _ => 1.0 / 3.0,
        }
    }
}

/// `⌈v⌉`, ignoring float noise just above an integer.
fn ceil_tolerant(v: f64) -> usize {
    (v - v.abs() * 1e-12).ceil().max(1.0) as usize
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::arg(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

/// Schedule guaranteeing `E‖∇F(x̄)‖² ≤ ε²` up to the chosen constants.
pub fn plan_parameters(req: &PlanRequest, constants: &PlannerConstants) -> Result<ParameterPlan> {
    let eps = req.epsilon;
    positive("epsilon", eps)?;
    if constants.enforce_epsilon_range && eps > req.epsilon_limit() + 1e-15 {
        return Err(Error::arg(format!(
            "epsilon {eps} exceeds {:.4} for {}/{}",
            req.epsilon_limit(),
            req.kind,
            req.regime
        )));
    }
    if req.dimension == 0 {
        return Err(Error::arg("dimension must be >= 1"));
    }
    positive("sigma", req.sigma)?;
    positive("M", req.smoothness)?;
    positive("c_mu", constants.c_mu)?;
    positive("c_m", constants.c_m)?;
    let h = match req.regime {
        Regime::HessianLipschitz => {
            let h = req
                .hessian_lipschitz
                .ok_or_else(|| Error::arg("hessian regime needs H"))?;
            positive("H", h)?;
            Some(h)
        }
        Regime::GradLipschitz => None,
    };
    let c_t = match (constants.c_t, req.initial_gap) {
        (Some(c), _) => c,
        (None, Some(gap)) if gap > 0.0 => 16.0 * req.smoothness * gap,
        (None, _) => 1.0,
    };
    positive("c_T", c_t)?;

    let d = req.dimension as f64;
    let (sigma, m_smooth) = (req.sigma, req.smoothness);
    let grad = req.regime == Regime::GradLipschitz;
    let n_random = if grad {
        d * d * eps.powi(-4)
    } else {
        d * d * eps.powi(-3)
    };
    let mu_random = if grad {
        constants.c_mu * eps
    } else {
        constants.c_mu * eps.sqrt()
    };

    let (smoothing, directions, batch) = match req.kind {
        EstimatorKind::Coordinate => {
            if grad {
                let m = ceil_tolerant(constants.c_m * d * d * eps.powi(-4));
                let mu = (2.0 * sigma * sigma / (m as f64 * m_smooth * m_smooth)).powf(0.25);
                (mu, req.dimension, m)
            } else {
                let h = h.expect("checked above");
                let m = ceil_tolerant(constants.c_m * d.powf(1.5) * eps.powi(-3));
                let mu = (18.0 * sigma * sigma / (m as f64 * h * h)).powf(1.0 / 6.0);
                (mu, req.dimension, m)
            }
        }
        EstimatorKind::Sphere => (mu_random, ceil_tolerant(n_random), 1),
        EstimatorKind::Gaussian => (mu_random / d.sqrt(), ceil_tolerant(n_random), 1),
        EstimatorKind::OnePoint => {
            return Err(Error::arg(
                "no schedule is available for the one-point estimator",
            ))
        }
    };
    ParameterPlan::new(
        req.kind,
        req.regime,
        smoothing,
        directions,
        batch,
        1.0 / (4.0 * m_smooth),
        ceil_tolerant(c_t * eps.powi(-2)),
    )
}

/// Total sample complexity order of the schedule.
pub fn complexity_tag(kind: EstimatorKind, regime: Regime) -> Option<&'static str> {
    use EstimatorKind::*;
    match (kind, regime) {
        (Coordinate, Regime::GradLipschitz) => Some("O(d³ε⁻⁶)"),
        (Coordinate, Regime::HessianLipschitz) => Some("O(d^{5/2}ε⁻⁵)"),
        (Sphere | Gaussian, Regime::GradLipschitz) => Some("O(d²ε⁻⁶)"),
        (Sphere | Gaussian, Regime::HessianLipschitz) => Some("O(d²ε⁻⁵)"),
        (OnePoint, _) => None,
    }
}

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_STEPS: usize = 10_000;

/// `‖A‖_op` by power iteration on `AᵀA`.
pub fn operator_norm(a: &DMatrix<f64>) -> Result<f64> {
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::arg("matrix has non-finite entries"));
    }
    let cols = a.ncols();
    if cols == 0 || a.nrows() == 0 {
        return Ok(0.0);
    }
    let ata = a.transpose() * a;
    // irregular start so it is not orthogonal to a structured top eigenvector
    let mut v = DVector::from_fn(cols, |i, _| {
        1.0 + ((i as f64 + 1.0) * 0.618_033_988_75).fract()
    });
    v /= v.norm();
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_STEPS {
        let w = &ata * &v;
        let next = w.norm();
        if next == 0.0 {
            return Ok(0.0);
        }
        v = w / next;
        if (next - lambda).abs() <= POWER_TOL * next {
            return Ok(next.sqrt());
        }
        lambda = next;
    }
    Err(Error::Numerical(format!(
        "power iteration did not converge in {POWER_MAX_STEPS} steps"
    )))
}

/// `M` (and `H` when `ρ` is given) for `ξ = ν + Ax` with a `β`-smooth,
/// `ρ`-Hessian-Lipschitz loss.
pub fn smoothness_from_location_scale(
    a: &DMatrix<f64>,
    beta: f64,
    rho: Option<f64>,
) -> Result<(f64, Option<f64>)> {
    positive("beta", beta)?;
    if let Some(r) = rho {
        positive("rho", r)?;
    }
    let n2 = operator_norm(a)?.powi(2);
    let m = (beta * beta * (1.0 + n2) * n2.max(1.0)).sqrt();
    let h = rho.map(|r| (r * r * (1.0 + n2) * (n2 * n2).max(1.0)).sqrt());
    Ok((m, h))
}

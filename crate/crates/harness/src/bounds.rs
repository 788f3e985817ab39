//! Upper bounds on `E‖g − ∇F‖²` for the two-point estimators.

use ddzo_core::{EstimatorKind, Regime};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundInputs {
    pub dimension: usize,
    pub sigma: f64,
    /// `M` in the gradient-Lipschitz regime, `H` in the Hessian regime.
    pub constant: f64,
    pub smoothing: f64,
    /// Ignored by the coordinate estimator.
    pub directions: usize,
    pub batch: usize,
    /// `‖∇F(x)‖²` at the evaluation point.
    pub grad_norm_sq: f64,
}

/// `None` for the one-point estimator, which has no such bound.
pub fn mse_bound(kind: EstimatorKind, regime: Regime, p: &BoundInputs) -> Option<f64> {
    let d = p.dimension as f64;
    let s2 = p.sigma * p.sigma;
    let c2 = p.constant * p.constant;
    let mu2 = p.smoothing * p.smoothing;
    let mu4 = mu2 * mu2;
    let n = p.directions as f64;
    let m = p.batch as f64;
    let g = p.grad_norm_sq;
    Some(match (kind, regime) {
        (EstimatorKind::Coordinate, Regime::GradLipschitz) => {
            3.0 * s2 * d / (2.0 * mu2 * m) + 3.0 * c2 * d * mu2 / 4.0
        }
        (EstimatorKind::Coordinate, Regime::HessianLipschitz) => {
            3.0 * s2 * d / (2.0 * mu2 * m) + c2 * mu4 * d / 12.0
        }
        (EstimatorKind::Sphere, regime) => {
            let noise = 3.0 * s2 * d * d / (mu2 * n * m);
            let spread = 18.0 * d * d * g / (n * (d + 2.0));
            let bias = match regime {
                Regime::GradLipschitz => 3.0 * c2 * mu2 + 3.0 * c2 * mu2 * d * d / (2.0 * n),
                Regime::HessianLipschitz => 3.0 * mu4 * c2 + c2 * mu4 * d * d / (6.0 * n),
            };
            noise + bias + spread
        }
        (EstimatorKind::Gaussian, regime) => {
            let noise = 3.0 * s2 * d / (mu2 * n * m);
            let spread = 18.0 * d * g / n;
            let bias = match regime {
                Regime::GradLipschitz => {
                    3.0 * mu2 * c2 * d + 3.0 * d * c2 * mu2 * (d + 2.0) * (d + 4.0) / (2.0 * n)
                }
                Regime::HessianLipschitz => {
                    3.0 * mu4 * c2 * d * d
                        + c2 * mu4 * d * (d + 2.0) * (d + 4.0) * (d + 6.0) / (6.0 * n)
                }
            };
            noise + bias + spread
        }
        (EstimatorKind::OnePoint, _) => return None,
    })
}

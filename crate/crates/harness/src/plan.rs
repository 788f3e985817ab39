//! Text rendering of a planned schedule.

use ddzo_core::optimizer::complexity_tag;
use ddzo_core::{plan_parameters, ParameterPlan, PlanRequest, PlannerConstants};

use crate::error::Result;

/// Plans `req` and renders it as `key = value` lines.
pub fn plan_report(
    req: &PlanRequest,
    constants: &PlannerConstants,
) -> Result<(ParameterPlan, String)> {
    let plan = plan_parameters(req, constants)?;
    let cfg = plan.estimator_config()?;
    let lines = [
        ("kind", plan.kind.as_str().to_string()),
        ("regime", plan.regime.as_str().to_string()),
        ("epsilon", req.epsilon.to_string()),
        ("dimension", req.dimension.to_string()),
        ("smoothing", plan.smoothing.to_string()),
        ("directions", cfg.direction_count(req.dimension).to_string()),
        ("batch", plan.batch.to_string()),
        ("step", plan.step.to_string()),
        ("iterations", plan.iterations.to_string()),
        (
            "samples_per_iteration",
            cfg.samples_per_call(req.dimension).to_string(),
        ),
        (
            "total_samples",
            plan.total_samples(req.dimension)?.to_string(),
        ),
        (
            "complexity",
            complexity_tag(plan.kind, plan.regime)
                .unwrap_or("n/a")
                .to_string(),
        ),
    ];
    let text = lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    Ok((plan, text))
}

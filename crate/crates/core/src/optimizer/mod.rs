//! Zeroth-order gradient descent, output selection and parameter planning.

mod descent;
mod planner;

pub use descent::{
    descent_lemma_terms, run_descent, run_descent_with, select_output, DescentLemmaTerms, RunTrace,
    TraceOptions, DIVERGENCE_NORM,
};
pub use planner::{
    complexity_tag, operator_norm, plan_parameters, smoothness_from_location_scale, ParameterPlan,
    PlanRequest, PlannerConstants, Regime,
};

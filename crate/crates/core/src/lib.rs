//! Zeroth-order optimization of `F(x) = E_{ξ~D(x)}[f(x, ξ)]` when the
//! sampling distribution moves with the decision `x`.
//!
//! The crate provides two-point (coordinate, sphere, Gaussian) and one-point
//! gradient estimators built on a budgeted sample oracle, the descent loop
//! with uniform output selection, a parameter planner, reference quantities
//! for the smoothed objectives, and three environments (an analytic
//! quadratic, multiproduct pricing and strategic classification).
//!
//! All randomness flows through [`RngStream`]s, so results are a pure
//! function of the seeds.

pub mod budget;
pub mod directions;
pub mod environments;
pub mod error;
pub mod estimators;
pub mod optimizer;
pub mod oracle;
pub mod point;
pub mod rng;
pub mod smoothing;
pub mod stats;

pub use budget::BudgetCounter;
pub use error::{Error, Result};
pub use estimators::{estimate, EstimatorConfig, EstimatorKind, GradientEstimate, Probe};
pub use optimizer::{
    plan_parameters, run_descent, ParameterPlan, PlanRequest, PlannerConstants, Regime, RunTrace,
};
pub use oracle::{Environment, FnEnvironment, Regularity, SampleOracle};
pub use point::{Direction, DirectionKind, Point};
pub use rng::{RngStream, StreamRng};

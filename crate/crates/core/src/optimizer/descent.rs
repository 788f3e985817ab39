use rand::Rng;

use crate::error::{Error, Result};
use crate::estimators::{estimate, GradientEstimate};
use crate::oracle::SampleOracle;
use crate::point::{squared_distance, Point};
use crate::rng::{tags, RngStream};

use super::planner::ParameterPlan;

/// Iterates with a larger norm count as divergence.
pub const DIVERGENCE_NORM: f64 = 1e9;

#[derive(Clone, Debug, PartialEq)]
pub struct TraceOptions {
    /// Keep every `stride`-th iterate (the selected output is always kept).
    pub stride: usize,
    /// Keep the per-iteration `GradientEstimate`s.
    pub keep_estimates: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            stride: 1,
            keep_estimates: true,
        }
    }
}

/// Record of one descent run.
///
/// Iteration `t ∈ {0..T}` estimates `g_t` at `x_t` and steps to `x_{t+1}`.
/// The output is drawn from `x_0..x_T`; `terminal` holds `x_{T+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    /// `x_0, x_stride, x_2·stride, …` up to the last completed iterate.
    pub iterates: Vec<Point>,
    pub stride: usize,
    pub terminal: Option<Point>,
    pub estimates: Vec<GradientEstimate>,
    /// Oracle draws consumed after each iteration.
    pub samples_cumulative: Vec<u64>,
    /// `F(x_t)` per iteration, when the environment is analytic.
    pub objective: Vec<f64>,
    /// `‖∇F(x_t)‖²` per iteration, when analytic.
    pub grad_norm_sq: Vec<f64>,
    /// `‖∇F(x_t) − g_t‖²` per iteration, when analytic.
    pub error_sq: Vec<f64>,
    pub step: f64,
    pub selected_index: usize,
    pub output: Option<Point>,
}

impl RunTrace {
    pub fn iterations(&self) -> usize {
        self.samples_cumulative.len()
    }

    pub fn samples_used(&self) -> u64 {
        self.samples_cumulative.last().copied().unwrap_or(0)
    }

    pub fn is_analytic(&self) -> bool {
        !self.grad_norm_sq.is_empty() && self.grad_norm_sq.len() == self.iterations()
    }
}

/// Index drawn uniformly from `0..count` on the output stream of `rng`.
pub fn select_output(count: usize, rng: &RngStream) -> Result<usize> {
    if count == 0 {
        return Err(Error::arg("cannot select from an empty trajectory"));
    }
    Ok(rng
        .derive(tags::OUTPUT, 0)
        .generator()
        .random_range(0..count))
}

pub fn run_descent(
    x0: &Point,
    plan: &ParameterPlan,
    oracle: &SampleOracle<'_>,
    rng: &RngStream,
) -> Result<(Point, RunTrace)> {
    run_descent_with(x0, plan, oracle, rng, &TraceOptions::default())
}

/// `x_{t+1} = x_t − η g_t` for `t = 0..=T`, output `x̄` uniform on `x_0..x_T`.
///
/// Iteration `t` estimates on stream `rng.derive(ITERATION, t)`; the output
/// index comes from its own stream and is fixed before the loop.
pub fn run_descent_with(
    x0: &Point,
    plan: &ParameterPlan,
    oracle: &SampleOracle<'_>,
    rng: &RngStream,
    options: &TraceOptions,
) -> Result<(Point, RunTrace)> {
    plan.validate()?;
    if options.stride == 0 {
        return Err(Error::arg("trace stride must be >= 1"));
    }
    let d = oracle.dimension();
    if x0.dimension() != d {
        return Err(Error::arg(format!(
            "x0 has dimension {}, oracle expects {d}",
            x0.dimension()
        )));
    }
    let cfg = plan.estimator_config()?;
    let env = oracle.environment();
    let analytic = env.exact_gradient(x0).is_some();
    let has_value = env.exact_value(x0).is_some();
    let count = plan.iterations + 1;
    let selected = select_output(count, rng)?;
    let start = oracle.consumed();

    let mut trace = RunTrace {
        iterates: Vec::with_capacity(count / options.stride + 1),
        stride: options.stride,
        terminal: None,
        estimates: Vec::new(),
        samples_cumulative: Vec::with_capacity(count),
        objective: Vec::new(),
        grad_norm_sq: Vec::new(),
        error_sq: Vec::new(),
        step: plan.step,
        selected_index: selected,
        output: None,
    };

    let mut x = x0.clone();
    for t in 0..count {
        if t % options.stride == 0 {
            trace.iterates.push(x.clone());
        }
        if t == selected {
            trace.output = Some(x.clone());
        }
        let est = estimate(&x, &cfg, oracle, &rng.derive(tags::ITERATION, t as u64))?;
        if has_value {
            trace.objective.extend(env.exact_value(&x));
        }
        if analytic {
            if let Some(grad) = env.exact_gradient(&x) {
                trace.grad_norm_sq.push(grad.iter().map(|c| c * c).sum());
                trace.error_sq.push(squared_distance(&grad, &est.g));
            }
        }
        trace.samples_cumulative.push(oracle.consumed() - start);

        let next: Vec<f64> = x
            .iter()
            .zip(&est.g)
            .map(|(xi, gi)| xi - plan.step * gi)
            .collect();
        if options.keep_estimates {
            trace.estimates.push(est);
        }
        let norm = next.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !norm.is_finite() || norm > DIVERGENCE_NORM {
            return Err(Error::Diverged {
                iteration: t + 1,
                trace: Box::new(trace),
            });
        }
        x = Point::from_vec_unchecked(next);
    }
    trace.terminal = Some(x);
    let out = trace.output.clone().expect("selected index lies in 0..=T");
    Ok((out, trace))
}

/// Both sides of the descent inequality
/// `(1/(T+1))Σ‖∇F(x_t)‖² ≤ 4(F(x_0) − F*)/(η(T+1)) + 3(1/(T+1))Σ‖∇F(x_t) − g_t‖²`,
/// valid whenever `η ≤ 1/(4M)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DescentLemmaTerms {
    pub lhs: f64,
    pub rhs: f64,
}

impl DescentLemmaTerms {
    /// `lhs ≤ rhs` up to relative tolerance `rel`.
    pub fn holds(&self, rel: f64) -> bool {
        self.lhs <= self.rhs + rel * self.rhs.abs().max(self.lhs.abs())
    }
}

/// `None` when the trace lacks analytic diagnostics.
pub fn descent_lemma_terms(trace: &RunTrace, optimal_value: f64) -> Option<DescentLemmaTerms> {
    if !trace.is_analytic() || trace.objective.is_empty() {
        return None;
    }
    let n = trace.iterations() as f64;
    let lhs = trace.grad_norm_sq.iter().sum::<f64>() / n;
    let err = trace.error_sq.iter().sum::<f64>() / n;
    let gap = trace.objective[0] - optimal_value;
    Some(DescentLemmaTerms {
        lhs,
        rhs: 4.0 * gap / (trace.step * n) + 3.0 * err,
    })
}

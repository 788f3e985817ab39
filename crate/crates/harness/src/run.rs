//! Budgeted descent runs across estimators and seeds.

use std::path::Path;
use std::time::Instant;

use ddzo_core::optimizer::{run_descent_with, TraceOptions};
use ddzo_core::rng::tags;
use ddzo_core::stats::mean_sd;
use ddzo_core::{
    plan_parameters, Environment, EstimatorKind, ParameterPlan, PlanRequest, PlannerConstants,
    Point, Regime, RngStream, RunTrace, SampleOracle,
};
use rayon::prelude::*;

use crate::config::{EstimatorSpec, ExperimentConfig, GridSearchSpec, RunSpec};
use crate::env::BuiltEnvironment;
use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    Diverged,
    /// The budget does not cover a single estimate.
    BudgetError,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Diverged => "diverged",
            RowStatus::BudgetError => "budget_error",
        }
    }
}

/// Estimator settings after planning or tuning.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedEstimator {
    pub label: String,
    /// `plan.iterations` is ignored; the run length comes from `cap` and the budget.
    pub plan: ParameterPlan,
    /// Largest `T` allowed.
    pub cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub method: String,
    pub seed: u64,
    pub status: RowStatus,
    /// Mean and sd of `f(x̄, ξ)` over the evaluation draws.
    pub obj_mean: Option<f64>,
    pub obj_sd: Option<f64>,
    pub samples_used: u64,
    /// Estimates performed (`T + 1` on completion).
    pub iterations: usize,
    /// `‖∇F(x̄)‖²`, analytic environments only.
    pub final_grad_norm_sq: Option<f64>,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub method: String,
    pub seed: u64,
    pub cumulative_samples: u64,
    pub obj_estimate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuningRow {
    pub method: String,
    pub step: f64,
    pub smoothing: f64,
    pub directions: usize,
    pub batch: usize,
    /// Mean evaluated objective over the trial seeds; infinite if any trial failed.
    pub score: f64,
    pub selected: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOutput {
    pub rows: Vec<ResultRow>,
    pub trace: Vec<TraceRow>,
    pub tuning: Vec<TuningRow>,
}

impl RunOutput {
    /// Mean and across-seed sd of `obj_mean` over the `ok` rows of `method`.
    pub fn method_summary(&self, method: &str) -> Option<(f64, f64, usize)> {
        let objs: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.method == method && r.status == RowStatus::Ok)
            .filter_map(|r| r.obj_mean)
            .collect();
        if objs.is_empty() {
            return None;
        }
        let (m, s) = mean_sd(&objs);
        Some((m, s, objs.len()))
    }

    pub fn methods(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.method) {
                out.push(r.method.clone());
            }
        }
        out
    }
}

/// Runs every (estimator, seed) row of the experiment.
///
/// `seed_offset` is added to every configured seed (the `--seed` flag).
pub fn run_experiment(cfg: &ExperimentConfig, seed_offset: u64) -> Result<RunOutput> {
    cfg.validate()?;
    let built = BuiltEnvironment::build(&cfg.environment)?;
    let env = built.as_env();
    let x0 = built.start_point(&cfg.run)?;

    let mut out = RunOutput::default();
    let mut resolved = Vec::with_capacity(cfg.estimators.len());
    for (i, spec) in cfg.estimators.iter().enumerate() {
        if cfg.grid_search.enabled && spec.plan.is_none() {
            let (est, rows) = tune(env, &x0, spec, &cfg.grid_search, &cfg.run)?;
            out.tuning.extend(rows);
            resolved.push(est);
        } else {
            resolved.push(resolve(env, &x0, spec).map_err(|e| match e {
                HarnessError::Core(c) => HarnessError::config(format!("estimator[{i}]: {c}")),
                other => other,
            })?);
        }
    }

    let seeds: Vec<u64> = cfg
        .run
        .seed_list()
        .iter()
        .map(|s| s.wrapping_add(seed_offset))
        .collect();
    let jobs: Vec<(usize, u64)> = (0..resolved.len())
        .flat_map(|e| seeds.iter().map(move |s| (e, *s)))
        .collect();
    let results: Vec<(ResultRow, Vec<TraceRow>)> = jobs
        .par_iter()
        .map(|&(e, seed)| execute_row(env, &x0, &resolved[e], seed, &cfg.run, true))
        .collect::<Result<_>>()?;
    for (row, trace) in results {
        out.rows.push(row);
        out.trace.extend(trace);
    }
    Ok(out)
}

fn label_for(spec: &EstimatorSpec, kind: EstimatorKind) -> String {
    spec.label
        .clone()
        .unwrap_or_else(|| kind.method_label().to_string())
}

/// Explicit settings, or the planner's schedule when `[estimator.plan]` is set.
pub fn resolve(
    env: &dyn Environment,
    x0: &Point,
    spec: &EstimatorSpec,
) -> Result<ResolvedEstimator> {
    let kind: EstimatorKind = spec.kind.parse()?;
    let label = label_for(spec, kind);
    let Some(p) = &spec.plan else {
        let (mu, eta) = match (spec.smoothing, spec.step) {
            (Some(mu), Some(eta)) => (mu, eta),
            _ => return Err(HarnessError::config("smoothing and step are required")),
        };
        let plan = ParameterPlan::new(
            kind,
            Regime::GradLipschitz,
            mu,
            spec.directions,
            spec.batch,
            eta,
            0,
        )?;
        return Ok(ResolvedEstimator {
            label,
            plan,
            cap: spec.iterations,
        });
    };
    let regime: Regime = p.regime.parse()?;
    let reg = env.regularity();
    let sigma = p
        .sigma
        .or(reg.sigma)
        .ok_or_else(|| HarnessError::config("plan.sigma: unknown for this environment"))?;
    let smooth = p
        .smoothness
        .or(reg.smoothness)
        .ok_or_else(|| HarnessError::config("plan.smoothness: unknown for this environment"))?;
    let mut req = PlanRequest::new(kind, regime, p.epsilon, env.dimension(), sigma, smooth);
    if let Some(h) = p.hessian_lipschitz.or(reg.hessian_lipschitz) {
        req = req.with_hessian_lipschitz(h);
    }
    if let (Some(f0), Some(fstar)) = (env.exact_value(x0.as_slice()), env.optimal_value()) {
        req = req.with_initial_gap(f0 - fstar);
    }
    let constants = PlannerConstants {
        c_mu: p.c_mu,
        c_m: p.c_m,
        c_t: p.c_t,
        enforce_epsilon_range: p.enforce_epsilon_range,
    };
    let plan = plan_parameters(&req, &constants)?;
    let cap = match (p.cap_iterations, spec.iterations) {
        (_, Some(t)) => Some(t),
        (true, None) => Some(plan.iterations),
        (false, None) => None,
    };
    Ok(ResolvedEstimator { label, plan, cap })
}

/// Picks the grid point with the lowest mean objective over the trial seeds.
pub fn tune(
    env: &dyn Environment,
    x0: &Point,
    spec: &EstimatorSpec,
    grid: &GridSearchSpec,
    run: &RunSpec,
) -> Result<(ResolvedEstimator, Vec<TuningRow>)> {
    let kind: EstimatorKind = spec.kind.parse()?;
    let label = label_for(spec, kind);
    let mut candidates = Vec::new();
    for &eta in &grid.steps {
        for &mu in &grid.smoothing {
            for &count in &grid.counts {
                let (n, m) = match kind {
                    EstimatorKind::Sphere | EstimatorKind::Gaussian => (count, 1),
                    EstimatorKind::Coordinate | EstimatorKind::OnePoint => (1, count),
                };
                let plan = ParameterPlan::new(kind, Regime::GradLipschitz, mu, n, m, eta, 0)?;
                candidates.push(ResolvedEstimator {
                    label: label.clone(),
                    plan,
                    cap: spec.iterations,
                });
            }
        }
    }
    let jobs: Vec<(usize, u64)> = (0..candidates.len())
        .flat_map(|c| grid.trial_seeds.iter().map(move |s| (c, *s)))
        .collect();
    let trials: Vec<ResultRow> = jobs
        .par_iter()
        .map(|&(c, seed)| execute_row(env, x0, &candidates[c], seed, run, false).map(|r| r.0))
        .collect::<Result<_>>()?;
    let per = grid.trial_seeds.len();
    let scores: Vec<f64> = trials
        .chunks(per)
        .map(|rows| {
            let objs: Option<Vec<f64>> = rows
                .iter()
                .map(|r| r.obj_mean.filter(|v| v.is_finite()))
                .collect();
            objs.map_or(f64::INFINITY, |o| o.iter().sum::<f64>() / o.len() as f64)
        })
        .collect();
    let best = (0..scores.len())
        .min_by(|&a, &b| scores[a].total_cmp(&scores[b]))
        .expect("grid is non-empty");
    let rows = candidates
        .iter()
        .zip(&scores)
        .enumerate()
        .map(|(i, (c, s))| TuningRow {
            method: label.clone(),
            step: c.plan.step,
            smoothing: c.plan.smoothing,
            directions: c.plan.directions,
            batch: c.plan.batch,
            score: *s,
            selected: i == best,
        })
        .collect();
    Ok((candidates.swap_remove(best), rows))
}

/// `(1/k)Σ f(x, ξ_j)` and the sample sd over `draws` fresh draws.
pub fn evaluate(env: &dyn Environment, x: &[f64], draws: usize, stream: &RngStream) -> (f64, f64) {
    let mut g = stream.generator();
    let values: Vec<f64> = (0..draws).map(|_| env.draw(x, &mut g)).collect();
    mean_sd(&values)
}

/// One budgeted run. Evaluation draws come from the seed's evaluation stream
/// and are not charged to the budget.
pub fn execute_row(
    env: &dyn Environment,
    x0: &Point,
    est: &ResolvedEstimator,
    seed: u64,
    run: &RunSpec,
    with_trace: bool,
) -> Result<(ResultRow, Vec<TraceRow>)> {
    let start = Instant::now();
    let d = env.dimension();
    let per = est.plan.estimator_config()?.samples_per_call(d);
    let mut row = ResultRow {
        method: est.label.clone(),
        seed,
        status: RowStatus::Ok,
        obj_mean: None,
        obj_sd: None,
        samples_used: 0,
        iterations: 0,
        final_grad_norm_sq: None,
        wall_time_s: 0.0,
    };
    let affordable = run.budget / per;
    if affordable == 0 {
        row.status = RowStatus::BudgetError;
        row.wall_time_s = start.elapsed().as_secs_f64();
        return Ok((row, Vec::new()));
    }
    let count = match est.cap {
        Some(t) => affordable.min(t as u64 + 1),
        None => affordable,
    };
    let mut plan = est.plan;
    plan.iterations =
        usize::try_from(count - 1).map_err(|_| HarnessError::config("run.budget: too large"))?;

    let stride = (run.trace_interval / per).max(1) as usize;
    let options = TraceOptions {
        stride,
        keep_estimates: false,
    };
    let oracle = SampleOracle::with_budget(env, run.budget);
    let root = RngStream::root(seed);
    let eval = root.derive(tags::EVALUATION, 0);
    let trace_draws = run.trace_draws.unwrap_or(run.evaluation_draws).max(1);

    let (xbar, trace) = match run_descent_with(x0, &plan, &oracle, &root, &options) {
        Ok((xbar, trace)) => (Some(xbar), trace),
        Err(ddzo_core::Error::Diverged { trace, .. }) => (None, *trace),
        Err(e) => return Err(e.into()),
    };
    row.samples_used = trace.samples_used();
    row.iterations = trace.iterations();
    match &xbar {
        Some(x) => {
            let (m, s) = evaluate(
                env,
                x.as_slice(),
                run.evaluation_draws,
                &eval.derive(tags::EVALUATION, 0),
            );
            row.obj_mean = Some(m);
            row.obj_sd = Some(s);
            row.final_grad_norm_sq = env
                .exact_gradient(x.as_slice())
                .map(|g| g.iter().map(|c| c * c).sum());
        }
        None => row.status = RowStatus::Diverged,
    }
    let trace_rows = if with_trace {
        trace_points(&trace, per)
            .into_iter()
            .enumerate()
            .map(|(k, (samples, x))| TraceRow {
                method: est.label.clone(),
                seed,
                cumulative_samples: samples,
                obj_estimate: evaluate(
                    env,
                    x.as_slice(),
                    trace_draws,
                    &eval.derive(tags::EVALUATION, 1 + k as u64),
                )
                .0,
            })
            .collect()
    } else {
        Vec::new()
    };
    row.wall_time_s = start.elapsed().as_secs_f64();
    Ok((row, trace_rows))
}

/// Stored iterates paired with the draws spent before reaching them; the
/// terminal iterate closes the trace.
fn trace_points(trace: &RunTrace, per: u64) -> Vec<(u64, &Point)> {
    let mut pts: Vec<(u64, &Point)> = trace
        .iterates
        .iter()
        .enumerate()
        .map(|(k, x)| ((k * trace.stride) as u64 * per, x))
        .collect();
    if let Some(t) = &trace.terminal {
        if pts.last().map(|p| p.0) != Some(trace.samples_used()) {
            pts.push((trace.samples_used(), t));
        }
    }
    pts
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub const RESULTS_HEADER: [&str; 8] = [
    "method",
    "seed",
    "status",
    "obj_mean",
    "obj_sd",
    "samples_used",
    "iterations",
    "final_grad_norm_sq",
];
pub const TRACE_HEADER: [&str; 4] = ["method", "seed", "cumulative_samples", "obj_estimate"];
pub const SUMMARY_HEADER: [&str; 5] = ["method", "runs", "ok_runs", "obj_mean", "obj_sd"];
pub const TUNING_HEADER: [&str; 7] = [
    "method",
    "step",
    "smoothing",
    "directions",
    "batch",
    "score",
    "selected",
];
pub const TIMING_HEADER: [&str; 3] = ["method", "seed", "wall_time_s"];

/// Writes `results.csv`, `trace.csv`, `summary.csv`, `timing.csv` and, when a
/// grid search ran, `tuning.csv`. Only `timing.csv` varies between reruns.
pub fn write_outputs(dir: &Path, out: &RunOutput) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("results.csv"))?;
    w.write_record(RESULTS_HEADER)?;
    for r in &out.rows {
        w.write_record([
            r.method.clone(),
            r.seed.to_string(),
            r.status.as_str().to_string(),
            opt(r.obj_mean),
            opt(r.obj_sd),
            r.samples_used.to_string(),
            r.iterations.to_string(),
            opt(r.final_grad_norm_sq),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("trace.csv"))?;
    w.write_record(TRACE_HEADER)?;
    for t in &out.trace {
        w.write_record([
            t.method.clone(),
            t.seed.to_string(),
            t.cumulative_samples.to_string(),
            num(t.obj_estimate),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
    w.write_record(SUMMARY_HEADER)?;
    for m in out.methods() {
        let runs = out.rows.iter().filter(|r| r.method == m).count();
        let (mean, sd, ok) = match out.method_summary(&m) {
            Some((a, b, k)) => (num(a), num(b), k),
            None => (String::new(), String::new(), 0),
        };
        w.write_record([m, runs.to_string(), ok.to_string(), mean, sd])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("timing.csv"))?;
    w.write_record(TIMING_HEADER)?;
    for r in &out.rows {
        w.write_record([
            r.method.clone(),
            r.seed.to_string(),
            format!("{:.6}", r.wall_time_s),
        ])?;
    }
    w.flush()?;

    if !out.tuning.is_empty() {
        let mut w = csv::Writer::from_path(dir.join("tuning.csv"))?;
        w.write_record(TUNING_HEADER)?;
        for t in &out.tuning {
            w.write_record([
                t.method.clone(),
                num(t.step),
                num(t.smoothing),
                t.directions.to_string(),
                t.batch.to_string(),
                num(t.score),
                t.selected.to_string(),
            ])?;
        }
        w.flush()?;
    }
    Ok(())
}

//! Experiment configuration (TOML).
//!
//! ```toml
//! [environment]
//! kind = "quadratic"          # quadratic | pricing | strategic
//! eigenvalues = [1.0, 0.5]    # quadratic: diagonal of A (or `dimension` for A = I)
//! sigma = 1.0
//!
//! [run]
//! budget = 5000               # oracle draws per run
//! seeds = [0, 1, 2]           # or seed_count = 20 for seeds 0..19
//! evaluation_draws = 1000
//! trace_interval = 100
//!
//! [[estimator]]
//! kind = "sphere"             # coordinate | sphere | gaussian | one_point
//! smoothing = 0.1
//! directions = 10
//! batch = 1
//! step = 0.05
//! ```
//!
//! The full grammar is documented in the repository README.

use std::path::{Path, PathBuf};

use ddzo_core::{EstimatorKind, Regime};
use serde::Deserialize;

use crate::error::{HarnessError, Result};

pub const DEFAULT_BUDGET: u64 = 5000;
pub const DEFAULT_EVALUATION_DRAWS: usize = 1000;
pub const DEFAULT_SEED_COUNT: u64 = 20;

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub environment: EnvironmentSpec,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(rename = "estimator", default)]
    pub estimators: Vec<EstimatorSpec>,
    #[serde(default)]
    pub grid_search: GridSearchSpec,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvironmentSpec {
    Quadratic(QuadraticSpec),
    Pricing(PricingSpec),
    Strategic(StrategicSpec),
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct QuadraticSpec {
    /// `A = I_d` when `eigenvalues` is absent.
    pub dimension: Option<usize>,
    /// Diagonal of `A`.
    pub eigenvalues: Option<Vec<f64>>,
    /// Linear term; zero when absent.
    pub b: Option<Vec<f64>>,
    #[serde(default = "one")]
    pub sigma: f64,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PricingSpec {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_products")]
    pub products: usize,
    #[serde(default = "default_buyers")]
    pub buyers: u64,
    /// CSV with header `theta,rho`; replaces the synthetic draw.
    pub prices_file: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StrategicSpec {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_agents")]
    pub agents: usize,
    #[serde(default = "default_features")]
    pub features: usize,
    #[serde(default = "default_separation")]
    pub separation: f64,
    /// CSV with header `f1,…,fD,label`; replaces the synthetic draw.
    pub population_file: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    #[serde(default = "default_budget")]
    pub budget: u64,
    pub seeds: Option<Vec<u64>>,
    pub seed_count: Option<u64>,
    #[serde(default = "default_evaluation_draws")]
    pub evaluation_draws: usize,
    /// Draws per point on the objective trace; defaults to `evaluation_draws`.
    pub trace_draws: Option<usize>,
    #[serde(default = "default_trace_interval")]
    pub trace_interval: u64,
    /// Starting point; overrides `x0_fill`.
    pub x0: Option<Vec<f64>>,
    /// Constant starting point `x0_fill · 1`.
    pub x0_fill: Option<f64>,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            budget: DEFAULT_BUDGET,
            seeds: None,
            seed_count: None,
            evaluation_draws: DEFAULT_EVALUATION_DRAWS,
            trace_draws: None,
            trace_interval: default_trace_interval(),
            x0: None,
            x0_fill: None,
        }
    }
}

impl RunSpec {
    pub fn seed_list(&self) -> Vec<u64> {
        match (&self.seeds, self.seed_count) {
            (Some(s), _) => s.clone(),
            (None, Some(n)) => (0..n).collect(),
            (None, None) => (0..DEFAULT_SEED_COUNT).collect(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EstimatorSpec {
    pub kind: String,
    /// Method name in the output; defaults to the kind's label (e.g. ZO-SPH).
    pub label: Option<String>,
    pub smoothing: Option<f64>,
    #[serde(default = "one_usize")]
    pub directions: usize,
    #[serde(default = "one_usize")]
    pub batch: usize,
    pub step: Option<f64>,
    /// Cap on `T`; the budget decides when absent.
    pub iterations: Option<usize>,
    /// Derive the settings from the planner instead.
    pub plan: Option<PlanSpec>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PlanSpec {
    pub epsilon: f64,
    #[serde(default = "default_regime")]
    pub regime: String,
    /// Defaults to the environment's known constants.
    pub sigma: Option<f64>,
    pub smoothness: Option<f64>,
    pub hessian_lipschitz: Option<f64>,
    #[serde(default = "one")]
    pub c_mu: f64,
    #[serde(default = "one")]
    pub c_m: f64,
    pub c_t: Option<f64>,
    #[serde(default = "yes")]
    pub enforce_epsilon_range: bool,
    /// Let the planned `T` run even if the budget is larger.
    #[serde(default = "yes")]
    pub cap_iterations: bool,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSearchSpec {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default)]
    pub steps: Vec<f64>,
    #[serde(default)]
    pub smoothing: Vec<f64>,
    /// `N` for sphere/gaussian (with `m = 1`), `m` for coordinate/one-point.
    #[serde(default)]
    pub counts: Vec<usize>,
    #[serde(default = "default_trial_seeds")]
    pub trial_seeds: Vec<u64>,
}

impl Default for GridSearchSpec {
    fn default() -> Self {
        GridSearchSpec {
            enabled: false,
            steps: Vec::new(),
            smoothing: Vec::new(),
            counts: Vec::new(),
            trial_seeds: default_trial_seeds(),
        }
    }
}

fn one() -> f64 {
    1.0
}
fn one_usize() -> usize {
    1
}
fn yes() -> bool {
    true
}
fn default_products() -> usize {
    ddzo_core::environments::DEFAULT_PRODUCTS
}
fn default_buyers() -> u64 {
    ddzo_core::environments::DEFAULT_BUYERS
}
fn default_agents() -> usize {
    1000
}
fn default_features() -> usize {
    ddzo_core::environments::DEFAULT_FEATURES
}
fn default_separation() -> f64 {
    ddzo_core::environments::DEFAULT_SEPARATION
}
fn default_budget() -> u64 {
    DEFAULT_BUDGET
}
fn default_evaluation_draws() -> usize {
    DEFAULT_EVALUATION_DRAWS
}
fn default_trace_interval() -> u64 {
    100
}
fn default_regime() -> String {
    "grad".into()
}
fn default_trial_seeds() -> Vec<u64> {
    vec![1000, 1001, 1002]
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| HarnessError::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates `path`; relative data paths are resolved against
    /// the file's directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)
            .map_err(|e| HarnessError::config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        match &mut cfg.environment {
            EnvironmentSpec::Pricing(p) => resolve(&mut p.prices_file, base),
            EnvironmentSpec::Strategic(s) => resolve(&mut s.population_file, base),
            EnvironmentSpec::Quadratic(_) => {}
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: &str| Err(HarnessError::config(format!("{field}: {msg}")));
        match &self.environment {
            EnvironmentSpec::Quadratic(q) => {
                if q.dimension.is_none() && q.eigenvalues.is_none() {
                    return bad(
                        "environment",
                        "quadratic needs `dimension` or `eigenvalues`",
                    );
                }
                if let (Some(d), Some(e)) = (q.dimension, &q.eigenvalues) {
                    if d != e.len() {
                        return bad("environment.dimension", "disagrees with eigenvalues length");
                    }
                }
                if !(q.sigma >= 0.0 && q.sigma.is_finite()) {
                    return bad("environment.sigma", "must be finite and >= 0");
                }
            }
            EnvironmentSpec::Pricing(p) => {
                if p.products == 0 || p.buyers == 0 {
                    return bad("environment", "products and buyers must be >= 1");
                }
            }
            EnvironmentSpec::Strategic(s) => {
                if s.agents == 0 || s.features == 0 {
                    return bad("environment", "agents and features must be >= 1");
                }
            }
        }
        if self.estimators.is_empty() {
            return bad(
                "estimator",
                "at least one [[estimator]] section is required",
            );
        }
        if self.run.seed_list().is_empty() {
            return bad("run.seeds", "at least one seed is required");
        }
        if self.run.budget == 0 {
            return bad("run.budget", "must be >= 1");
        }
        if self.run.evaluation_draws < 2 {
            return bad("run.evaluation_draws", "must be >= 2");
        }
        if self.run.trace_interval == 0 {
            return bad("run.trace_interval", "must be >= 1");
        }
        for (i, e) in self.estimators.iter().enumerate() {
            let field = |f: &str| format!("estimator[{i}].{f}");
            let kind: EstimatorKind = e.kind.parse().map_err(|_| {
                HarnessError::config(format!("{}: unknown kind '{}'", field("kind"), e.kind))
            })?;
            if e.directions == 0 || e.batch == 0 {
                return bad(&field("directions"), "directions and batch must be >= 1");
            }
            match &e.plan {
                Some(p) => {
                    p.regime.parse::<Regime>().map_err(|_| {
                        HarnessError::config(format!("{}: unknown regime", field("plan.regime")))
                    })?;
                    if kind == EstimatorKind::OnePoint {
                        return bad(&field("plan"), "the planner has no schedule for one_point");
                    }
                }
                None if !self.grid_search.enabled => {
                    match e.smoothing {
                        Some(v) if v > 0.0 && v.is_finite() => {}
                        _ => return bad(&field("smoothing"), "required and must be > 0"),
                    }
                    match e.step {
                        Some(v) if v > 0.0 && v.is_finite() => {}
                        _ => return bad(&field("step"), "required and must be > 0"),
                    }
                }
                None => {}
            }
        }
        let g = &self.grid_search;
        if g.enabled {
            if g.steps.is_empty() || g.smoothing.is_empty() || g.counts.is_empty() {
                return bad(
                    "grid_search",
                    "steps, smoothing and counts must be non-empty",
                );
            }
            if g.trial_seeds.is_empty() {
                return bad("grid_search.trial_seeds", "must be non-empty");
            }
            if g.steps
                .iter()
                .chain(&g.smoothing)
                .any(|v| !(*v > 0.0 && v.is_finite()))
            {
                return bad("grid_search", "steps and smoothing values must be > 0");
            }
            if g.counts.contains(&0) {
                return bad("grid_search.counts", "must be >= 1");
            }
        }
        Ok(())
    }
}

fn resolve(p: &mut Option<PathBuf>, base: &Path) {
    if let Some(path) = p {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
        [environment]
        kind = "quadratic"
        eigenvalues = [1.0, 0.5]

        [run]
        seeds = [1, 2]

        [[estimator]]
        kind = "sphere"
        smoothing = 0.1
        directions = 4
        step = 0.1
    "#;

    #[test]
    fn parses_with_defaults() {
        let c = ExperimentConfig::from_toml_str(BASIC).unwrap();
        assert_eq!(c.run.budget, 5000);
        assert_eq!(c.run.evaluation_draws, 1000);
        assert_eq!(c.run.seed_list(), vec![1, 2]);
        assert_eq!(c.estimators[0].batch, 1);
        assert!(!c.grid_search.enabled);
        match c.environment {
            EnvironmentSpec::Quadratic(q) => assert_eq!(q.sigma, 1.0),
            _ => panic!(),
        }
    }

    #[test]
    fn default_seeds() {
        let c = ExperimentConfig::from_toml_str(&BASIC.replace("seeds = [1, 2]", "")).unwrap();
        assert_eq!(c.run.seed_list().len(), 20);
        let c = ExperimentConfig::from_toml_str(&BASIC.replace("seeds = [1, 2]", "seed_count = 3"))
            .unwrap();
        assert_eq!(c.run.seed_list(), vec![0, 1, 2]);
    }

    #[test]
    fn errors_name_the_field() {
        let e = ExperimentConfig::from_toml_str(&BASIC.replace("smoothing = 0.1", "")).unwrap_err();
        assert!(e.to_string().contains("estimator[0].smoothing"), "{e}");
        let e = ExperimentConfig::from_toml_str(&BASIC.replace("\"sphere\"", "\"spiral\""))
            .unwrap_err();
        assert!(e.to_string().contains("estimator[0].kind"), "{e}");
        let e =
            ExperimentConfig::from_toml_str(&BASIC.replace("step = 0.1", "step = 0.1\nbogus = 3"))
                .unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");
        assert!(e.to_string().contains("line"), "{e}");
        assert_eq!(e.exit_code(), 2);
        let e = ExperimentConfig::from_toml_str(&BASIC.replace("seeds = [1, 2]", "seeds = []"))
            .unwrap_err();
        assert!(e.to_string().contains("run.seeds"));
    }

    #[test]
    fn plan_section_replaces_explicit_settings() {
        let text = r#"
            [environment]
            kind = "quadratic"
            dimension = 3
            [[estimator]]
            kind = "gaussian"
            plan = { epsilon = 0.3 }
        "#;
        let c = ExperimentConfig::from_toml_str(text).unwrap();
        assert_eq!(c.estimators[0].plan.as_ref().unwrap().regime, "grad");
        let bad = text.replace("gaussian", "one_point");
        assert!(ExperimentConfig::from_toml_str(&bad).is_err());
    }

    #[test]
    fn grid_search_needs_values() {
        let text =
            format!("{BASIC}\n[grid_search]\nenabled = true\nsteps = [0.1]\nsmoothing = [0.1]\n");
        assert!(ExperimentConfig::from_toml_str(&text).is_err());
        let text = format!("{text}counts = [1, 10]\n");
        assert!(ExperimentConfig::from_toml_str(&text).is_ok());
    }
}

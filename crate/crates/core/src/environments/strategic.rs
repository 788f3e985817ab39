use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::Environment;
use crate::point::{dot, norm};
use crate::rng::StreamRng;

/// Reward an agent receives for a positive classification.
pub const REWARD: f64 = 2.0;

/// Features and label of one agent.
#[derive(Clone, Debug, PartialEq)]
pub struct Agent {
    pub features: Vec<f64>,
    pub label: bool,
}

/// Logistic classifier facing agents that best-respond to it.
///
/// The decision is `x = (w, b)` with `w ∈ R^{d_feat}`. An agent with true
/// features `ξ` reports `argmax_ζ {2·1[wᵀζ + b ≥ 0] − ‖ζ − ξ‖²}` and the loss
/// is the cross-entropy of the classifier on the reported features.
#[derive(Clone, Debug)]
pub struct StrategicEnv {
    population: Vec<Agent>,
    features: usize,
}

impl StrategicEnv {
    pub fn new(population: Vec<Agent>) -> Result<Self> {
        let features = population
            .first()
            .ok_or_else(|| Error::arg("population must be non-empty"))?
            .features
            .len();
        if features == 0 {
            return Err(Error::arg("agents need at least one feature"));
        }
        if population.iter().any(|a| a.features.len() != features) {
            return Err(Error::arg("agents have inconsistent feature counts"));
        }
        if population
            .iter()
            .flat_map(|a| &a.features)
            .any(|v| !v.is_finite())
        {
            return Err(Error::arg("agent features must be finite"));
        }
        Ok(StrategicEnv {
            population,
            features,
        })
    }

    pub fn population(&self) -> &[Agent] {
        &self.population
    }

    pub fn feature_count(&self) -> usize {
        self.features
    }

    /// Cross-entropy of agent `a` against `x` after it best-responds.
    ///
    /// A zero weight vector leaves the boundary unreachable; the agent then
    /// keeps its features.
    pub fn agent_loss(&self, x: &[f64], a: &Agent) -> f64 {
        let reported = match best_response(x, &a.features) {
            Ok(r) => r,
            Err(_) => a.features.clone(),
        };
        logistic_loss(x, &reported, a.label)
    }

    /// Mean loss over the population.
    pub fn population_loss(&self, x: &[f64]) -> f64 {
        let total: f64 = self.population.iter().map(|a| self.agent_loss(x, a)).sum();
        total / self.population.len() as f64
    }
}

impl Environment for StrategicEnv {
    fn dimension(&self) -> usize {
        self.features + 1
    }

    fn draw(&self, x: &[f64], rng: &mut StreamRng) -> f64 {
        let a = &self.population[rng.random_range(0..self.population.len())];
        self.agent_loss(x, a)
    }

    fn exact_value(&self, x: &[f64]) -> Option<f64> {
        Some(self.population_loss(x))
    }
}

/// `log(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// `−[L·log σ(z) + (1 − L)·log(1 − σ(z))]` with `z = wᵀξ + b`.
pub fn logistic_loss(x: &[f64], features: &[f64], label: bool) -> f64 {
    let z = logit(x, features);
    if label {
        softplus(-z)
    } else {
        softplus(z)
    }
}

/// `wᵀξ + b` for `x = (w, b)`.
pub fn logit(x: &[f64], features: &[f64]) -> f64 {
    let (w, b) = x.split_at(features.len());
    dot(w, features) + b[0]
}

/// Reported features of an agent with true features `xi` facing `x = (w, b)`.
///
/// Agents already classified positive stay. Others move to the nearest
/// boundary point when the squared distance is below the reward; at
/// exactly the reward they stay.
pub fn best_response(x: &[f64], xi: &[f64]) -> Result<Vec<f64>> {
    if x.len() != xi.len() + 1 {
        return Err(Error::arg(format!(
            "decision has length {}, expected {}",
            x.len(),
            xi.len() + 1
        )));
    }
    let v = logit(x, xi);
    if v >= 0.0 {
        return Ok(xi.to_vec());
    }
    let w = &x[..xi.len()];
    let wn = norm(w);
    if wn == 0.0 {
        return Err(Error::DegenerateClassifier);
    }
    let delta = -v / wn;
    if delta * delta >= REWARD {
        return Ok(xi.to_vec());
    }
    let mut out: Vec<f64> = xi.iter().zip(w).map(|(p, q)| p + delta * q / wn).collect();
    // rounding can leave the projection a hair short of the boundary
    let wn2 = wn * wn;
    for _ in 0..64 {
        let r = logit(x, &out);
        if r >= 0.0 {
            break;
        }
        let step = (-r).max(f64::EPSILON * (1.0 + v.abs())) / wn2;
        out.iter_mut().zip(w).for_each(|(o, q)| *o += step * q);
    }
    Ok(out)
}

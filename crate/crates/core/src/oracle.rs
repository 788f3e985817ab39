//! The sampling-oracle abstraction.
//!
//! An [`Environment`] describes `f(x, ξ)` with `ξ ~ D(x)`: given a decision
//! and a generator it produces one scalar draw. Algorithms never touch an
//! environment directly; they go through a [`SampleOracle`], which assigns
//! each draw its own random stream and charges it to a [`BudgetCounter`].

use crate::budget::BudgetCounter;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::rng::{RngStream, StreamRng};

/// Regularity constants of `F(x) = E[f(x, ξ)]`, when known.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Regularity {
    /// Bound on `E[(F(x) - f(x, ξ))²]`, as a standard deviation.
    pub sigma: Option<f64>,
    /// Gradient Lipschitz constant `M`.
    pub smoothness: Option<f64>,
    /// Hessian Lipschitz constant `H`.
    pub hessian_lipschitz: Option<f64>,
}

pub trait Environment: Send + Sync {
    fn dimension(&self) -> usize;

    /// One draw of `f(x, ξ)` with `ξ ~ D(x)`.
    fn draw(&self, x: &[f64], rng: &mut StreamRng) -> f64;

    /// Exact `F(x)`, if the environment can compute it.
    fn exact_value(&self, _x: &[f64]) -> Option<f64> {
        None
    }

    /// Exact `∇F(x)`, if available.
    fn exact_gradient(&self, _x: &[f64]) -> Option<Vec<f64>> {
        None
    }

    /// `F* = inf F`, if known.
    fn optimal_value(&self) -> Option<f64> {
        None
    }

    fn regularity(&self) -> Regularity {
        Regularity::default()
    }
}

impl<E: Environment + ?Sized> Environment for &E {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn draw(&self, x: &[f64], rng: &mut StreamRng) -> f64 {
        (**self).draw(x, rng)
    }
    fn exact_value(&self, x: &[f64]) -> Option<f64> {
        (**self).exact_value(x)
    }
    fn exact_gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        (**self).exact_gradient(x)
    }
    fn optimal_value(&self) -> Option<f64> {
        (**self).optimal_value()
    }
    fn regularity(&self) -> Regularity {
        (**self).regularity()
    }
}

/// Budgeted access to an environment's draws.
pub struct SampleOracle<'e> {
    env: &'e dyn Environment,
    budget: BudgetCounter,
}

impl<'e> SampleOracle<'e> {
    pub fn new(env: &'e dyn Environment) -> Self {
        SampleOracle {
            env,
            budget: BudgetCounter::unlimited(),
        }
    }

    pub fn with_budget(env: &'e dyn Environment, limit: u64) -> Self {
        SampleOracle {
            env,
            budget: BudgetCounter::with_limit(limit),
        }
    }

    pub fn dimension(&self) -> usize {
        self.env.dimension()
    }

    pub fn environment(&self) -> &'e dyn Environment {
        self.env
    }

    pub fn budget(&self) -> &BudgetCounter {
        &self.budget
    }

    pub fn consumed(&self) -> u64 {
        self.budget.consumed()
    }

    /// One draw at `x` using the randomness of `stream`. Charges one unit.
    ///
    /// On refusal the returned error reports `wasted = 0`; estimators fill
    /// in how many of their own draws were lost.
    pub fn sample(&self, x: &Point, stream: &RngStream) -> Result<f64> {
        self.budget.charge().map_err(|r| Error::BudgetExhausted {
            limit: r.limit,
            wasted: 0,
        })?;
        let mut rng = stream.generator();
        Ok(self.env.draw(x, &mut rng))
    }
}

/// Environment defined by closures; handy for tests and ad-hoc objectives.
pub struct FnEnvironment<D, V = fn(&[f64]) -> f64, G = fn(&[f64]) -> Vec<f64>> {
    dimension: usize,
    draw: D,
    value: Option<V>,
    gradient: Option<G>,
    optimal_value: Option<f64>,
    regularity: Regularity,
}

impl<D> FnEnvironment<D>
where
    D: Fn(&[f64], &mut StreamRng) -> f64 + Send + Sync,
{
    pub fn new(dimension: usize, draw: D) -> Self {
        FnEnvironment {
            dimension,
            draw,
            value: None,
            gradient: None,
            optimal_value: None,
            regularity: Regularity::default(),
        }
    }
}

impl<D, V, G> FnEnvironment<D, V, G> {
    pub fn with_exact<V2, G2>(self, value: V2, gradient: G2) -> FnEnvironment<D, V2, G2> {
        FnEnvironment {
            dimension: self.dimension,
            draw: self.draw,
            value: Some(value),
            gradient: Some(gradient),
            optimal_value: self.optimal_value,
            regularity: self.regularity,
        }
    }

    pub fn with_optimal_value(mut self, v: f64) -> Self {
        self.optimal_value = Some(v);
        self
    }

    pub fn with_regularity(mut self, r: Regularity) -> Self {
        self.regularity = r;
        self
    }
}

impl<D, V, G> Environment for FnEnvironment<D, V, G>
where
    D: Fn(&[f64], &mut StreamRng) -> f64 + Send + Sync,
    V: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64]) -> Vec<f64> + Send + Sync,
{
    fn dimension(&self) -> usize {
        self.dimension
    }
    fn draw(&self, x: &[f64], rng: &mut StreamRng) -> f64 {
        (self.draw)(x, rng)
    }
    fn exact_value(&self, x: &[f64]) -> Option<f64> {
        self.value.as_ref().map(|v| v(x))
    }
    fn exact_gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.gradient.as_ref().map(|g| g(x))
    }
    fn optimal_value(&self) -> Option<f64> {
        self.optimal_value
    }
    fn regularity(&self) -> Regularity {
        self.regularity
    }
}

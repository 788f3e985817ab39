//! Builds environments from their config section.

use ddzo_core::environments::{
    make_synthetic_population, make_synthetic_prices, read_population, read_prices, PricingEnv,
    QuadraticEnv, StrategicEnv,
};
use ddzo_core::{Environment, Point};

use crate::config::{EnvironmentSpec, RunSpec};
use crate::error::{HarnessError, Result};

pub enum BuiltEnvironment {
    Quadratic(QuadraticEnv),
    Pricing(PricingEnv),
    Strategic(StrategicEnv),
}

impl BuiltEnvironment {
    pub fn build(spec: &EnvironmentSpec) -> Result<Self> {
        Ok(match spec {
            EnvironmentSpec::Quadratic(q) => {
                let eigs = match (&q.eigenvalues, q.dimension) {
                    (Some(e), _) => e.clone(),
                    (None, Some(d)) => vec![1.0; d],
                    (None, None) => {
                        return Err(HarnessError::config("environment: missing dimension"))
                    }
                };
                let b = q.b.clone().unwrap_or_else(|| vec![0.0; eigs.len()]);
                if b.len() != eigs.len() {
                    return Err(HarnessError::config(
                        "environment.b: length must equal the dimension",
                    ));
                }
                BuiltEnvironment::Quadratic(QuadraticEnv::diagonal(&eigs, b, q.sigma)?)
            }
            EnvironmentSpec::Pricing(p) => {
                let (theta, rho) = match &p.prices_file {
                    Some(path) => read_prices(path)?,
                    None => make_synthetic_prices(p.seed, p.products)?,
                };
                BuiltEnvironment::Pricing(PricingEnv::new(theta, rho, p.buyers)?)
            }
            EnvironmentSpec::Strategic(s) => {
                let population = match &s.population_file {
                    Some(path) => read_population(path)?,
                    None => make_synthetic_population(s.seed, s.agents, s.features, s.separation)?,
                };
                BuiltEnvironment::Strategic(StrategicEnv::new(population)?)
            }
        })
    }

    pub fn as_env(&self) -> &dyn Environment {
        match self {
            BuiltEnvironment::Quadratic(e) => e,
            BuiltEnvironment::Pricing(e) => e,
            BuiltEnvironment::Strategic(e) => e,
        }
    }

    /// `1` for the quadratic, the reference prices for pricing, `0` for the
    /// classifier.
    pub fn default_start(&self) -> Vec<f64> {
        match self {
            BuiltEnvironment::Quadratic(e) => vec![1.0; e.dimension()],
            BuiltEnvironment::Pricing(e) => e.theta().to_vec(),
            BuiltEnvironment::Strategic(e) => vec![0.0; e.dimension()],
        }
    }

    pub fn start_point(&self, run: &RunSpec) -> Result<Point> {
        let d = self.as_env().dimension();
        let coords = match (&run.x0, run.x0_fill) {
            (Some(x), _) => {
                if x.len() != d {
                    return Err(HarnessError::config(format!(
                        "run.x0: has length {}, environment dimension is {d}",
                        x.len()
                    )));
                }
                x.clone()
            }
            (None, Some(v)) => vec![v; d],
            (None, None) => self.default_start(),
        };
        Point::new(coords).map_err(|e| HarnessError::config(format!("run.x0: {e}")))
    }
}

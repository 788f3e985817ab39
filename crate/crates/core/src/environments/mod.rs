//! Concrete decision-dependent environments.

mod data;
mod pricing;
mod quadratic;
mod strategic;

pub use data::{
    make_synthetic_population, make_synthetic_prices, read_population, read_prices,
    write_population, write_prices, DEFAULT_FEATURES, DEFAULT_SEPARATION,
};
pub use pricing::{PricingEnv, DEFAULT_BUYERS, DEFAULT_PRODUCTS};
pub use quadratic::QuadraticEnv;
pub use strategic::{best_response, logistic_loss, logit, softplus, Agent, StrategicEnv, REWARD};

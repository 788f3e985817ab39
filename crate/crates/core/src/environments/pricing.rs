use rand::Rng;
use statrs::distribution::{Binomial, Discrete};

use crate::error::{Error, Result};
use crate::oracle::Environment;
use crate::rng::StreamRng;

/// Multiproduct pricing under multinomial-logit demand.
///
/// Each of `m` buyers picks product `i` with probability
/// `p_i(x) = exp(γ_i(θ_i − x_i)) / (a_0 + Σ_j exp(γ_j(θ_j − x_j)))` or opts out
/// with probability `p_0 = a_0 / (…)`. The sampled loss is
/// `f(x, ξ) = −Σ x_i ξ_i + Σ c_i(ξ_i)`, where `ξ_i` counts buyers of product `i`.
#[derive(Clone, Debug)]
pub struct PricingEnv {
    theta: Vec<f64>,
    rho: Vec<f64>,
    buyers: u64,
    gamma: Vec<f64>,
    a0: f64,
    lower: f64,
    upper: f64,
    w: Vec<f64>,
}

pub const DEFAULT_PRODUCTS: usize = 30;
pub const DEFAULT_BUYERS: u64 = 120;

impl PricingEnv {
    /// `theta`: reference prices (> 0). `rho`: cost rates.
    pub fn new(theta: Vec<f64>, rho: Vec<f64>, buyers: u64) -> Result<Self> {
        let n = theta.len();
        if n == 0 || rho.len() != n {
            return Err(Error::arg(
                "theta and rho must be non-empty and of equal length",
            ));
        }
        if buyers == 0 {
            return Err(Error::arg("buyer count must be >= 1"));
        }
        if theta.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(Error::arg("reference prices must be finite and > 0"));
        }
        if rho.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(Error::arg("cost rates must be finite and >= 0"));
        }
        let gamma = theta
            .iter()
            .map(|t| 2.0 * std::f64::consts::PI / (6f64.sqrt() * t))
            .collect();
        let w = theta.iter().zip(&rho).map(|(t, r)| r * t).collect();
        let per = buyers as f64 / n as f64;
        Ok(PricingEnv {
            a0: 0.1 * n as f64,
            lower: 0.5 * per,
            upper: 1.5 * per,
            theta,
            rho,
            buyers,
            gamma,
            w,
        })
    }

    pub fn products(&self) -> usize {
        self.theta.len()
    }

    pub fn buyers(&self) -> u64 {
        self.buyers
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn opt_out_weight(&self) -> f64 {
        self.a0
    }

    /// `(p_1..p_n, p_0)`, computed through a max-shifted log-sum-exp.
    pub fn choice_probabilities(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let logits: Vec<f64> = self
            .gamma
            .iter()
            .zip(&self.theta)
            .zip(x)
            .map(|((g, t), xi)| g * (t - xi))
            .collect();
        let l0 = self.a0.ln();
        let top = logits.iter().copied().fold(l0, f64::max);
        let total: f64 = logits.iter().map(|l| (l - top).exp()).sum::<f64>() + (l0 - top).exp();
        let lse = top + total.ln();
        let p = logits.iter().map(|l| (l - lse).exp()).collect();
        (p, (l0 - lse).exp())
    }

    /// Production cost `c_i(k)` for `k` units of product `i`.
    pub fn cost(&self, i: usize, k: f64) -> f64 {
        let (w, l, u) = (self.w[i], self.lower, self.upper);
        if k <= l {
            2.0 * w * k
        } else if k <= u {
            w * (k - l) + 2.0 * w * l
        } else {
            3.0 * w * (k - u) + w * (u - l) + 2.0 * w * l
        }
    }

    /// Loss for realised demand `counts`.
    pub fn loss(&self, x: &[f64], counts: &[u64]) -> f64 {
        counts
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let revenue = if k > 0 { x[i] * k as f64 } else { 0.0 };
                self.cost(i, k as f64) - revenue
            })
            .sum()
    }

    /// Simulates the buyers' choices; `counts[i]` buyers took product `i`.
    pub fn sample_demand(&self, x: &[f64], rng: &mut StreamRng) -> Vec<u64> {
        let (p, _) = self.choice_probabilities(x);
        let mut cumulative = Vec::with_capacity(p.len());
        let mut acc = 0.0;
        for pi in &p {
            acc += pi;
            cumulative.push(acc);
        }
        let mut counts = vec![0u64; p.len()];
        for _ in 0..self.buyers {
            let u: f64 = rng.random();
            let i = cumulative.partition_point(|c| *c <= u);
            if i < counts.len() {
                counts[i] += 1;
            }
        }
        counts
    }

    /// Exact `E[f(x, ξ)]`. Each `ξ_i` is marginally `Binomial(m, p_i(x))`.
    pub fn expected_objective(&self, x: &[f64]) -> f64 {
        self.expected_objective_with_cost(x, |i, k| self.cost(i, k as f64))
    }

    /// As [`expected_objective`](Self::expected_objective) with a caller-supplied cost.
    pub fn expected_objective_with_cost(&self, x: &[f64], cost: impl Fn(usize, u64) -> f64) -> f64 {
        let (p, _) = self.choice_probabilities(x);
        let m = self.buyers;
        let mut total = 0.0;
        for (i, &pi) in p.iter().enumerate() {
            if pi > 0.0 {
                total -= m as f64 * x[i] * pi;
            }
            let dist = Binomial::new(pi.clamp(0.0, 1.0), m).expect("probability in [0, 1]");
            total += (0..=m).map(|k| dist.pmf(k) * cost(i, k)).sum::<f64>();
        }
        total
    }
}

impl Environment for PricingEnv {
    fn dimension(&self) -> usize {
        self.theta.len()
    }

    fn draw(&self, x: &[f64], rng: &mut StreamRng) -> f64 {
        let counts = self.sample_demand(x, rng);
        self.loss(x, &counts)
    }

    fn exact_value(&self, x: &[f64]) -> Option<f64> {
        Some(self.expected_objective(x))
    }
}

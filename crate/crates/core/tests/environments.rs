use ddzo_core::environments::{best_response, make_synthetic_prices, PricingEnv, REWARD};
use ddzo_core::rng::tags;
use ddzo_core::stats::MomentAccumulator;
use ddzo_core::{Environment, RngStream};
use rand::Rng;
use rayon::prelude::*;

#[test]
fn pricing_monte_carlo_matches_exact_expectation() {
    let (theta, rho) = make_synthetic_prices(3, 10).unwrap();
    let env = PricingEnv::new(theta.clone(), rho, 40).unwrap();
    let mut g = RngStream::root(5).generator();
    for case in 0..5u64 {
        let x: Vec<f64> = theta.iter().map(|t| t * g.random_range(0.5..1.5)).collect();
        let accs: Vec<MomentAccumulator> = (0..50u64)
            .into_par_iter()
            .map(|c| {
                let mut rng = RngStream::root(case).derive(tags::REPLICATE, c).generator();
                let mut acc = MomentAccumulator::new(1);
                for _ in 0..2_000 {
                    acc.push(&[env.draw(&x, &mut rng)]);
                }
                acc
            })
            .collect();
        let mut acc = MomentAccumulator::new(1);
        accs.iter().for_each(|a| acc.merge(a));
        let exact = env.expected_objective(&x);
        let (mean, se) = (acc.mean()[0], acc.stderr()[0]);
        assert!(
            (mean - exact).abs() <= 5.0 * se,
            "case {case}: {mean} ± {se} vs {exact}"
        );
    }
}

/// Best value of `2·1[wᵀζ+b ≥ 0] − ‖ζ − ξ‖²` over a grid around `ξ` on the
/// first two coordinates.
fn grid_payoff(x: &[f64], xi: &[f64], h: f64, half: i64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in -half..=half {
        for j in -half..=half {
            let mut z = xi.to_vec();
            z[0] += i as f64 * h;
            z[1] += j as f64 * h;
            let v: f64 = x[..xi.len()]
                .iter()
                .zip(&z)
                .map(|(a, b)| a * b)
                .sum::<f64>()
                + x[xi.len()];
            let cost = (i * i + j * j) as f64 * h * h;
            let payoff = if v >= 0.0 { REWARD } else { 0.0 } - cost;
            best = best.max(payoff);
        }
    }
    best
}

#[test]
fn best_response_beats_grid_search() {
    let mut g = RngStream::root(11).generator();
    let h = 2e-3;
    for _ in 0..10 {
        let mut x = vec![0.0; 5];
        x[0] = g.random_range(-1.0..1.0);
        x[1] = g.random_range(-1.0..1.0);
        x[4] = g.random_range(-1.5..1.5);
        let xi: Vec<f64> = (0..4)
            .map(|k| {
                if k < 2 {
                    g.random_range(-1.0..1.0)
                } else {
                    0.3
                }
            })
            .collect();
        let r = best_response(&x, &xi).unwrap();
        let v: f64 = x[..4].iter().zip(&r).map(|(a, b)| a * b).sum::<f64>() + x[4];
        let payoff = if v >= 0.0 { REWARD } else { 0.0 }
            - r.iter()
                .zip(&xi)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>();
        let grid = grid_payoff(&x, &xi, h, 1500);
        // the grid cannot beat the closed form, and gets within O(h) of it
        assert!(payoff >= grid - 1e-12, "{payoff} < {grid}");
        assert!(payoff - grid <= 2.0 * 2f64.sqrt() * h * REWARD.sqrt() + 2.0 * h * h + 1e-12);
    }
}

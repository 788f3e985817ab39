#![allow(dead_code)]

use ddzo_core::environments::QuadraticEnv;
use ddzo_core::rng::tags;
use ddzo_core::stats::MomentAccumulator;
use ddzo_core::{estimate, EstimatorConfig, Point, RngStream, SampleOracle};
use rayon::prelude::*;

pub const EIGS: [f64; 5] = [1.0, 0.8, 0.6, 0.4, 0.2];

/// `A = diag(1, .8, .6, .4, .2)`, `b = 0`: `M = 1`, `H = 0`.
pub fn verification_quadratic(sigma: f64) -> QuadraticEnv {
    QuadraticEnv::diagonal(&EIGS, vec![0.0; 5], sigma).unwrap()
}

pub fn eval_point() -> Point {
    Point::filled(5, 1.0).unwrap()
}

pub fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum()
}

/// Mean and standard error of `‖g − target‖²` over `reps` independent calls.
pub fn empirical_mse(
    env: &QuadraticEnv,
    x: &Point,
    cfg: &EstimatorConfig,
    target: &[f64],
    reps: usize,
    seed: u64,
) -> (f64, f64) {
    let errs: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let oracle = SampleOracle::new(env);
            let rng = RngStream::root(seed).derive(tags::REPLICATE, r as u64);
            let g = estimate(x, cfg, &oracle, &rng).unwrap().g;
            g.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum()
        })
        .collect();
    let mut acc = MomentAccumulator::new(1);
    errs.iter().for_each(|e| acc.push(&[*e]));
    (acc.mean()[0], acc.stderr()[0])
}

/// Per-coordinate mean and standard error of `g` over `reps` calls.
pub fn estimate_mean(
    env: &dyn ddzo_core::Environment,
    x: &Point,
    cfg: &EstimatorConfig,
    reps: usize,
    seed: u64,
) -> (Vec<f64>, Vec<f64>) {
    let d = x.dimension();
    let chunks = 64;
    let per = reps.div_ceil(chunks);
    let accs: Vec<MomentAccumulator> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let oracle = SampleOracle::new(env);
            let mut acc = MomentAccumulator::new(d);
            for r in c * per..((c + 1) * per).min(reps) {
                let rng = RngStream::root(seed).derive(tags::REPLICATE, r as u64);
                acc.push(&estimate(x, cfg, &oracle, &rng).unwrap().g);
            }
            acc
        })
        .collect();
    let mut total = MomentAccumulator::new(d);
    accs.iter().for_each(|a| total.merge(a));
    (total.mean().to_vec(), total.stderr())
}

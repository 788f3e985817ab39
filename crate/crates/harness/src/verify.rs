//! Statistical verification suites and the `verify_report.txt` writer.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use ddzo_core::directions::draw_gaussian;
use ddzo_core::environments::QuadraticEnv;
use ddzo_core::optimizer::descent_lemma_terms;
use ddzo_core::rng::tags;
use ddzo_core::smoothing::{analytic_moment, monte_carlo_moment, MomentKind};
use ddzo_core::stats::MomentAccumulator;
use ddzo_core::{
    estimate, run_descent, Environment, EstimatorConfig, EstimatorKind, ParameterPlan, Point,
    Regime, RngStream, SampleOracle,
};
use rayon::prelude::*;

use crate::bounds::{mse_bound, BoundInputs};
use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Moments,
    Unbiasedness,
    LemmaBounds,
    NDominance,
    DescentLemma,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Moments,
        Suite::Unbiasedness,
        Suite::LemmaBounds,
        Suite::NDominance,
        Suite::DescentLemma,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Moments => "moments",
            Suite::Unbiasedness => "unbiasedness",
            Suite::LemmaBounds => "lemma_bounds",
            Suite::NDominance => "n_dominance",
            Suite::DescentLemma => "descent_lemma",
        }
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.as_str() == s.replace('-', "_"))
            .ok_or_else(|| HarnessError::config(format!("unknown suite '{s}'")))
    }
}

/// One line of the report: `empirical ≤ bound` is the pass condition.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub point: String,
    pub empirical: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn le(
        suite: Suite,
        name: impl Into<String>,
        point: impl Into<String>,
        empirical: f64,
        bound: f64,
    ) -> Self {
        Check {
            suite,
            name: name.into(),
            point: point.into(),
            empirical,
            bound,
            passed: empirical <= bound,
        }
    }

    pub fn margin(&self) -> f64 {
        self.bound - self.empirical
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} | {} | {} | empirical={:.6e} bound={:.6e} margin={:.6e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite.as_str(),
            self.name,
            self.point,
            self.empirical,
            self.bound,
            self.margin()
        )
    }
}

/// Allowance in Monte-Carlo standard errors.
pub const Z: f64 = 5.0;
pub const MOMENT_DRAWS: usize = 100_000;
pub const UNBIASED_DRAWS: usize = 100_000;
pub const MSE_REPLICATES: usize = 2000;
pub const MU_GRID: [f64; 3] = [0.05, 0.1, 0.2];
pub const N_GRID: [usize; 2] = [10, 100];
pub const M_GRID: [usize; 2] = [1, 10];

/// `½xᵀAx` with eigenvalues 1, .8, .6, .4, .2 (`M = 1`, `H = 0`).
pub fn verification_quadratic(sigma: f64) -> QuadraticEnv {
    QuadraticEnv::diagonal(&[1.0, 0.8, 0.6, 0.4, 0.2], vec![0.0; 5], sigma)
        .expect("valid quadratic")
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<Check>> {
    let root = RngStream::root(seed).derive(tags::REPLICATE, suite as u64);
    match suite {
        Suite::Moments => moments(&root),
        Suite::Unbiasedness => unbiasedness(&root),
        Suite::LemmaBounds => lemma_bounds(&root),
        Suite::NDominance => n_dominance(&root),
        Suite::DescentLemma => descent_lemma(&root),
    }
}

pub fn run_suites(suites: &[Suite], seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for s in suites {
        out.extend(run_suite(*s, seed)?);
    }
    Ok(out)
}

pub fn write_report(path: &Path, checks: &[Check]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut text = format!("# {} checks, {} failed\n", checks.len(), failed);
    for c in checks {
        text.push_str(&c.to_string());
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Largest `|empirical − exact| / se` over the entries.
fn max_z(mean: &[f64], se: &[f64], exact: &[f64]) -> f64 {
    mean.iter()
        .zip(se)
        .zip(exact)
        .map(|((m, s), e)| {
            let diff = (m - e).abs();
            if *s > 0.0 {
                diff / s
            } else if diff <= 1e-12 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max)
}

fn moments(root: &RngStream) -> Result<Vec<Check>> {
    let cases = [
        (
            MomentKind::SphereKthSsT,
            0u32,
            "sphere second moment E[ssᵀ]",
        ),
        (
            MomentKind::SphereQuadForm,
            0,
            "sphere fourth moment E[(aᵀs)²ssᵀ]",
        ),
        (MomentKind::GaussKthUuT, 0, "gaussian second moment E[uuᵀ]"),
        (
            MomentKind::GaussKthUuT,
            2,
            "gaussian weighted moment E[‖u‖²uuᵀ]",
        ),
        (
            MomentKind::GaussKthUuT,
            4,
            "gaussian weighted moment E[‖u‖⁴uuᵀ]",
        ),
        (
            MomentKind::GaussQuadForm,
            0,
            "gaussian fourth moment E[(aᵀu)²uuᵀ]",
        ),
    ];
    let jobs: Vec<(usize, usize)> = [2usize, 5, 10]
        .iter()
        .flat_map(|&d| (0..cases.len() + 1).map(move |c| (d, c)))
        .collect();
    jobs.par_iter()
        .map(|&(d, c)| {
            let stream = root.derive_path(tags::REPLICATE, &[d as u64, c as u64]);
            let point = format!("d={d} draws={MOMENT_DRAWS}");
            if c == cases.len() {
                // E‖u‖² = d
                let mut g = stream.generator();
                let mut acc = MomentAccumulator::new(1);
                for _ in 0..MOMENT_DRAWS {
                    let u = draw_gaussian(&mut g, d)?;
                    acc.push(&[u.coords.iter().map(|v| v * v).sum::<f64>()]);
                }
                let z = max_z(acc.mean(), &acc.stderr(), &[d as f64]);
                return Ok(Check::le(
                    Suite::Moments,
                    "gaussian squared norm E‖u‖² (max |z|)",
                    point,
                    z,
                    Z,
                ));
            }
            let (kind, k, name) = cases[c];
            let a: Vec<f64> = (0..d).map(|i| (i as f64 + 1.0) / d as f64).collect();
            let a = matches!(kind, MomentKind::SphereQuadForm | MomentKind::GaussQuadForm)
                .then_some(a.as_slice());
            let exact = analytic_moment(kind, d, k, a)?;
            let (mean, se) = monte_carlo_moment(kind, d, k, a, MOMENT_DRAWS, &stream)?;
            let z = max_z(mean.as_slice(), se.as_slice(), exact.as_slice());
            Ok(Check::le(
                Suite::Moments,
                format!("{name} (max |z| over entries)"),
                point,
                z,
                Z,
            ))
        })
        .collect()
}

/// Mean of `reps` single estimates, split over parallel chunks.
fn estimate_mean(
    env: &dyn Environment,
    x: &Point,
    cfg: &EstimatorConfig,
    reps: usize,
    root: &RngStream,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let chunks = 64;
    let accs: Vec<MomentAccumulator> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let oracle = SampleOracle::new(env);
            let mut acc = MomentAccumulator::new(x.dimension());
            for r in (c..reps).step_by(chunks) {
                let est = estimate(x, cfg, &oracle, &root.derive(tags::REPLICATE, r as u64))?;
                acc.push(&est.g);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut acc = MomentAccumulator::new(x.dimension());
    accs.iter().for_each(|a| acc.merge(a));
    Ok((acc.mean().to_vec(), acc.stderr()))
}

/// `E‖g − target‖²` over `reps` independent estimates, with its standard error.
pub fn empirical_mse(
    env: &dyn Environment,
    x: &Point,
    cfg: &EstimatorConfig,
    target: &[f64],
    reps: usize,
    root: &RngStream,
) -> Result<(f64, f64)> {
    let errs: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let oracle = SampleOracle::new(env);
            let est = estimate(x, cfg, &oracle, &root.derive(tags::REPLICATE, r as u64))?;
            Ok(est
                .g
                .iter()
                .zip(target)
                .map(|(a, b)| (a - b) * (a - b))
                .sum())
        })
        .collect::<Result<_>>()?;
    let mut acc = MomentAccumulator::new(1);
    errs.iter().for_each(|e| acc.push(&[*e]));
    Ok((acc.mean()[0], acc.stderr()[0]))
}

fn eval_point() -> Point {
    Point::filled(5, 1.0).expect("finite")
}

fn unbiasedness(root: &RngStream) -> Result<Vec<Check>> {
    let env = verification_quadratic(0.0);
    let x = eval_point();
    let grad = env.gradient(x.as_slice());
    let mut out = Vec::new();
    for (i, kind) in [EstimatorKind::Sphere, EstimatorKind::Gaussian]
        .into_iter()
        .enumerate()
    {
        let cfg = EstimatorConfig::new(kind, 0.1, 1, 1)?;
        let (mean, se) = estimate_mean(
            &env,
            &x,
            &cfg,
            UNBIASED_DRAWS,
            &root.derive(tags::REPLICATE, i as u64),
        )?;
        let z = max_z(&mean, &se, &grad);
        out.push(Check::le(
            Suite::Unbiasedness,
            format!("{kind} mean estimate equals ∇F (max |z|)"),
            format!("d=5 mu=0.1 sigma=0 draws={UNBIASED_DRAWS}"),
            z,
            Z,
        ));
    }
    Ok(out)
}

/// `(kind, μ, N, m)` over the grid; the coordinate estimator takes `N = d`.
fn mse_grid() -> Vec<(EstimatorKind, f64, usize, usize)> {
    let mut grid = Vec::new();
    for &mu in &MU_GRID {
        for &m in &M_GRID {
            grid.push((EstimatorKind::Coordinate, mu, 5, m));
            for &n in &N_GRID {
                grid.push((EstimatorKind::Sphere, mu, n, m));
                grid.push((EstimatorKind::Gaussian, mu, n, m));
            }
        }
    }
    grid
}

fn lemma_bounds(root: &RngStream) -> Result<Vec<Check>> {
    let env = verification_quadratic(1.0);
    let x = eval_point();
    let grad = env.gradient(x.as_slice());
    let gsq: f64 = grad.iter().map(|g| g * g).sum();
    let d = 5usize;
    let mut out = Vec::new();
    let mut sphere_mse = Vec::new();
    for (i, (kind, mu, n, m)) in mse_grid().into_iter().enumerate() {
        let cfg = EstimatorConfig::new(kind, mu, n, m)?;
        let (mse, se) = empirical_mse(
            &env,
            &x,
            &cfg,
            &grad,
            MSE_REPLICATES,
            &root.derive(tags::REPLICATE, i as u64),
        )?;
        let point = format!("mu={mu} N={n} m={m}");
        for (regime, constant, label) in [
            (
                Regime::GradLipschitz,
                env.smoothness(),
                "gradient-Lipschitz MSE bound",
            ),
            (
                Regime::HessianLipschitz,
                0.0,
                "Hessian-Lipschitz MSE bound (H=0)",
            ),
        ] {
            let inputs = BoundInputs {
                dimension: d,
                sigma: env.sigma(),
                constant,
                smoothing: mu,
                directions: n,
                batch: m,
                grad_norm_sq: gsq,
            };
            let bound = mse_bound(kind, regime, &inputs).expect("two-point estimator");
            out.push(Check::le(
                Suite::LemmaBounds,
                format!("{kind} {label}"),
                point.clone(),
                mse,
                bound + Z * se,
            ));
        }
        if kind == EstimatorKind::Sphere {
            sphere_mse.push((mu, n, m, mse));
        }
    }
    // gaussian at μ/√d against sphere at μ
    for (j, (mu, n, m, sph)) in sphere_mse.into_iter().enumerate() {
        let mu_ga = mu / (d as f64).sqrt();
        let cfg = EstimatorConfig::new(EstimatorKind::Gaussian, mu_ga, n, m)?;
        let (ga, _) = empirical_mse(
            &env,
            &x,
            &cfg,
            &grad,
            MSE_REPLICATES,
            &root.derive(tags::ITERATION, j as u64),
        )?;
        let ratio = (sph / ga).max(ga / sph);
        out.push(Check::le(
            Suite::LemmaBounds,
            "sphere vs gaussian MSE ratio with gaussian radius mu/sqrt(d)",
            format!("mu_sphere={mu} N={n} m={m}"),
            ratio,
            4.0,
        ));
    }
    Ok(out)
}

fn n_dominance(root: &RngStream) -> Result<Vec<Check>> {
    let env = verification_quadratic(1.0);
    let x = eval_point();
    let grad = env.gradient(x.as_slice());
    let mut out = Vec::new();
    for (i, kind) in [EstimatorKind::Sphere, EstimatorKind::Gaussian]
        .into_iter()
        .enumerate()
    {
        let wide = EstimatorConfig::new(kind, 0.1, 100, 1)?;
        let deep = EstimatorConfig::new(kind, 0.1, 1, 100)?;
        let (a, sa) = empirical_mse(
            &env,
            &x,
            &wide,
            &grad,
            MSE_REPLICATES,
            &root.derive_path(tags::REPLICATE, &[i as u64, 0]),
        )?;
        let (b, sb) = empirical_mse(
            &env,
            &x,
            &deep,
            &grad,
            MSE_REPLICATES,
            &root.derive_path(tags::REPLICATE, &[i as u64, 1]),
        )?;
        out.push(Check::le(
            Suite::NDominance,
            format!("{kind} MSE(N=100,m=1) at most MSE(N=1,m=100)"),
            format!("mu=0.1 sigma=1 reps={MSE_REPLICATES}"),
            a,
            b + Z * (sa * sa + sb * sb).sqrt(),
        ));
    }
    Ok(out)
}

fn descent_lemma(root: &RngStream) -> Result<Vec<Check>> {
    let env = verification_quadratic(1.0);
    let x0 = Point::filled(5, 3.0)?;
    let fstar = env.optimal_value().expect("positive definite");
    let mut out = Vec::new();
    for kind in [
        EstimatorKind::Coordinate,
        EstimatorKind::Sphere,
        EstimatorKind::Gaussian,
    ] {
        let plan = ParameterPlan::new(kind, Regime::GradLipschitz, 0.1, 10, 2, 0.25, 150)?;
        let checks: Vec<Check> = (0..10u64)
            .into_par_iter()
            .map(|s| {
                let oracle = SampleOracle::new(&env);
                let (_, trace) =
                    run_descent(&x0, &plan, &oracle, &root.derive(tags::REPLICATE, s))?;
                let t = descent_lemma_terms(&trace, fstar).expect("analytic environment");
                Ok(Check::le(
                    Suite::DescentLemma,
                    format!("{kind} average squared gradient vs descent bound"),
                    format!("run={s} eta=0.25 T=150"),
                    t.lhs,
                    t.rhs * (1.0 + 1e-9),
                ))
            })
            .collect::<Result<_>>()?;
        out.extend(checks);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn report_lists_every_check() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("verify_report.txt");
        let checks = vec![
            Check::le(Suite::Moments, "a", "d=2", 1.0, 5.0),
            Check::le(Suite::Moments, "b", "d=5", 6.0, 5.0),
        ];
        write_report(&path, &checks).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# 2 checks, 1 failed"));
        assert!(text.contains("PASS moments | a | d=2"));
        assert!(text.contains("FAIL moments | b | d=5"));
        assert!(text.contains("margin=-1.0"));
    }

    #[test]
    fn descent_suite_passes() {
        let checks = run_suite(Suite::DescentLemma, 0).unwrap();
        assert_eq!(checks.len(), 30);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ddzo_core::{EstimatorKind, PlanRequest, PlannerConstants, Regime};
use ddzo_harness::plan::plan_report;
use ddzo_harness::{
    run_experiment, run_suites, write_outputs, write_report, ExperimentConfig, HarnessError, Suite,
};

#[derive(Parser)]
#[command(
    name = "ddzo",
    version,
    about = "Zero-order optimization experiments under decision-dependent distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Added to every configured seed (run) or used as the base seed (verify).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Run every estimator on every seed and write the CSV outputs.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run verification suites and write verify_report.txt.
    Verify {
        /// Suite to run (repeatable); all suites when absent.
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the planned schedule for a target accuracy.
    Plan {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value = "grad")]
        regime: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        dimension: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 1.0)]
        smoothness: f64,
        #[arg(long)]
        hessian_lipschitz: Option<f64>,
        /// `F(x_0) − F*`, used for the default iteration constant.
        #[arg(long)]
        initial_gap: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        c_mu: f64,
        #[arg(long, default_value_t = 1.0)]
        c_m: f64,
        #[arg(long)]
        c_t: Option<f64>,
        /// Accept ε outside the range covered by the guarantees.
        #[arg(long)]
        any_epsilon: bool,
    },
}

fn set_threads(n: usize) -> Result<(), HarnessError> {
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| HarnessError::config(format!("--threads: {e}")))?;
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Run { config, common } => {
            set_threads(common.threads)?;
            let cfg = ExperimentConfig::from_path(&config)?;
            let out = run_experiment(&cfg, common.seed)?;
            write_outputs(&common.out, &out)?;
            for r in out
                .rows
                .iter()
                .filter(|r| r.status != ddzo_harness::RowStatus::Ok)
            {
                eprintln!("{} seed {}: {}", r.method, r.seed, r.status.as_str());
            }
            println!(
                "{} rows written to {}",
                out.rows.len(),
                common.out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suites, common } => {
            set_threads(common.threads)?;
            let suites: Vec<Suite> = if suites.is_empty() {
                Suite::ALL.to_vec()
            } else {
                suites.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
            };
            let checks = run_suites(&suites, common.seed)?;
            write_report(&common.out.join("verify_report.txt"), &checks)?;
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed", checks.len());
            Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Plan {
            kind,
            regime,
            epsilon,
            dimension,
            sigma,
            smoothness,
            hessian_lipschitz,
            initial_gap,
            c_mu,
            c_m,
            c_t,
            any_epsilon,
        } => {
            let kind: EstimatorKind = kind.parse()?;
            let regime: Regime = regime.parse()?;
            let mut req = PlanRequest::new(kind, regime, epsilon, dimension, sigma, smoothness);
            if let Some(h) = hessian_lipschitz {
                req = req.with_hessian_lipschitz(h);
            }
            if let Some(g) = initial_gap {
                req = req.with_initial_gap(g);
            }
            let constants = PlannerConstants {
                c_mu,
                c_m,
                c_t,
                enforce_epsilon_range: !any_epsilon,
            };
            let (_, text) = plan_report(&req, &constants)?;
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

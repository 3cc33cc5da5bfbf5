use hyperspectra::oracle::MAX_COVARIANCE_N;
use hyperspectra::{
    adjacency, center_scale, entry_covariances, exact_covariances, exact_eesd_moments, sample_hypergraph_with_rng,
    stream_rng, ModelParams,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::params_json;
use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::report::{num, SCHEMA_VERSION};

/// Monte Carlo sample size used when the config asks for a single trial.
pub const DEFAULT_VERIFY_TRIALS: u64 = 100_000;
/// Monte Carlo estimates must fall within this many standard errors.
pub const SE_MULTIPLIER: f64 = 3.0;
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &'static str, expected: f64, actual: f64, tolerance: f64) -> Self {
        Self { name, expected, actual, tolerance, pass: (actual - expected).abs() <= tolerance }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub exact_moments: Vec<f64>,
    pub mc_trials: u64,
    pub report: Value,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn diff(&self) -> String {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| {
                format!(
                    "  {}: expected {:.17e}, got {:.17e} (|diff| {:.3e} > {:.3e})",
                    c.name,
                    c.expected,
                    c.actual,
                    (c.actual - c.expected).abs(),
                    c.tolerance
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// `(1/n) Tr H²` and `(1/n) Tr H⁴` of one Bernoulli draw, without an eigensolve.
fn trace_moments(params: &ModelParams, seed: u64, trial: u64, cfg: &Config) -> CliResult<(f64, f64)> {
    let mut rng = stream_rng(seed, trial);
    let h = sample_hypergraph_with_rng(params, &mut rng, cfg.sampler_budget())?;
    let hn = center_scale(&adjacency(&h)?, params)?;
    let n = hn.n() as f64;
    let h2 = hn.matmul(&hn);
    Ok((hn.frobenius_sq() / n, h2.frobenius_sq() / n))
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

pub fn verify(params: &ModelParams, cfg: &Config) -> CliResult<VerifyReport> {
    let exact = exact_eesd_moments(params, 4)?;
    let n = params.n() as f64;
    let mut checks = vec![
        Check::new("m1_exact_vs_zero", 0.0, exact[0], EXACT_TOL),
        Check::new("m2_exact_vs_identity", (n - 1.0) / n, exact[1], EXACT_TOL),
    ];
    if params.n() <= MAX_COVARIANCE_N {
        let oracle = exact_covariances(params)?;
        let closed = entry_covariances(params);
        checks.push(Check::new("cov_share_one", closed.share_one, oracle.share_one, EXACT_TOL));
        checks.push(Check::new("cov_disjoint", closed.disjoint, oracle.disjoint, EXACT_TOL));
    }

    let mc_trials = if cfg.trials > 1 { cfg.trials } else { DEFAULT_VERIFY_TRIALS };
    let threads = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let samples: Vec<(f64, f64)> = threads.install(|| {
        (0..mc_trials)
            .into_par_iter()
            .map(|t| trace_moments(params, cfg.seed, t, cfg))
            .collect::<CliResult<_>>()
    })?;
    let (m2s, m4s): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
    let (m2, m2_se) = mean_se(&m2s);
    let (m4, m4_se) = mean_se(&m4s);
    checks.push(Check::new("m2_exact_vs_montecarlo", exact[1], m2, SE_MULTIPLIER * m2_se));
    checks.push(Check::new("m4_exact_vs_montecarlo", exact[3], m4, SE_MULTIPLIER * m4_se));

    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "params": params_json(params),
        "seed": cfg.seed,
        "montecarlo_trials": mc_trials,
        "exact_moments": exact.iter().copied().map(num).collect::<Vec<_>>(),
        "montecarlo": {
            "m2": { "mean": num(m2), "se": num(m2_se) },
            "m4": { "mean": num(m4), "se": num(m4_se) },
        },
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "expected": num(c.expected),
            "actual": num(c.actual),
            "tolerance": num(c.tolerance),
            "pass": c.pass,
        })).collect::<Vec<_>>(),
        "passed": checks.iter().all(|c| c.pass),
    });
    Ok(VerifyReport { checks, exact_moments: exact, mc_trials, report })
}

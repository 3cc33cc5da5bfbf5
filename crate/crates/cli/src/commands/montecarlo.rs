use hyperspectra::{
    adjacency, average_esd, center_scale, covariance_profile, derive_stats, eigenvalues, esd, ks_distance,
    plugin_semicircle_variance, pool, sample_hypergraph_with_rng, sample_surrogate_with_rng, stream_rng,
    surrogate_coefficients, EmpiricalMeasure, ModelParams, SemicircleLaw,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{out_path, params_json, require_out_dir};
use crate::config::{Config, Emit, Engine};
use crate::error::{CliError, CliResult};
use crate::report::{eigenvalue_csv, num, nums, to_json, write_file, SCHEMA_VERSION};
use crate::svg::histogram_with_semicircle;

/// Largest `n` for which a dense `n × n` matrix is built.
pub const MAX_DENSE_N: u64 = 16_384;

#[derive(Debug, Clone)]
pub struct TrialResult {
    pub trial: u64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub m2: f64,
    pub m4: f64,
}

#[derive(Debug, Clone)]
pub struct MonteCarloRun {
    pub engine: Engine,
    pub trials: Vec<TrialResult>,
    pub s2_pred: f64,
    pub theta_sq: f64,
    /// Equal-weight mixture of the per-trial ESDs.
    pub pooled: EmpiricalMeasure,
    pub ks_distance: f64,
    pub report: Value,
}

/// `auto` picks Bernoulli sampling when the expected edge count fits the budget.
pub fn resolve_engine(params: &ModelParams, cfg: &Config) -> CliResult<Engine> {
    let fits = cfg.sampler_budget().check(params);
    match (cfg.engine, fits) {
        (Engine::GaussianSurrogate, _) => Ok(Engine::GaussianSurrogate),
        (Engine::Bernoulli, Err(e)) => Err(CliError::Budget(e.to_string())),
        (Engine::Bernoulli, Ok(())) | (Engine::Auto, Ok(())) => Ok(Engine::Bernoulli),
        (Engine::Auto, Err(_)) => Ok(Engine::GaussianSurrogate),
    }
}

fn mean_and_se(xs: &[f64]) -> (f64, Option<f64>) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, None);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, Some((var / m).sqrt()))
}

fn moments(eigs: &[f64]) -> (f64, f64) {
    let n = eigs.len() as f64;
    let m2 = eigs.iter().map(|x| x * x).sum::<f64>() / n;
    let m4 = eigs.iter().map(|x| (x * x) * (x * x)).sum::<f64>() / n;
    (m2, m4)
}

/// Runs `cfg.trials` independent draws. Trial `t` uses stream `t` of the generator
/// seeded by `cfg.seed`, so results do not depend on the worker count.
pub fn run_montecarlo(params: &ModelParams, cfg: &Config) -> CliResult<MonteCarloRun> {
    let stats = derive_stats(params)?;
    if params.n() > MAX_DENSE_N {
        return Err(CliError::Config(format!("n = {} exceeds the dense limit {MAX_DENSE_N}", params.n())));
    }
    let engine = resolve_engine(params, cfg)?;
    let profile = covariance_profile(params)?;
    let coeffs = surrogate_coefficients(&profile)?;
    let s2_pred = plugin_semicircle_variance(params)?;
    let n = params.n() as usize;
    let budget = cfg.sampler_budget();

    let run_trial = |trial: u64| -> CliResult<TrialResult> {
        let mut rng = stream_rng(cfg.seed, trial);
        let h = match engine {
            Engine::GaussianSurrogate => sample_surrogate_with_rng(n, &coeffs, &mut rng)?,
            _ => {
                let hg = sample_hypergraph_with_rng(params, &mut rng, budget)?;
                center_scale(&adjacency(&hg)?, params)?
            }
        };
        let eigenvalues = eigenvalues(&h)?;
        let (m2, m4) = moments(&eigenvalues);
        Ok(TrialResult { trial, eigenvalues, m2, m4 })
    };
    let pool_threads = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let trials: Vec<TrialResult> =
        pool_threads.install(|| (0..cfg.trials).into_par_iter().map(run_trial).collect::<CliResult<_>>())?;

    let measures = trials
        .iter()
        .map(|t| esd(&t.eigenvalues))
        .collect::<Result<Vec<_>, _>>()?;
    let pooled = pool(&measures)?;
    let law = SemicircleLaw::new(s2_pred)?;
    let ks = ks_distance(&pooled, &law);
    let histogram = average_esd(&measures, cfg.bins)?;
    let (edges, masses) = histogram.bins().expect("average_esd returns a histogram");

    let m2s: Vec<f64> = trials.iter().map(|t| t.m2).collect();
    let m4s: Vec<f64> = trials.iter().map(|t| t.m4).collect();
    let (m2, m2_se) = mean_and_se(&m2s);
    let (m4, m4_se) = mean_and_se(&m4s);

    let mut outputs = Vec::new();
    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "montecarlo",
        "params": params_json(params),
        "engine": engine.as_str(),
        "engine_requested": cfg.engine.as_str(),
        "log_expected_edges": num(params.log_expected_edges()),
        "budget": cfg.budget,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "bins": cfg.bins,
        "w_fin": nums(&stats.w_fin),
        "s2_pred": num(s2_pred),
        "theta_sq": num(profile.theta_sq),
        "ks_distance": num(ks),
        "m2": { "mean": num(m2), "se": m2_se.map_or(Value::Null, num), "expected": num((n as f64 - 1.0) / n as f64) },
        "m4": { "mean": num(m4), "se": m4_se.map_or(Value::Null, num) },
        "per_trial": trials.iter().map(|t| json!({
            "trial": t.trial,
            "m2": num(t.m2),
            "m4": num(t.m4),
            "lambda_min": num(t.eigenvalues[0]),
            "lambda_max": num(t.eigenvalues[t.eigenvalues.len() - 1]),
        })).collect::<Vec<_>>(),
        "esd_histogram": { "edges": nums(edges), "masses": nums(masses) },
    });

    if cfg.emits(Emit::Csv) {
        let dir = require_out_dir(cfg)?;
        for t in &trials {
            let name = format!("eigenvalues_trial_{}.csv", t.trial);
            write_file(&dir.join(&name), &eigenvalue_csv(&t.eigenvalues))?;
            outputs.push(name);
        }
    }
    if cfg.emits(Emit::Svg) {
        let dir = require_out_dir(cfg)?;
        write_file(&dir.join("esd.svg"), &histogram_with_semicircle(edges, masses, Some(&law)))?;
        outputs.push("esd.svg".to_string());
    }
    if cfg.emits(Emit::Json) && cfg.out_dir.is_some() {
        outputs.push("report.json".to_string());
    }
    report["outputs"] = json!(outputs);
    if cfg.emits(Emit::Json) {
        if let Some(path) = out_path(cfg, "report.json") {
            write_file(&path, &to_json(&report))?;
        }
    }
    Ok(MonteCarloRun { engine, trials, s2_pred, theta_sq: profile.theta_sq, pooled, ks_distance: ks, report })
}

/// Averaged-ESD histogram as CSV `left,right,mass`.
pub fn histogram_csv(report: &Value) -> String {
    let mut out = String::from("left,right,mass\n");
    let edges = report["esd_histogram"]["edges"].as_array().cloned().unwrap_or_default();
    let masses = report["esd_histogram"]["masses"].as_array().cloned().unwrap_or_default();
    for (i, m) in masses.iter().enumerate() {
        let f = |v: &Value| crate::report::sig17(v.as_f64().unwrap_or(f64::NAN));
        out.push_str(&format!("{},{},{}\n", f(&edges[i]), f(&edges[i + 1]), f(m)));
    }
    out
}

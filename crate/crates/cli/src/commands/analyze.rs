use hyperspectra::theory::DEFAULT_REGIME_DELTA;
use hyperspectra::{
    chatterjee_bound, classify_regime_k2, covariance_profile, derive_stats, nonsparsity_ratio, pastur_lhs_bernoulli,
    pastur_lhs_gaussian, ModelParams, TailDiagnostic,
};
use serde_json::{json, Value};

use super::params_json;
use crate::config::Config;
use crate::error::CliResult;
use crate::report::{num, nums, SCHEMA_VERSION};

fn tail_json(t: &TailDiagnostic) -> Value {
    json!({
        "threshold": num(t.threshold),
        "per_class": nums(&t.log_per_class.iter().map(|l| l.exp()).collect::<Vec<_>>()),
        "log_per_class": nums(&t.log_per_class),
        "total": num(t.total()),
        "log_total": num(t.log_total),
        "rhs_scale": num(t.log_rhs_scale.exp()),
        "log_rhs_scale": num(t.log_rhs_scale),
        "ratio": num(t.ratio()),
        "log_ratio": num(t.log_ratio),
    })
}

/// The full theory report for one parameter tuple.
pub fn analyze(params: &ModelParams, cfg: &Config) -> CliResult<Value> {
    let stats = derive_stats(params)?;
    let profile = covariance_profile(params)?;
    let regime = if params.k() == 2 {
        let c = classify_regime_k2(params, DEFAULT_REGIME_DELTA)?;
        json!({ "label": c.regime.as_str(), "w_fin": nums(&c.w_fin), "delta": num(c.delta) })
    } else {
        Value::Null
    };
    let bernoulli = pastur_lhs_bernoulli(params, cfg.eps)?;
    let gaussian = pastur_lhs_gaussian(params, cfg.eps)?;
    let bound = chatterjee_bound(params, cfg.z(), cfg.eps)?;
    let nonsparsity = nonsparsity_ratio(params)?;
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "analyze",
        "params": params_json(params),
        "derived": {
            "mu": stats.mu.map_or(Value::Null, num),
            "log_mu": num(stats.log_mu),
            "sigma_sq": stats.sigma_sq.map_or(Value::Null, num),
            "log_sigma_sq": num(stats.log_sigma_sq),
            "sigma_i_sq": nums(&stats.sigma_i_sq),
            "log_b": nums(&stats.log_b),
            "w_fin": nums(&stats.w_fin),
            "xi": num(stats.xi),
            "d": nums(&stats.d()),
            "log_d": nums(&stats.log_d),
            "k_n": num(stats.k_n()),
            "log_k_n": num(stats.log_k_n),
            "r_max": stats.r_max,
            "log_slot_count": num(stats.log_slot_count()),
        },
        "covariance_profile": {
            "rho": num(profile.rho),
            "gamma": num(profile.gamma),
            "theta_sq": num(profile.theta_sq),
        },
        "regime": regime,
        "pastur": {
            "eps": num(cfg.eps),
            "bernoulli": tail_json(&bernoulli),
            "gaussian": tail_json(&gaussian),
        },
        "chatterjee": {
            "z": nums(&[bound.z.re, bound.z.im]),
            "eps": num(bound.eps),
            "truncation": num(bound.truncation),
            "total": num(bound.total()),
            "log_total": num(bound.log_total),
            "parts": {
                "lambda2": num(bound.lambda2()),
                "lambda3": num(bound.lambda3()),
                "tail_bernoulli": num(bound.tail_bernoulli()),
                "tail_gaussian": num(bound.tail_gaussian()),
                "trunc3": num(bound.trunc3()),
                "trunc3_majorant": num(bound.log_trunc3_majorant.exp()),
            },
        },
        "nonsparsity_log_ratio": num(nonsparsity.log_ratio),
    }))
}

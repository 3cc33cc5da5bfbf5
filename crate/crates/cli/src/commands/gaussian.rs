use hyperspectra::{covariance_profile, eigenvalues, sample_surrogate, surrogate_coefficients};
use serde_json::{json, Value};

use super::{out_path, params_json, MAX_DENSE_N};
use crate::config::{Config, Emit};
use crate::error::{CliError, CliResult};
use crate::report::{eigenvalue_csv, num, write_file, SCHEMA_VERSION};

/// Covariance profile and surrogate coefficients; with `emit` containing `csv` and an
/// output directory, also the spectrum of one surrogate draw.
pub fn gaussian(cfg: &Config) -> CliResult<Value> {
    let params = cfg.params()?;
    let profile = covariance_profile(&params)?;
    let coeffs = surrogate_coefficients(&profile)?;
    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "gaussian",
        "params": params_json(&params),
        "covariance_profile": {
            "rho": num(profile.rho),
            "gamma": num(profile.gamma),
            "theta_sq": num(profile.theta_sq),
        },
        "coefficients": {
            "theta": num(coeffs.theta),
            "alpha": num(coeffs.alpha),
            "beta": num(coeffs.beta),
            "entry_variance": num(coeffs.entry_variance()),
        },
        "bulk_variance": num(profile.theta_sq),
    });
    if cfg.emits(Emit::Csv) {
        if let Some(path) = out_path(cfg, "surrogate_eigenvalues.csv") {
            if params.n() > MAX_DENSE_N {
                return Err(CliError::Config(format!("n = {} exceeds the dense limit {MAX_DENSE_N}", params.n())));
            }
            let h = sample_surrogate(params.n() as usize, &coeffs, cfg.seed)?;
            write_file(&path, &eigenvalue_csv(&eigenvalues(&h)?))?;
            report["seed"] = json!(cfg.seed);
        }
    }
    Ok(report)
}

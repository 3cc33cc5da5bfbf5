mod analyze;
mod gaussian;
mod montecarlo;
mod sample;
mod spectrum;
mod verify;

use std::path::PathBuf;

use hyperspectra::ModelParams;
use serde_json::{json, Value};

pub use analyze::analyze;
pub use gaussian::gaussian;
pub use montecarlo::{histogram_csv, resolve_engine, run_montecarlo, MonteCarloRun, TrialResult, MAX_DENSE_N};
pub use sample::sample;
pub use spectrum::spectrum;
pub use verify::{verify, Check, VerifyReport};

use crate::config::Config;
use crate::error::{CliError, CliResult};

/// What a command prints, plus the error that decides its exit status.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub error: Option<CliError>,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Self { stdout, error: None }
    }
}

pub fn params_json(params: &ModelParams) -> Value {
    json!({
        "n": params.n(),
        "r": params.classes().iter().map(|c| c.size).collect::<Vec<_>>(),
        "p": crate::report::nums(&params.classes().iter().map(|c| c.prob).collect::<Vec<_>>()),
    })
}

pub fn out_path(cfg: &Config, name: &str) -> Option<PathBuf> {
    cfg.out_dir.as_ref().map(|d| d.join(name))
}

pub(crate) fn require_out_dir(cfg: &Config) -> CliResult<&PathBuf> {
    cfg.out_dir
        .as_ref()
        .ok_or_else(|| CliError::Config("this output needs an output directory (--out or out_dir)".into()))
}

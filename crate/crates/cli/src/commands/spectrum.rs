use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use hyperspectra::{adjacency, center_scale, eigenvalues, Hypergraph};
use serde_json::json;

use super::{out_path, params_json, Outcome};
use crate::config::{Config, Format};
use crate::error::{CliError, CliResult};
use crate::report::{eigenvalue_csv, nums, to_json, write_file, SCHEMA_VERSION};

/// Eigenvalues of the centered, scaled adjacency matrix of a hypergraph file, using
/// the configured model for centering.
pub fn spectrum(cfg: &Config, input: &Path) -> CliResult<(Vec<f64>, Outcome)> {
    let params = cfg.params()?;
    let file = File::open(input).map_err(|e| CliError::io(input, e))?;
    let h = Hypergraph::read_text(BufReader::new(file))?;
    if h.n() as u64 != params.n() {
        return Err(CliError::Config(format!("hypergraph has n = {} but the config has n = {}", h.n(), params.n())));
    }
    let file_sizes: Vec<u64> = h.classes().iter().map(|c| c.size() as u64).collect();
    let cfg_sizes: Vec<u64> = params.classes().iter().map(|c| c.size).collect();
    if file_sizes != cfg_sizes {
        return Err(CliError::Config(format!("hypergraph classes {file_sizes:?} differ from r = {cfg_sizes:?}")));
    }
    let hn = center_scale(&adjacency(&h)?, &params)?;
    let eigs = eigenvalues(&hn)?;
    let csv = eigenvalue_csv(&eigs);
    if let Some(path) = out_path(cfg, "eigenvalues.csv") {
        write_file(&path, &csv)?;
    }
    let stdout = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => csv,
        Format::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "spectrum",
            "params": params_json(&params),
            "eigenvalues": nums(&eigs),
        })),
    };
    Ok((eigs, Outcome::ok(stdout)))
}

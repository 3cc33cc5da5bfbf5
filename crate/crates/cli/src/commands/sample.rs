use hyperspectra::{sample_hypergraph, CountLaw, Hypergraph};
use serde_json::json;

use super::{out_path, params_json, Outcome};
use crate::config::Config;
use crate::error::CliResult;
use crate::report::{to_json, write_file, SCHEMA_VERSION};

/// Draws one hypergraph. Writes `hypergraph.txt` into the output directory, or prints
/// the text format when no directory is set.
pub fn sample(cfg: &Config) -> CliResult<(Hypergraph, Outcome)> {
    let params = cfg.params()?;
    let h = sample_hypergraph(&params, cfg.seed, cfg.sampler_budget())?;
    let text = h.to_text();
    let Some(path) = out_path(cfg, "hypergraph.txt") else {
        return Ok((h, Outcome::ok(text)));
    };
    write_file(&path, &text)?;
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "sample",
        "params": params_json(&params),
        "seed": cfg.seed,
        "edges": h.classes().iter().map(|c| c.len()).collect::<Vec<_>>(),
        "count_law": h
            .classes()
            .iter()
            .map(|c| match c.count_law() {
                CountLaw::Binomial => "binomial",
                CountLaw::Poisson => "poisson",
            })
            .collect::<Vec<_>>(),
        "path": path.display().to_string(),
    });
    Ok((h, Outcome::ok(to_json(&summary))))
}

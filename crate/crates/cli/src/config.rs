//! Experiment configuration: a JSON file whose values command-line flags override.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use hyperspectra::{Complex, ModelParams, SamplerBudget};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    #[default]
    Auto,
    Bernoulli,
    GaussianSurrogate,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Auto => "auto",
            Engine::Bernoulli => "bernoulli",
            Engine::GaussianSurrogate => "gaussian-surrogate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Csv,
    Svg,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Contents of a config file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: Option<u64>,
    pub r: Option<Vec<u64>>,
    pub p: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub bins: Option<usize>,
    pub eps: Option<f64>,
    pub z: Option<[f64; 2]>,
    pub budget: Option<u64>,
    pub engine: Option<Engine>,
    pub out_dir: Option<PathBuf>,
    pub emit: Option<Vec<Emit>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Flags shared by every subcommand; each overrides the matching config key.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON config file
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Master seed
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Do not print the report to stdout
    #[arg(long, global = true)]
    pub quiet: bool,
    #[arg(long, global = true)]
    pub n: Option<u64>,
    /// Hyperedge sizes, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub r: Option<Vec<u64>>,
    /// Hyperedge probabilities, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    #[arg(long, global = true)]
    pub bins: Option<usize>,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Spectral parameter as `re,im`
    #[arg(long, global = true, value_delimiter = ',', num_args = 2, allow_negative_numbers = true)]
    pub z: Option<Vec<f64>>,
    /// Maximum expected edge count for Bernoulli sampling
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub engine: Option<Engine>,
    #[arg(long, global = true, value_enum, value_delimiter = ',')]
    pub emit: Option<Vec<Emit>>,
    /// Worker threads for Monte Carlo runs (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

/// Fully resolved settings.
#[derive(Debug, Clone)]
pub struct Config {
    pub n: Option<u64>,
    pub r: Option<Vec<u64>>,
    pub p: Option<Vec<f64>>,
    pub seed: u64,
    pub trials: u64,
    pub bins: usize,
    pub eps: f64,
    pub z: [f64; 2],
    pub budget: u64,
    pub engine: Engine,
    pub out_dir: Option<PathBuf>,
    pub emit: Vec<Emit>,
    /// `None` lets each command pick its natural output.
    pub format: Option<Format>,
    pub quiet: bool,
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            n: None,
            r: None,
            p: None,
            seed: 0,
            trials: 1,
            bins: hyperspectra::spectral::DEFAULT_BINS,
            eps: 1.0,
            z: [0.0, 1.0],
            budget: SamplerBudget::default().max_edges,
            engine: Engine::Auto,
            out_dir: None,
            emit: vec![Emit::Json],
            format: None,
            quiet: false,
            threads: 0,
        }
    }
}

impl Config {
    pub fn resolve(flags: &Overrides) -> CliResult<Self> {
        let file = match &flags.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let d = Config::default();
        let z = match &flags.z {
            Some(v) => [v[0], v[1]],
            None => file.z.unwrap_or(d.z),
        };
        let cfg = Config {
            n: flags.n.or(file.n),
            r: flags.r.clone().or(file.r),
            p: flags.p.clone().or(file.p),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            trials: flags.trials.or(file.trials).unwrap_or(d.trials),
            bins: flags.bins.or(file.bins).unwrap_or(d.bins),
            eps: flags.eps.or(file.eps).unwrap_or(d.eps),
            z,
            budget: flags.budget.or(file.budget).unwrap_or(d.budget),
            engine: flags.engine.or(file.engine).unwrap_or(d.engine),
            out_dir: flags.out.clone().or(file.out_dir),
            emit: flags.emit.clone().or(file.emit).unwrap_or(d.emit),
            format: flags.format,
            quiet: flags.quiet,
            threads: flags.threads,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        if self.trials == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        if self.bins < hyperspectra::spectral::MIN_BINS {
            return Err(CliError::Config(format!(
                "bins must be at least {}",
                hyperspectra::spectral::MIN_BINS
            )));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(CliError::Config(format!("eps = {} must be positive", self.eps)));
        }
        if !(self.z[1] > 0.0 && self.z.iter().all(|v| v.is_finite())) {
            return Err(CliError::Config(format!("z = {:?} must have positive imaginary part", self.z)));
        }
        if self.budget == 0 {
            return Err(CliError::Config("budget must be positive".into()));
        }
        Ok(())
    }

    /// Builds the model, failing with exit code 2 if any part is missing or invalid.
    pub fn params(&self) -> CliResult<ModelParams> {
        let n = self.n.ok_or_else(|| CliError::Config("missing `n`".into()))?;
        let r = self.r.as_deref().ok_or_else(|| CliError::Config("missing `r`".into()))?;
        let p = self.p.as_deref().ok_or_else(|| CliError::Config("missing `p`".into()))?;
        if r.len() != p.len() {
            return Err(CliError::Config(format!("`r` has {} entries but `p` has {}", r.len(), p.len())));
        }
        ModelParams::from_slices(n, r, p).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn z(&self) -> Complex {
        Complex::new(self.z[0], self.z[1])
    }

    pub fn sampler_budget(&self) -> SamplerBudget {
        SamplerBudget { max_edges: self.budget, ..SamplerBudget::default() }
    }

    pub fn emits(&self, e: Emit) -> bool {
        self.emit.contains(&e)
    }
}

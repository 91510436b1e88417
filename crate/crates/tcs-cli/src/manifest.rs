//! TOML experiment manifests and the flag/manifest/default precedence rules.
//!
//! A manifest captures a whole experiment — instance, algorithms, seeds,
//! optimizer settings, output directory — so it can be re-run exactly.
//! Command-line flags override manifest values, which override the built-in
//! defaults (population 100, 20 000 evaluations, crossover 0.8, mutation
//! 1/n).

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use tcs_core::engine::{Algorithm, LinkageSource, RunConfig};

/// On-disk manifest shape. Every field is optional; unknown keys are
/// rejected so typos fail loudly instead of silently using defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub instance: Option<PathBuf>,
    pub faults: Option<PathBuf>,
    pub algorithms: Option<Vec<String>>,
    pub seeds: Option<Vec<u64>>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    #[serde(default)]
    pub config: ConfigOverrides,
}

/// Optimizer settings a manifest may override.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub population_size: Option<usize>,
    pub max_evaluations: Option<usize>,
    pub crossover_probability: Option<f64>,
    pub mutation_probability: Option<f64>,
    pub linkage_source: Option<String>,
    pub snapshot_every: Option<usize>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read manifest {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid manifest {}", path.display()))
    }
}

/// Fully resolved experiment settings after applying precedence.
#[derive(Debug)]
pub struct Experiment {
    pub instance: PathBuf,
    pub faults: Option<PathBuf>,
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    pub out: PathBuf,
    pub jobs: Option<usize>,
    /// Template configuration; each run stamps its own algorithm and seed.
    pub config: RunConfig,
}

/// Flag-level values, prior to merging with a manifest. `None` means the
/// flag was not given.
#[derive(Debug, Default)]
pub struct CliOverrides {
    pub instance: Option<PathBuf>,
    pub faults: Option<PathBuf>,
    pub algorithms: Option<Vec<Algorithm>>,
    pub seeds: Option<Vec<u64>>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub population_size: Option<usize>,
    pub max_evaluations: Option<usize>,
    pub crossover_probability: Option<f64>,
    pub mutation_probability: Option<f64>,
    pub linkage_source: Option<LinkageSource>,
}

/// Merges CLI flags over an optional manifest over defaults: 20 seeds 0–19,
/// both algorithms, output directory `results`.
pub fn resolve(cli: CliOverrides, manifest: Option<Manifest>) -> Result<Experiment> {
    let manifest = manifest.unwrap_or_default();

    let instance = cli
        .instance
        .or(manifest.instance)
        .context("no instance given: pass --instance or set `instance` in the manifest")?;

    let algorithms = match (cli.algorithms, manifest.algorithms) {
        (Some(flags), _) => flags,
        (None, Some(names)) => names
            .iter()
            .map(|n| n.parse())
            .collect::<std::result::Result<Vec<Algorithm>, _>>()
            .map_err(|e| anyhow::anyhow!("manifest algorithms: {e}"))?,
        (None, None) => vec![Algorithm::Nsga2, Algorithm::L2Nsga],
    };
    if algorithms.is_empty() {
        bail!("algorithm list is empty");
    }
    if algorithms
        .iter()
        .enumerate()
        .any(|(i, a)| algorithms[..i].contains(a))
    {
        bail!("duplicate algorithms requested");
    }

    let seeds = cli
        .seeds
        .or(manifest.seeds)
        .unwrap_or_else(|| (0..20).collect());
    if seeds.is_empty() {
        bail!("seed list is empty");
    }
    let mut sorted = seeds.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != seeds.len() {
        bail!("seeds must be distinct");
    }

    let linkage_source = match (cli.linkage_source, manifest.config.linkage_source) {
        (Some(flag), _) => flag,
        (None, Some(name)) => name
            .parse()
            .map_err(|e| anyhow::anyhow!("manifest linkage_source: {e}"))?,
        (None, None) => LinkageSource::Population,
    };

    // Algorithm and seed are placeholders; each run overwrites them.
    let mut config = RunConfig::new(Algorithm::Nsga2, 0);
    if let Some(v) = cli.population_size.or(manifest.config.population_size) {
        config.population_size = v;
    }
    if let Some(v) = cli.max_evaluations.or(manifest.config.max_evaluations) {
        config.max_evaluations = v;
    }
    if let Some(v) = cli
        .crossover_probability
        .or(manifest.config.crossover_probability)
    {
        config.crossover_probability = v;
    }
    if let Some(v) = cli
        .mutation_probability
        .or(manifest.config.mutation_probability)
    {
        config.mutation_probability = Some(v);
    }
    config.linkage_source = linkage_source;
    config.snapshot_every = manifest.config.snapshot_every;

    Ok(Experiment {
        instance,
        faults: cli.faults.or(manifest.faults),
        algorithms,
        seeds,
        out: cli.out.or(manifest.out).unwrap_or_else(|| PathBuf::from("results")),
        jobs: cli.jobs.or(manifest.jobs),
        config,
    })
}

/// Parses a seed list: either comma-separated values (`3,7,11`) or a
/// half-open range (`0..20`).
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let text = text.trim();
    if let Some((start, end)) = text.split_once("..") {
        let start: u64 = start.trim().parse().context("invalid range start")?;
        let end: u64 = end.trim().parse().context("invalid range end")?;
        if end <= start {
            bail!("empty seed range {text}");
        }
        return Ok((start..end).collect());
    }
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .with_context(|| format!("invalid seed '{}'", part.trim()))
        })
        .collect()
}

//! The `run` subcommand: fan out (algorithm, seed) pairs over an instance
//! and write one result file each.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Args;
use rayon::prelude::*;
use tcs_core::engine::{run_nsga2, Algorithm, LinkageSource, RunConfig, RunResult};
use tcs_core::instance::{load_faults, load_instance, Instance};
use tcs_core::linkage::run_l2nsga;

use crate::manifest::{parse_seeds, resolve, CliOverrides, Manifest};

/// Seed collection parsed from one flag value (clap needs a single target
/// type per occurrence, not a `Vec` element).
#[derive(Clone, Debug)]
pub struct SeedList(Vec<u64>);

impl std::str::FromStr for SeedList {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_seeds(s).map(SeedList)
    }
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Experiment manifest (TOML); flags override its values.
    #[arg(long)]
    pub manifest: Option<PathBuf>,

    /// Coverage instance file.
    #[arg(long)]
    pub instance: Option<PathBuf>,

    /// Fault matrix file; only validated here, used by `evaluate`.
    #[arg(long)]
    pub faults: Option<PathBuf>,

    /// Algorithms to run (comma-separated: nsga2,l2nsga). Default: both.
    #[arg(long, value_delimiter = ',')]
    pub algo: Option<Vec<Algorithm>>,

    /// Seeds: comma-separated list (3,7,11) or half-open range (0..20).
    /// Default: 0..20.
    #[arg(long)]
    pub seeds: Option<SeedList>,

    /// Population size (default 100).
    #[arg(long)]
    pub pop: Option<usize>,

    /// Evaluation budget, initial population included (default 20000).
    #[arg(long)]
    pub evals: Option<usize>,

    /// Crossover probability (default 0.8).
    #[arg(long)]
    pub pc: Option<f64>,

    /// Per-bit mutation probability (default 1/n).
    #[arg(long)]
    pub pm: Option<f64>,

    /// Population subset the linkage model is learned from.
    #[arg(long)]
    pub linkage_source: Option<LinkageSource>,

    /// Output directory for result files (default: results).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Worker threads for parallel runs (default: one per CPU).
    #[arg(long)]
    pub jobs: Option<usize>,
}

pub fn cmd_run(args: &RunArgs) -> Result<()> {
    let manifest = args
        .manifest
        .as_deref()
        .map(Manifest::load)
        .transpose()?;
    let cli = CliOverrides {
        instance: args.instance.clone(),
        faults: args.faults.clone(),
        algorithms: args.algo.clone(),
        seeds: args.seeds.clone().map(|s| s.0),
        out: args.out.clone(),
        jobs: args.jobs,
        population_size: args.pop,
        max_evaluations: args.evals,
        crossover_probability: args.pc,
        mutation_probability: args.pm,
        linkage_source: args.linkage_source,
    };
    let exp = resolve(cli, manifest)?;

    let instance = load_instance(&exp.instance)?;
    if let Some(fault_path) = &exp.faults {
        let faults = load_faults(fault_path)?;
        faults
            .validate_against(&instance)
            .with_context(|| format!("fault file {} does not pair with the instance", fault_path.display()))?;
    }
    // Identical-column compaction speeds up evaluation without changing any
    // objective value; the digest still identifies the original content.
    let compacted = instance.compact();

    std::fs::create_dir_all(&exp.out)
        .with_context(|| format!("cannot create output directory {}", exp.out.display()))?;

    let runs: Vec<(Algorithm, u64)> = exp
        .algorithms
        .iter()
        .flat_map(|&algorithm| exp.seeds.iter().map(move |&seed| (algorithm, seed)))
        .collect();
    eprintln!(
        "running {} configurations on {} ({} tests) into {}",
        runs.len(),
        compacted.name(),
        compacted.num_tests(),
        exp.out.display()
    );

    let execute = || -> Result<()> {
        runs.par_iter()
            .map(|&(algorithm, seed)| {
                let started = Instant::now();
                let result = single_run(&exp.config, algorithm, seed, &compacted)?;
                let path = exp.out.join(format!("{algorithm}_{seed}.result"));
                result.save(&path)?;
                eprintln!(
                    "  {algorithm} seed {seed}: front {} in {:.1}s",
                    result.front.len(),
                    started.elapsed().as_secs_f64()
                );
                Ok(())
            })
            .collect::<Result<Vec<()>>>()?;
        Ok(())
    };

    match exp.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .context("cannot build worker pool")?
            .install(execute),
        None => execute(),
    }
}

fn single_run(
    template: &RunConfig,
    algorithm: Algorithm,
    seed: u64,
    instance: &Instance,
) -> Result<RunResult> {
    let mut config = template.clone();
    config.algorithm = algorithm;
    config.seed = seed;
    let result = match algorithm {
        Algorithm::Nsga2 => run_nsga2(&config, instance)?,
        Algorithm::L2Nsga => run_l2nsga(&config, instance)?,
    };
    Ok(result)
}

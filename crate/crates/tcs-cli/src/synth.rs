//! The `synth` subcommand: deterministic synthetic instance and fault-matrix
//! generation.

use std::ops::Range;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use tcs_core::instance::{
    generate_synthetic, generate_synthetic_faults, save_faults, save_instance, Block, BlockSpec,
};

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Number of tests.
    #[arg(long)]
    pub tests: usize,

    /// Number of statement entities.
    #[arg(long)]
    pub statements: usize,

    /// Number of branch entities.
    #[arg(long)]
    pub branches: usize,

    /// Generator seed; same arguments and seed give identical bytes.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output instance path; its file stem names the instance.
    #[arg(long)]
    pub out: PathBuf,

    /// Planted block as `T0..T1:S0..S1:B0..B1` (test, statement, and branch
    /// index ranges). Repeatable; blocks must not overlap.
    #[arg(long = "block")]
    pub blocks: Vec<String>,

    /// Tiled block layout as `count,tests_per,statements_per,branches_per`.
    #[arg(long, conflicts_with = "blocks")]
    pub tiled: Option<String>,

    /// Also generate this many synthetic faults.
    #[arg(long)]
    pub faults: Option<usize>,

    /// Most tests any single fault is detectable by.
    #[arg(long, default_value_t = 3)]
    pub max_detectors: usize,

    /// Separate seed for fault generation (default: `--seed`), so fault
    /// matrices can be regenerated for an existing instance.
    #[arg(long)]
    pub fault_seed: Option<u64>,

    /// Fault matrix output path (default: instance path with extension
    /// `faults`).
    #[arg(long)]
    pub faults_out: Option<PathBuf>,
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let spec = block_spec(args)?;
    let name = args
        .out
        .file_stem()
        .context("output path needs a file name")?
        .to_string_lossy()
        .into_owned();
    let instance = generate_synthetic(
        &name,
        args.tests,
        args.statements,
        args.branches,
        spec.as_ref(),
        args.seed,
    )?;
    save_instance(&instance, &args.out)?;
    eprintln!(
        "wrote {} ({} tests, {} statements, {} branches)",
        args.out.display(),
        instance.num_tests(),
        instance.num_statements(),
        instance.num_branches()
    );

    if let Some(num_faults) = args.faults {
        let fault_seed = args.fault_seed.unwrap_or(args.seed);
        let faults = generate_synthetic_faults(&instance, num_faults, args.max_detectors, fault_seed)?;
        let path = args
            .faults_out
            .clone()
            .unwrap_or_else(|| args.out.with_extension("faults"));
        save_faults(&faults, &path)?;
        eprintln!("wrote {} ({} faults)", path.display(), faults.num_faults());
    }
    Ok(())
}

fn block_spec(args: &SynthArgs) -> Result<Option<BlockSpec>> {
    if let Some(tiled) = &args.tiled {
        let parts: Vec<usize> = tiled
            .split(',')
            .map(|p| p.trim().parse().with_context(|| format!("invalid tiled part '{p}'")))
            .collect::<Result<_>>()?;
        let [count, tests_per, statements_per, branches_per] = parts[..] else {
            bail!("--tiled takes count,tests_per,statements_per,branches_per");
        };
        return Ok(Some(BlockSpec::tiled(count, tests_per, statements_per, branches_per)));
    }
    if args.blocks.is_empty() {
        return Ok(None);
    }
    let blocks = args
        .blocks
        .iter()
        .map(|text| {
            let parts: Vec<Range<usize>> = text
                .split(':')
                .map(parse_range)
                .collect::<Result<_>>()?;
            let [tests, statements, branches]: [Range<usize>; 3] =
                parts.try_into().map_err(|_| {
                    anyhow::anyhow!("block '{text}' needs three ranges T0..T1:S0..S1:B0..B1")
                })?;
            Ok(Block { tests, statements, branches })
        })
        .collect::<Result<Vec<Block>>>()?;
    Ok(Some(BlockSpec { blocks }))
}

fn parse_range(text: &str) -> Result<Range<usize>> {
    let (start, end) = text
        .split_once("..")
        .with_context(|| format!("range '{text}' must look like 0..5"))?;
    let start: usize = start.trim().parse().with_context(|| format!("invalid range start in '{text}'"))?;
    let end: usize = end.trim().parse().with_context(|| format!("invalid range end in '{text}'"))?;
    Ok(start..end)
}

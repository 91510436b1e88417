//! The `evaluate` subcommand: collect result files, build the reference
//! front, compute per-run quality indicators, and compare algorithms
//! statistically.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use tcs_core::engine::RunResult;
use tcs_core::indicators::{
    build_reference_front, cost_effectiveness, hypervolume, igd, Front, ReferenceFront,
};
use tcs_core::instance::{load_faults, load_instance};
use tcs_core::stats::{quartiles, vargha_delaney_a12, wilcoxon_rank_sum, SampleSet};

/// Hypervolume reference point per normalized objective: slightly outside the
/// unit cube so boundary solutions keep a positive contribution.
const HV_REFERENCE: f64 = 1.1;

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Directory containing `.result` files written by `run`.
    pub results: PathBuf,

    /// Instance file; required with --faults (cost-effectiveness needs raw
    /// test costs and fault pairing).
    #[arg(long)]
    pub instance: Option<PathBuf>,

    /// Fault matrix file; adds the cost-effectiveness metric.
    #[arg(long)]
    pub faults: Option<PathBuf>,

    /// Output directory for reports (default: the results directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct LoadedRun {
    file_name: String,
    result: RunResult,
    front: Front,
}

struct MetricRows {
    /// Metric name → (algorithm → per-run values in row order).
    by_metric: BTreeMap<&'static str, BTreeMap<String, Vec<f64>>>,
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<()> {
    let out_dir = args.out.clone().unwrap_or_else(|| args.results.clone());
    let runs = load_results(&args.results)?;

    // One experiment = one instance: refuse to mix result files computed on
    // different instance content.
    let digest = &runs[0].result.instance_digest;
    if let Some(other) = runs.iter().find(|r| &r.result.instance_digest != digest) {
        bail!(
            "result files from different instances in {}: {} vs {}",
            args.results.display(),
            runs[0].file_name,
            other.file_name
        );
    }

    let fault_data = match (&args.faults, &args.instance) {
        (Some(fault_path), Some(instance_path)) => {
            let instance = load_instance(instance_path)?;
            if instance.digest() != digest {
                bail!(
                    "instance {} does not match the one the results were computed on",
                    instance_path.display()
                );
            }
            let faults = load_faults(fault_path)?;
            faults.validate_against(&instance).with_context(|| {
                format!("fault file {} does not pair with the instance", fault_path.display())
            })?;
            Some((instance, faults))
        }
        (Some(_), None) => {
            bail!("--faults needs --instance: cost-effectiveness uses raw test costs")
        }
        (None, _) => None,
    };

    let fronts: Vec<Front> = runs.iter().map(|r| r.front.clone()).collect();
    let reference = build_reference_front(&fronts)?;

    let mut rows = MetricRows { by_metric: BTreeMap::new() };
    let mut metric_lines: Vec<String> = Vec::new();
    let reference_point = vec![
        HV_REFERENCE;
        reference
            .front()
            .arity()
            .context("reference front is empty")?
    ];
    for run in &runs {
        let igd_value = igd(&run.front, &reference)?;
        let hv_value = hypervolume(&run.front, &reference_point)?;
        let algo = run.result.algorithm.to_string();
        rows.push("igd", &algo, igd_value);
        rows.push("hv", &algo, hv_value);
        let mut line = format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            run.file_name,
            algo,
            run.result.seed,
            run.front.len(),
            run.result.evaluations,
            run.result.generations,
            igd_value,
            hv_value
        );
        if let Some((instance, faults)) = &fault_data {
            let ice = cost_effectiveness(&run.front, instance, faults)?;
            rows.push("ice", &algo, ice);
            write!(line, "\t{ice}").expect("string write");
        }
        metric_lines.push(line);
    }

    std::fs::create_dir_all(out_dir.join("fronts"))
        .with_context(|| format!("cannot create {}", out_dir.join("fronts").display()))?;
    write_front_file(&out_dir.join("reference.front"), reference.front())?;
    for run in &runs {
        let stem = Path::new(&run.file_name)
            .file_stem()
            .expect("result files have a stem")
            .to_string_lossy()
            .into_owned();
        write_front_file(&out_dir.join("fronts").join(format!("{stem}.front")), &run.front)?;
    }

    let mut metrics_tsv = String::from(
        "file\talgorithm\tseed\tfront_size\tevaluations\tgenerations\tigd\thv",
    );
    if fault_data.is_some() {
        metrics_tsv.push_str("\tice");
    }
    metrics_tsv.push('\n');
    for line in &metric_lines {
        metrics_tsv.push_str(line);
        metrics_tsv.push('\n');
    }
    write_text(&out_dir.join("metrics.tsv"), &metrics_tsv)?;

    let comparison = build_comparison(&rows)?;
    write_text(&out_dir.join("comparison.tsv"), &comparison.tsv)?;

    let report = build_report(&args.results, &runs, &reference, &rows, &comparison.text)?;
    write_text(&out_dir.join("report.txt"), &report)?;
    print!("{report}");
    eprintln!(
        "wrote reference.front, fronts/, metrics.tsv, comparison.tsv, report.txt to {}",
        out_dir.display()
    );
    Ok(())
}

impl MetricRows {
    fn push(&mut self, metric: &'static str, algorithm: &str, value: f64) {
        self.by_metric
            .entry(metric)
            .or_default()
            .entry(algorithm.to_string())
            .or_default()
            .push(value);
    }
}

fn load_results(dir: &Path) -> Result<Vec<LoadedRun>> {
    let entries = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read results directory {}", dir.display()))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.map(|e| e.path()).ok())
        .filter(|p| p.extension().is_some_and(|ext| ext == "result"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no .result files in {}", dir.display());
    }
    let mut runs = Vec::with_capacity(files.len());
    for path in files {
        let result = RunResult::load(&path)?;
        let front = Front::from_pairs(&result.front);
        let file_name = path
            .file_name()
            .expect("scanned files have names")
            .to_string_lossy()
            .into_owned();
        runs.push(LoadedRun { file_name, result, front });
    }
    // Stable presentation order: algorithm name, then seed.
    runs.sort_by(|a, b| {
        (a.result.algorithm.to_string(), a.result.seed)
            .cmp(&(b.result.algorithm.to_string(), b.result.seed))
    });
    Ok(runs)
}

fn write_front_file(path: &Path, front: &Front) -> Result<()> {
    let mut text = String::new();
    for point in front.points() {
        let bits = point
            .chromosome
            .as_ref()
            .map(|c| c.to_string())
            .context("front point without a chromosome cannot be dumped")?;
        text.push_str(&bits);
        for v in point.objectives.values() {
            write!(text, " {v}").expect("string write");
        }
        text.push('\n');
    }
    write_text(path, &text)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

struct Comparison {
    tsv: String,
    text: String,
}

/// Rank-sum + effect size for every algorithm pair on every metric.
fn build_comparison(rows: &MetricRows) -> Result<Comparison> {
    let mut tsv = String::from(
        "metric\talgo_a\talgo_b\tmedian_a\tiqr_a\tmedian_b\tiqr_b\tp_value\ta12\tmagnitude\n",
    );
    let mut text = String::new();
    let mut any = false;
    for (metric, by_algo) in &rows.by_metric {
        let algos: Vec<&String> = by_algo.keys().collect();
        for i in 0..algos.len() {
            for j in (i + 1)..algos.len() {
                let (name_a, name_b) = (algos[i], algos[j]);
                let a = SampleSet::new(name_a.clone(), by_algo[name_a].clone())?;
                let b = SampleSet::new(name_b.clone(), by_algo[name_b].clone())?;
                let p = wilcoxon_rank_sum(&a, &b);
                let (a12, magnitude) = vargha_delaney_a12(&a, &b);
                let (q1a, med_a, q3a) = quartiles(a.values());
                let (q1b, med_b, q3b) = quartiles(b.values());
                writeln!(
                    tsv,
                    "{metric}\t{name_a}\t{name_b}\t{med_a}\t{}\t{med_b}\t{}\t{p}\t{a12}\t{magnitude}",
                    q3a - q1a,
                    q3b - q1b
                )
                .expect("string write");
                writeln!(
                    text,
                    "  {metric:<4} {name_a} vs {name_b}: medians {med_a:.4} vs {med_b:.4}, \
                     p = {p:.4}, A12 = {a12:.3} ({magnitude})"
                )
                .expect("string write");
                any = true;
            }
        }
    }
    if !any {
        text.push_str("  single algorithm: nothing to compare\n");
    }
    Ok(Comparison { tsv, text })
}

fn build_report(
    results_dir: &Path,
    runs: &[LoadedRun],
    reference: &ReferenceFront,
    rows: &MetricRows,
    comparison_text: &str,
) -> Result<String> {
    let mut report = String::new();
    writeln!(report, "evaluation of {}", results_dir.display()).expect("string write");
    let first = &runs[0].result;
    writeln!(
        report,
        "instance {} (digest {}...)",
        first.instance_name,
        &first.instance_digest[..12]
    )
    .expect("string write");
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for run in runs {
        *counts.entry(run.result.algorithm.to_string()).or_default() += 1;
    }
    let run_summary: Vec<String> = counts
        .iter()
        .map(|(algo, count)| format!("{algo} x {count}"))
        .collect();
    writeln!(report, "runs: {}", run_summary.join(", ")).expect("string write");
    writeln!(report, "reference front: {} points", reference.front().len())
        .expect("string write");
    writeln!(report).expect("string write");

    writeln!(
        report,
        "per-algorithm summary (igd lower is better; hv and ice higher are better):"
    )
    .expect("string write");
    writeln!(
        report,
        "  {:<6} {:<10} {:>10} {:>10} {:>10} {:>10}",
        "metric", "algorithm", "median", "iqr", "min", "max"
    )
    .expect("string write");
    for (metric, by_algo) in &rows.by_metric {
        for (algo, values) in by_algo {
            let (q1, med, q3) = quartiles(values);
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            writeln!(
                report,
                "  {:<6} {:<10} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
                metric,
                algo,
                med,
                q3 - q1,
                min,
                max
            )
            .expect("string write");
        }
    }
    writeln!(report).expect("string write");
    writeln!(report, "pairwise comparison (two-sided rank-sum; A12 of first over second):")
        .expect("string write");
    report.push_str(comparison_text);
    Ok(report)
}

//! Run results and their text serialization.
//!
//! The file format is line-oriented and fully deterministic for a given seed
//! and input — no timestamps or wall-clock data are written — so rerunning an
//! experiment reproduces result files byte for byte:
//!
//! ```text
//! tcs-result v1
//! algorithm nsga2
//! seed 7
//! ...key value lines...
//! front <size>
//! <bitstring> <cost> <1-stmtcov> <1-branchcov>
//! snapshot <generation> <size>     (optional, repeated)
//! <rows>
//! end
//! ```

use super::{Algorithm, EvaluatedSolution, LinkageSource};
use crate::objectives::{Chromosome, ObjectiveVector};
use crate::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// Everything a finished run reports. The final first front plus enough
/// configuration echo to reproduce or audit the run.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub instance_name: String,
    /// SHA-256 of the instance's canonical serialization; evaluation refuses
    /// to mix results computed on different instance content.
    pub instance_digest: String,
    pub num_tests: usize,
    pub population_size: usize,
    pub max_evaluations: usize,
    pub crossover_probability: f64,
    /// The resolved per-bit probability (the 1/n default applied).
    pub mutation_probability: f64,
    pub linkage_source: LinkageSource,
    /// Evaluations actually spent (equals the configured budget).
    pub evaluations: usize,
    /// Offspring generations completed; the last may be partial.
    pub generations: usize,
    /// Model inferences performed (0 for the baseline).
    pub linkage_inferences: usize,
    /// Final first front in population order.
    pub front: Vec<(Chromosome, ObjectiveVector)>,
    /// Final population. Not serialized; empty after [`RunResult::load`].
    pub population: Vec<EvaluatedSolution>,
    /// Optional periodic first-front snapshots as (generation, front).
    pub snapshots: Vec<(usize, Vec<(Chromosome, ObjectiveVector)>)>,
    /// Wall-clock duration. Not serialized; 0 after [`RunResult::load`].
    pub wall_seconds: f64,
}

impl RunResult {
    /// Serializes to the deterministic text format.
    pub fn to_result_string(&self) -> String {
        let mut out = String::new();
        out.push_str("tcs-result v1\n");
        writeln!(out, "algorithm {}", self.algorithm).expect("string write");
        writeln!(out, "seed {}", self.seed).expect("string write");
        writeln!(out, "instance {}", self.instance_name).expect("string write");
        writeln!(out, "instance_digest {}", self.instance_digest).expect("string write");
        writeln!(out, "num_tests {}", self.num_tests).expect("string write");
        writeln!(out, "population_size {}", self.population_size).expect("string write");
        writeln!(out, "max_evaluations {}", self.max_evaluations).expect("string write");
        writeln!(out, "crossover_probability {}", self.crossover_probability).expect("string write");
        writeln!(out, "mutation_probability {}", self.mutation_probability).expect("string write");
        if self.algorithm == Algorithm::L2Nsga {
            writeln!(out, "linkage_source {}", self.linkage_source).expect("string write");
        }
        writeln!(out, "evaluations {}", self.evaluations).expect("string write");
        writeln!(out, "generations {}", self.generations).expect("string write");
        writeln!(out, "linkage_inferences {}", self.linkage_inferences).expect("string write");
        writeln!(out, "front {}", self.front.len()).expect("string write");
        for (chromosome, objectives) in &self.front {
            push_solution_row(&mut out, chromosome, objectives);
        }
        for (generation, front) in &self.snapshots {
            writeln!(out, "snapshot {generation} {}", front.len()).expect("string write");
            for (chromosome, objectives) in front {
                push_solution_row(&mut out, chromosome, objectives);
            }
        }
        out.push_str("end\n");
        out
    }

    /// Writes the serialized result to a file.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_result_string()).map_err(|e| Error::io(path, e))
    }

    /// Reads a serialized result back. The in-memory-only fields
    /// (`population`, `wall_seconds`) come back empty/zero.
    pub fn load(path: impl AsRef<Path>) -> Result<RunResult> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        parse_result(&text, path)
    }
}

fn push_solution_row(out: &mut String, chromosome: &Chromosome, objectives: &ObjectiveVector) {
    write!(out, "{chromosome}").expect("string write");
    for v in objectives.values() {
        write!(out, " {v}").expect("string write");
    }
    out.push('\n');
}

fn parse_result(text: &str, path: &Path) -> Result<RunResult> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = || lines.next().ok_or_else(|| Error::parse(path, 0, "unexpected end of file"));

    let (line, header) = next()?;
    if header.trim() != "tcs-result v1" {
        return Err(Error::parse(path, line, "expected header `tcs-result v1`"));
    }

    let mut fields: std::collections::HashMap<String, String> = std::collections::HashMap::new();
    let front_size: usize;
    loop {
        let (line, body) = next()?;
        let mut parts = body.splitn(2, ' ');
        let key = parts.next().unwrap_or("");
        let value = parts.next().unwrap_or("").trim();
        if key == "front" {
            front_size = value
                .parse()
                .map_err(|_| Error::parse(path, line, "invalid front size"))?;
            break;
        }
        if key.is_empty() || value.is_empty() {
            return Err(Error::parse(path, line, format!("expected `key value`, got {body:?}")));
        }
        fields.insert(key.to_string(), value.to_string());
    }

    let take = |key: &str| -> Result<String> {
        fields
            .get(key)
            .cloned()
            .ok_or_else(|| Error::parse(path, 0, format!("missing field {key}")))
    };
    let parse_num = |key: &str| -> Result<usize> {
        take(key)?
            .parse()
            .map_err(|_| Error::parse(path, 0, format!("invalid number in field {key}")))
    };
    let parse_f64 = |key: &str| -> Result<f64> {
        take(key)?
            .parse()
            .map_err(|_| Error::parse(path, 0, format!("invalid value in field {key}")))
    };

    let algorithm: Algorithm = take("algorithm")?.parse()?;
    let num_tests = parse_num("num_tests")?;

    let mut front = Vec::with_capacity(front_size);
    for _ in 0..front_size {
        let (line, body) = next()?;
        front.push(parse_solution_row(body, num_tests, path, line)?);
    }

    let mut snapshots = Vec::new();
    loop {
        let (line, body) = next()?;
        if body.trim() == "end" {
            break;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != 3 || tokens[0] != "snapshot" {
            return Err(Error::parse(path, line, "expected `snapshot <generation> <size>` or `end`"));
        }
        let generation: usize = tokens[1]
            .parse()
            .map_err(|_| Error::parse(path, line, "invalid snapshot generation"))?;
        let size: usize = tokens[2]
            .parse()
            .map_err(|_| Error::parse(path, line, "invalid snapshot size"))?;
        let mut rows = Vec::with_capacity(size);
        for _ in 0..size {
            let (line, body) = next()?;
            rows.push(parse_solution_row(body, num_tests, path, line)?);
        }
        snapshots.push((generation, rows));
    }

    Ok(RunResult {
        algorithm,
        seed: take("seed")?
            .parse()
            .map_err(|_| Error::parse(path, 0, "invalid value in field seed"))?,
        instance_name: take("instance")?,
        instance_digest: take("instance_digest")?,
        num_tests,
        population_size: parse_num("population_size")?,
        max_evaluations: parse_num("max_evaluations")?,
        crossover_probability: parse_f64("crossover_probability")?,
        mutation_probability: parse_f64("mutation_probability")?,
        linkage_source: match fields.get("linkage_source") {
            Some(s) => s.parse()?,
            None => LinkageSource::Population,
        },
        evaluations: parse_num("evaluations")?,
        generations: parse_num("generations")?,
        linkage_inferences: parse_num("linkage_inferences")?,
        front,
        population: Vec::new(),
        snapshots,
        wall_seconds: 0.0,
    })
}

fn parse_solution_row(
    body: &str,
    num_tests: usize,
    path: &Path,
    line: usize,
) -> Result<(Chromosome, ObjectiveVector)> {
    let tokens: Vec<&str> = body.split_whitespace().collect();
    if tokens.len() < 2 {
        return Err(Error::parse(path, line, "expected `<bitstring> <objectives...>`"));
    }
    let chromosome = Chromosome::from_bitstring(tokens[0])
        .ok_or_else(|| Error::parse(path, line, "invalid chromosome bitstring"))?;
    if chromosome.len() != num_tests {
        return Err(Error::parse(
            path,
            line,
            format!("bitstring length {} does not match num_tests {num_tests}", chromosome.len()),
        ));
    }
    let mut values = Vec::with_capacity(tokens.len() - 1);
    for t in &tokens[1..] {
        let v: f64 = t
            .parse()
            .map_err(|_| Error::parse(path, line, format!("invalid objective value {t:?}")))?;
        if !v.is_finite() {
            return Err(Error::parse(path, line, "objective values must be finite"));
        }
        values.push(v);
    }
    Ok((chromosome, ObjectiveVector::new(values)))
}

//! Text serialization of instances and fault matrices.
//!
//! Instance file: header `tcs-instance v1 <num_tests> <num_statements>
//! <num_branches>`, then one line per test `<test_id> <cost> S:<indices>
//! B:<indices>` with comma-separated 0-based indices (empty lists written as
//! `S:` / `B:`). Fault file: header `tcs-faults v1 <num_tests> <num_faults>`,
//! then `<test_id> F:<indices>` per test. Writers emit a canonical form
//! (ascending indices, shortest round-trip float formatting) that reloads
//! bit-exactly.

use super::{FaultMatrix, Instance};
use crate::bits::BitMatrix;
use crate::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// Loads and validates an instance; the file stem becomes the instance name.
pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string());
    parse_instance(&text, path, name)
}

/// Writes the canonical form of a raw instance.
///
/// Compacted instances are refused: the format has no weight syntax, and
/// writing one would silently change the problem on reload.
pub fn save_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = instance_to_string(instance)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Canonical serialization of a raw instance (errors on compacted input).
pub fn instance_to_string(instance: &Instance) -> Result<String> {
    if instance.is_compacted() {
        return Err(Error::Instance(format!(
            "instance {} is compacted and cannot be serialized losslessly",
            instance.name()
        )));
    }
    let mut out = String::new();
    writeln!(
        out,
        "tcs-instance v1 {} {} {}",
        instance.num_tests(),
        instance.num_statements(),
        instance.num_branches()
    )
    .expect("string write");
    for t in 0..instance.num_tests() {
        write!(out, "{} {} S:", instance.test_ids()[t], instance.cost()[t]).expect("string write");
        push_index_list(&mut out, instance.statement_cov().row_ones(t));
        out.push_str(" B:");
        push_index_list(&mut out, instance.branch_cov().row_ones(t));
        out.push('\n');
    }
    Ok(out)
}

/// Loads a fault matrix.
pub fn load_faults(path: impl AsRef<Path>) -> Result<FaultMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_faults(&text, path)
}

/// Writes the canonical form of a fault matrix.
pub fn save_faults(faults: &FaultMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, faults_to_string(faults)).map_err(|e| Error::io(path, e))
}

/// Canonical serialization of a fault matrix.
pub fn faults_to_string(faults: &FaultMatrix) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "tcs-faults v1 {} {}",
        faults.num_tests(),
        faults.num_faults()
    )
    .expect("string write");
    for t in 0..faults.num_tests() {
        write!(out, "{} F:", faults.test_ids()[t]).expect("string write");
        push_index_list(&mut out, faults.detects().row_ones(t));
        out.push('\n');
    }
    out
}

fn push_index_list(out: &mut String, indices: impl Iterator<Item = usize>) {
    for (k, i) in indices.enumerate() {
        if k > 0 {
            out.push(',');
        }
        write!(out, "{i}").expect("string write");
    }
}

/// Non-blank lines with their 1-based line numbers.
fn numbered_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l))
        .collect()
}

fn parse_instance(text: &str, path: &Path, name: String) -> Result<Instance> {
    let lines = numbered_lines(text);
    let (&(header_line, header), rows) = lines
        .split_first()
        .ok_or_else(|| Error::parse(path, 1, "empty file"))?;

    let tokens: Vec<&str> = header.split_whitespace().collect();
    let bad_header = || {
        Error::parse(
            path,
            header_line,
            "expected header `tcs-instance v1 <num_tests> <num_statements> <num_branches>`",
        )
    };
    if tokens.len() != 5 || tokens[0] != "tcs-instance" || tokens[1] != "v1" {
        return Err(bad_header());
    }
    let num_tests: usize = tokens[2].parse().map_err(|_| bad_header())?;
    let num_statements: usize = tokens[3].parse().map_err(|_| bad_header())?;
    let num_branches: usize = tokens[4].parse().map_err(|_| bad_header())?;
    if num_tests == 0 || num_statements == 0 || num_branches == 0 {
        return Err(Error::parse(path, header_line, "all header counts must be at least 1"));
    }

    if rows.len() != num_tests {
        let at = rows
            .get(num_tests.min(rows.len().saturating_sub(1)))
            .map(|&(l, _)| l)
            .unwrap_or(header_line);
        return Err(Error::parse(
            path,
            at,
            format!("header declares {num_tests} tests but file has {} test lines", rows.len()),
        ));
    }

    let mut test_ids = Vec::with_capacity(num_tests);
    let mut cost = Vec::with_capacity(num_tests);
    let mut statement_cov = BitMatrix::zeros(num_tests, num_statements);
    let mut branch_cov = BitMatrix::zeros(num_tests, num_branches);
    for (row, &(line, body)) in rows.iter().enumerate() {
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != 4 {
            return Err(Error::parse(
                path,
                line,
                "expected `<test_id> <cost> S:<indices> B:<indices>`",
            ));
        }
        test_ids.push(tokens[0].to_string());
        let c: f64 = tokens[1]
            .parse()
            .map_err(|_| Error::parse(path, line, format!("invalid cost {:?}", tokens[1])))?;
        if !c.is_finite() || c < 0.0 {
            return Err(Error::parse(
                path,
                line,
                format!("cost must be finite and non-negative, got {c}"),
            ));
        }
        cost.push(c);
        parse_index_list(tokens[2], "S:", num_statements, path, line, |i| {
            statement_cov.set(row, i, true)
        })?;
        parse_index_list(tokens[3], "B:", num_branches, path, line, |i| {
            branch_cov.set(row, i, true)
        })?;
    }

    Instance::new(name, test_ids, cost, statement_cov, branch_cov)
}

fn parse_faults(text: &str, path: &Path) -> Result<FaultMatrix> {
    let lines = numbered_lines(text);
    let (&(header_line, header), rows) = lines
        .split_first()
        .ok_or_else(|| Error::parse(path, 1, "empty file"))?;

    let tokens: Vec<&str> = header.split_whitespace().collect();
    let bad_header =
        || Error::parse(path, header_line, "expected header `tcs-faults v1 <num_tests> <num_faults>`");
    if tokens.len() != 4 || tokens[0] != "tcs-faults" || tokens[1] != "v1" {
        return Err(bad_header());
    }
    let num_tests: usize = tokens[2].parse().map_err(|_| bad_header())?;
    let num_faults: usize = tokens[3].parse().map_err(|_| bad_header())?;
    if num_tests == 0 {
        return Err(Error::parse(path, header_line, "num_tests must be at least 1"));
    }

    if rows.len() != num_tests {
        let at = rows.last().map(|&(l, _)| l).unwrap_or(header_line);
        return Err(Error::parse(
            path,
            at,
            format!("header declares {num_tests} tests but file has {} test lines", rows.len()),
        ));
    }

    let mut test_ids = Vec::with_capacity(num_tests);
    let mut detects = BitMatrix::zeros(num_tests, num_faults);
    for (row, &(line, body)) in rows.iter().enumerate() {
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::parse(path, line, "expected `<test_id> F:<indices>`"));
        }
        test_ids.push(tokens[0].to_string());
        parse_index_list(tokens[1], "F:", num_faults, path, line, |i| {
            detects.set(row, i, true)
        })?;
    }

    FaultMatrix::new(test_ids, detects)
}

fn parse_index_list(
    token: &str,
    prefix: &str,
    bound: usize,
    path: &Path,
    line: usize,
    mut set: impl FnMut(usize),
) -> Result<()> {
    let list = token
        .strip_prefix(prefix)
        .ok_or_else(|| Error::parse(path, line, format!("expected `{prefix}<indices>`, got {token:?}")))?;
    if list.is_empty() {
        return Ok(());
    }
    for part in list.split(',') {
        let i: usize = part
            .parse()
            .map_err(|_| Error::parse(path, line, format!("invalid index {part:?} in {prefix} list")))?;
        if i >= bound {
            return Err(Error::parse(
                path,
                line,
                format!("index {i} out of range in {prefix} list (bound {bound})"),
            ));
        }
        set(i);
    }
    Ok(())
}

//! Test-suite optimization instances: loading, validation, synthesis, and
//! lossless compaction.
//!
//! An [`Instance`] couples per-test execution costs with two binary coverage
//! matrices (tests × statement entities, tests × branch entities). Raw
//! instances give every entity weight 1; [`Instance::compact`] merges entity
//! columns that are covered by exactly the same tests into single weighted
//! columns and drops never-covered columns, while the fixed total weights keep
//! every coverage fraction bit-identical to the raw computation.

mod io;
mod synth;

pub use io::{faults_to_string, instance_to_string, load_faults, load_instance, save_faults, save_instance};
pub use synth::{generate_synthetic, generate_synthetic_faults, Block, BlockSpec};

use crate::bits::{BitMatrix, BitVec};
use crate::{Error, Result};
use sha2::{Digest, Sha256};

/// One optimization problem: costs plus statement/branch coverage.
#[derive(Clone, PartialEq)]
pub struct Instance {
    name: String,
    test_ids: Vec<String>,
    cost: Vec<f64>,
    statement_cov: BitMatrix,
    branch_cov: BitMatrix,
    statement_weights: Vec<u64>,
    branch_weights: Vec<u64>,
    total_statement_weight: u64,
    total_branch_weight: u64,
    total_cost: f64,
    digest: String,
    compacted: bool,
}

impl Instance {
    /// Builds a raw instance (all entity weights 1) and validates invariants:
    /// at least one test, matching row counts, distinct test ids, finite
    /// non-negative costs with at least one positive, and at least one
    /// statement and one branch entity.
    pub fn new(
        name: String,
        test_ids: Vec<String>,
        cost: Vec<f64>,
        statement_cov: BitMatrix,
        branch_cov: BitMatrix,
    ) -> Result<Self> {
        let n = test_ids.len();
        if n == 0 {
            return Err(Error::Instance("instance must have at least one test".into()));
        }
        if cost.len() != n || statement_cov.rows() != n || branch_cov.rows() != n {
            return Err(Error::Instance(format!(
                "row counts disagree: {} ids, {} costs, {} statement rows, {} branch rows",
                n,
                cost.len(),
                statement_cov.rows(),
                branch_cov.rows()
            )));
        }
        if statement_cov.cols() == 0 || branch_cov.cols() == 0 {
            return Err(Error::Instance(
                "instance needs at least one statement and one branch entity".into(),
            ));
        }
        {
            let mut seen = std::collections::HashSet::new();
            for id in &test_ids {
                if id.is_empty() || id.chars().any(char::is_whitespace) {
                    return Err(Error::Instance(format!("invalid test id {id:?}")));
                }
                if !seen.insert(id) {
                    return Err(Error::Instance(format!("duplicate test id {id:?}")));
                }
            }
        }
        for (i, &c) in cost.iter().enumerate() {
            if !c.is_finite() || c < 0.0 {
                return Err(Error::Instance(format!(
                    "cost of test {} must be finite and non-negative, got {c}",
                    test_ids[i]
                )));
            }
        }
        let total_cost: f64 = cost.iter().sum();
        if total_cost <= 0.0 {
            return Err(Error::Instance("at least one test must have positive cost".into()));
        }

        let mut instance = Instance {
            name,
            statement_weights: vec![1; statement_cov.cols()],
            branch_weights: vec![1; branch_cov.cols()],
            total_statement_weight: statement_cov.cols() as u64,
            total_branch_weight: branch_cov.cols() as u64,
            total_cost,
            digest: String::new(),
            compacted: false,
            test_ids,
            cost,
            statement_cov,
            branch_cov,
        };
        instance.digest = {
            let mut hasher = Sha256::new();
            hasher.update(io::instance_to_string(&instance).expect("raw instance serializes"));
            let bytes = hasher.finalize();
            bytes.iter().map(|b| format!("{b:02x}")).collect()
        };
        Ok(instance)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn test_ids(&self) -> &[String] {
        &self.test_ids
    }

    pub fn num_tests(&self) -> usize {
        self.test_ids.len()
    }

    /// Current number of statement columns (shrinks under compaction).
    pub fn num_statements(&self) -> usize {
        self.statement_cov.cols()
    }

    /// Current number of branch columns (shrinks under compaction).
    pub fn num_branches(&self) -> usize {
        self.branch_cov.cols()
    }

    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    pub fn statement_cov(&self) -> &BitMatrix {
        &self.statement_cov
    }

    pub fn branch_cov(&self) -> &BitMatrix {
        &self.branch_cov
    }

    pub fn statement_weights(&self) -> &[u64] {
        &self.statement_weights
    }

    pub fn branch_weights(&self) -> &[u64] {
        &self.branch_weights
    }

    /// Raw (pre-compaction) statement entity count; fixed for the instance's
    /// lifetime and used as the coverage denominator.
    pub fn total_statement_weight(&self) -> u64 {
        self.total_statement_weight
    }

    /// Raw (pre-compaction) branch entity count.
    pub fn total_branch_weight(&self) -> u64 {
        self.total_branch_weight
    }

    /// SHA-256 of the canonical raw serialization; identifies the problem
    /// content independently of file name or compaction state.
    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn is_compacted(&self) -> bool {
        self.compacted
    }

    /// Merges identical coverage columns into weighted columns and drops
    /// never-covered columns, independently per criterion. Total weights (and
    /// therefore all objective values) are unchanged; applying it twice is a
    /// no-op.
    pub fn compact(&self) -> Instance {
        let (statement_cov, statement_weights) =
            compact_matrix(&self.statement_cov, &self.statement_weights);
        let (branch_cov, branch_weights) = compact_matrix(&self.branch_cov, &self.branch_weights);
        Instance {
            name: self.name.clone(),
            test_ids: self.test_ids.clone(),
            cost: self.cost.clone(),
            statement_cov,
            branch_cov,
            statement_weights,
            branch_weights,
            total_statement_weight: self.total_statement_weight,
            total_branch_weight: self.total_branch_weight,
            total_cost: self.total_cost,
            digest: self.digest.clone(),
            compacted: true,
        }
    }
}

impl std::fmt::Debug for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Instance")
            .field("name", &self.name)
            .field("num_tests", &self.num_tests())
            .field("num_statements", &self.num_statements())
            .field("num_branches", &self.num_branches())
            .field("compacted", &self.compacted)
            .finish()
    }
}

/// Groups equal columns (first-occurrence order), sums their weights, and
/// drops all-zero columns. Returns the rebuilt matrix and its weights.
fn compact_matrix(matrix: &BitMatrix, weights: &[u64]) -> (BitMatrix, Vec<u64>) {
    let rows = matrix.rows();
    let mut order: Vec<BitVec> = Vec::new();
    let mut merged: std::collections::HashMap<BitVec, usize> = std::collections::HashMap::new();
    let mut new_weights: Vec<u64> = Vec::new();
    for col in 0..matrix.cols() {
        let column = matrix.column(col);
        if column.count_ones() == 0 {
            continue;
        }
        match merged.get(&column) {
            Some(&slot) => new_weights[slot] += weights[col],
            None => {
                let slot = order.len();
                merged.insert(column.clone(), slot);
                order.push(column);
                new_weights.push(weights[col]);
            }
        }
    }
    let mut out = BitMatrix::zeros(rows, order.len());
    for (slot, column) in order.iter().enumerate() {
        for row in column.iter_ones() {
            out.set(row, slot, true);
        }
    }
    (out, new_weights)
}

/// Fault-detection data paired with an instance: one row per test, one column
/// per seeded fault.
#[derive(Clone, PartialEq)]
pub struct FaultMatrix {
    test_ids: Vec<String>,
    detects: BitMatrix,
}

impl FaultMatrix {
    /// Validates shape: ids distinct and one row per id.
    pub fn new(test_ids: Vec<String>, detects: BitMatrix) -> Result<Self> {
        if test_ids.is_empty() {
            return Err(Error::Instance("fault matrix needs at least one test".into()));
        }
        if detects.rows() != test_ids.len() {
            return Err(Error::Instance(format!(
                "fault matrix has {} rows for {} test ids",
                detects.rows(),
                test_ids.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for id in &test_ids {
            if id.is_empty() || id.chars().any(char::is_whitespace) || !seen.insert(id) {
                return Err(Error::Instance(format!("invalid or duplicate test id {id:?}")));
            }
        }
        Ok(FaultMatrix { test_ids, detects })
    }

    pub fn test_ids(&self) -> &[String] {
        &self.test_ids
    }

    pub fn num_tests(&self) -> usize {
        self.test_ids.len()
    }

    pub fn num_faults(&self) -> usize {
        self.detects.cols()
    }

    pub fn detects(&self) -> &BitMatrix {
        &self.detects
    }

    /// Checks that this matrix can be paired with `instance` (same test count
    /// and ids in the same order).
    pub fn validate_against(&self, instance: &Instance) -> Result<()> {
        if self.num_tests() != instance.num_tests() {
            return Err(Error::Instance(format!(
                "fault matrix covers {} tests but instance {} has {}",
                self.num_tests(),
                instance.name(),
                instance.num_tests()
            )));
        }
        if self.test_ids != instance.test_ids() {
            return Err(Error::Instance(format!(
                "fault matrix test ids do not match instance {}",
                instance.name()
            )));
        }
        Ok(())
    }
}

impl std::fmt::Debug for FaultMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FaultMatrix")
            .field("num_tests", &self.num_tests())
            .field("num_faults", &self.num_faults())
            .finish()
    }
}

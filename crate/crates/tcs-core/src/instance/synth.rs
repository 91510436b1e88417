//! Seeded synthetic instance and fault-matrix generation.
//!
//! Without block structure the generator produces a flat random instance:
//! moderate coverage density and independent per-test costs. With a
//! [`BlockSpec`] it plants linkage structure: each block is a group of cheap
//! tests that are the only ones covering the block's entities, so selecting
//! the whole group is far better than any partial selection — a recombination
//! operator that keeps such groups intact has a genuine advantage there.
//!
//! All randomness flows through one seeded stream in a fixed order (costs,
//! then statement rows, then branch rows, then completion fixes), so equal
//! arguments and seed always produce byte-identical instances.

use super::{FaultMatrix, Instance};
use crate::bits::BitMatrix;
use crate::sampling::choose_k;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::ops::Range;

/// Fraction of its own block's entities each block test covers on average.
const IN_BLOCK_DENSITY: f64 = 0.6;
/// Coverage density of non-block tests over non-block entities.
const BACKGROUND_DENSITY: f64 = 0.03;
/// Coverage density when no block structure is requested.
const OPEN_DENSITY: f64 = 0.25;
/// Cost range for block tests (cheap, so complete blocks are attractive).
const BLOCK_TEST_COST: Range<f64> = 0.3..0.9;
/// Cost range for non-block tests in a block-structured instance.
const BACKGROUND_TEST_COST: Range<f64> = 2.0..8.0;
/// Cost range when no block structure is requested.
const OPEN_COST: Range<f64> = 0.5..5.0;

/// One planted group: `tests` are the only tests covering `statements` and
/// `branches`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub tests: Range<usize>,
    pub statements: Range<usize>,
    pub branches: Range<usize>,
}

/// A set of non-overlapping planted blocks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockSpec {
    pub blocks: Vec<Block>,
}

impl BlockSpec {
    /// Lays out `num_blocks` equal blocks consecutively from index 0:
    /// block `k` owns tests `[k·t, (k+1)·t)`, statements `[k·s, (k+1)·s)`,
    /// branches `[k·b, (k+1)·b)`.
    pub fn tiled(num_blocks: usize, tests_per_block: usize, statements_per_block: usize, branches_per_block: usize) -> Self {
        let blocks = (0..num_blocks)
            .map(|k| Block {
                tests: k * tests_per_block..(k + 1) * tests_per_block,
                statements: k * statements_per_block..(k + 1) * statements_per_block,
                branches: k * branches_per_block..(k + 1) * branches_per_block,
            })
            .collect();
        BlockSpec { blocks }
    }

    /// Checks bounds, non-empty test ranges, at least one entity per block,
    /// and pairwise disjointness of the test/statement/branch ranges.
    pub fn validate(&self, num_tests: usize, num_statements: usize, num_branches: usize) -> Result<()> {
        for (k, b) in self.blocks.iter().enumerate() {
            if b.tests.is_empty() {
                return Err(Error::Config(format!("block {k} has an empty test range")));
            }
            if b.statements.is_empty() && b.branches.is_empty() {
                return Err(Error::Config(format!("block {k} covers no entities")));
            }
            if b.tests.start > b.tests.end || b.tests.end > num_tests {
                return Err(Error::Config(format!(
                    "block {k} test range {:?} exceeds num_tests {num_tests}",
                    b.tests
                )));
            }
            if b.statements.start > b.statements.end || b.statements.end > num_statements {
                return Err(Error::Config(format!(
                    "block {k} statement range {:?} exceeds num_statements {num_statements}",
                    b.statements
                )));
            }
            if b.branches.start > b.branches.end || b.branches.end > num_branches {
                return Err(Error::Config(format!(
                    "block {k} branch range {:?} exceeds num_branches {num_branches}",
                    b.branches
                )));
            }
        }
        check_disjoint(self.blocks.iter().map(|b| b.tests.clone()), "test")?;
        check_disjoint(self.blocks.iter().map(|b| b.statements.clone()), "statement")?;
        check_disjoint(self.blocks.iter().map(|b| b.branches.clone()), "branch")?;
        Ok(())
    }
}

fn check_disjoint(ranges: impl Iterator<Item = Range<usize>>, what: &str) -> Result<()> {
    let mut spans: Vec<Range<usize>> = ranges.filter(|r| !r.is_empty()).collect();
    spans.sort_by_key(|r| r.start);
    for pair in spans.windows(2) {
        if pair[1].start < pair[0].end {
            return Err(Error::Config(format!(
                "overlapping block {what} ranges {:?} and {:?}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

/// Per-index block membership: `owner[i] = Some(block)` or `None` for
/// background indices.
fn ownership(len: usize, ranges: impl Iterator<Item = Range<usize>>) -> Vec<Option<usize>> {
    let mut owner = vec![None; len];
    for (k, r) in ranges.enumerate() {
        for i in r {
            owner[i] = Some(k);
        }
    }
    owner
}

/// Generates a deterministic synthetic instance.
///
/// `blocks` plants linkage structure as described in the module docs; without
/// it every test draws coverage uniformly at density [`OPEN_DENSITY`]. Every
/// test is guaranteed to cover at least one entity, and with blocks each
/// block's entities are guaranteed to be fully covered by the union of its
/// tests.
pub fn generate_synthetic(
    name: &str,
    num_tests: usize,
    num_statements: usize,
    num_branches: usize,
    blocks: Option<&BlockSpec>,
    seed: u64,
) -> Result<Instance> {
    if num_tests == 0 || num_statements == 0 || num_branches == 0 {
        return Err(Error::Config("all counts must be at least 1".into()));
    }
    if let Some(spec) = blocks {
        spec.validate(num_tests, num_statements, num_branches)?;
    }
    let spec = blocks.map(|s| s.blocks.as_slice()).unwrap_or(&[]);

    let test_owner = ownership(num_tests, spec.iter().map(|b| b.tests.clone()));
    let stmt_owner = ownership(num_statements, spec.iter().map(|b| b.statements.clone()));
    let branch_owner = ownership(num_branches, spec.iter().map(|b| b.branches.clone()));
    let background_stmts: Vec<usize> = (0..num_statements).filter(|&i| stmt_owner[i].is_none()).collect();
    let background_branches: Vec<usize> = (0..num_branches).filter(|&i| branch_owner[i].is_none()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let cost: Vec<f64> = (0..num_tests)
        .map(|t| {
            let range = if spec.is_empty() {
                OPEN_COST
            } else if test_owner[t].is_some() {
                BLOCK_TEST_COST
            } else {
                BACKGROUND_TEST_COST
            };
            rng.gen_range(range)
        })
        .collect();

    // A test's entity pool: its block's entities for block tests, the
    // background for the rest, everything when no blocks exist.
    let pool_stmts = |t: usize| -> Vec<usize> {
        match test_owner[t] {
            Some(k) => spec[k].statements.clone().collect(),
            None if spec.is_empty() => (0..num_statements).collect(),
            None => background_stmts.clone(),
        }
    };
    let pool_branches = |t: usize| -> Vec<usize> {
        match test_owner[t] {
            Some(k) => spec[k].branches.clone().collect(),
            None if spec.is_empty() => (0..num_branches).collect(),
            None => background_branches.clone(),
        }
    };
    let density = |t: usize| -> f64 {
        if spec.is_empty() {
            OPEN_DENSITY
        } else if test_owner[t].is_some() {
            IN_BLOCK_DENSITY
        } else {
            BACKGROUND_DENSITY
        }
    };

    let mut statement_cov = BitMatrix::zeros(num_tests, num_statements);
    for t in 0..num_tests {
        let p = density(t);
        for s in pool_stmts(t) {
            if rng.gen_bool(p) {
                statement_cov.set(t, s, true);
            }
        }
    }
    let mut branch_cov = BitMatrix::zeros(num_tests, num_branches);
    for t in 0..num_tests {
        let p = density(t);
        for b in pool_branches(t) {
            if rng.gen_bool(p) {
                branch_cov.set(t, b, true);
            }
        }
    }

    // Completion: every block entity must be covered by some test of its
    // block, so full group selection really achieves full block coverage.
    for block in spec {
        let span = block.tests.len();
        for s in block.statements.clone() {
            if !block.tests.clone().any(|t| statement_cov.get(t, s)) {
                statement_cov.set(block.tests.start + rng.gen_range(0..span), s, true);
            }
        }
        for b in block.branches.clone() {
            if !block.tests.clone().any(|t| branch_cov.get(t, b)) {
                branch_cov.set(block.tests.start + rng.gen_range(0..span), b, true);
            }
        }
    }

    // Every test must cover something, or it is pure dead weight.
    for t in 0..num_tests {
        let empty = statement_cov.row_ones(t).next().is_none() && branch_cov.row_ones(t).next().is_none();
        if !empty {
            continue;
        }
        let stmts = pool_stmts(t);
        let branches = pool_branches(t);
        if stmts.is_empty() && branches.is_empty() {
            return Err(Error::Config(format!(
                "test {t} has no entities available outside the declared blocks"
            )));
        }
        let pick = rng.gen_range(0..stmts.len() + branches.len());
        if pick < stmts.len() {
            statement_cov.set(t, stmts[pick], true);
        } else {
            branch_cov.set(t, branches[pick - stmts.len()], true);
        }
    }

    let test_ids = (0..num_tests).map(|t| format!("t{t}")).collect();
    Instance::new(name.to_string(), test_ids, cost, statement_cov, branch_cov)
}

/// Generates a deterministic synthetic fault matrix for an instance.
///
/// Each fault is anchored to a random covered statement entity and detected by
/// a random non-empty subset (at most `max_detectors`) of the tests covering
/// that entity — fault detection therefore correlates with coverage, and every
/// fault is detectable by only a few tests.
pub fn generate_synthetic_faults(
    instance: &Instance,
    num_faults: usize,
    max_detectors: usize,
    seed: u64,
) -> Result<FaultMatrix> {
    if max_detectors == 0 {
        return Err(Error::Config("max_detectors must be at least 1".into()));
    }
    let covered: Vec<usize> = (0..instance.num_statements())
        .filter(|&s| instance.statement_cov().column(s).count_ones() > 0)
        .collect();
    if num_faults > 0 && covered.is_empty() {
        return Err(Error::Config("instance has no covered statement entity to anchor faults".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut detects = BitMatrix::zeros(instance.num_tests(), num_faults);
    for f in 0..num_faults {
        let s = covered[rng.gen_range(0..covered.len())];
        let covering: Vec<usize> = instance.statement_cov().column(s).iter_ones().collect();
        let k = rng.gen_range(1..=max_detectors.min(covering.len()));
        for pick in choose_k(&mut rng, covering.len(), k) {
            detects.set(covering[pick], f, true);
        }
    }
    FaultMatrix::new(instance.test_ids().to_vec(), detects)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::io::instance_to_string;

    #[test]
    fn same_seed_gives_byte_identical_instances() {
        let a = generate_synthetic("d", 20, 35, 11, None, 1).unwrap();
        let b = generate_synthetic("d", 20, 35, 11, None, 1).unwrap();
        assert_eq!(instance_to_string(&a).unwrap(), instance_to_string(&b).unwrap());
        let c = generate_synthetic("d", 20, 35, 11, None, 2).unwrap();
        assert_ne!(instance_to_string(&a).unwrap(), instance_to_string(&c).unwrap());
    }

    #[test]
    fn block_union_coverage_is_complete() {
        let spec = BlockSpec {
            blocks: vec![Block { tests: 0..3, statements: 0..10, branches: 0..2 }],
        };
        let inst = generate_synthetic("b", 8, 20, 6, Some(&spec), 4).unwrap();
        for s in 0..10 {
            assert!((0..3).any(|t| inst.statement_cov().get(t, s)), "statement {s} uncovered");
        }
        for b in 0..2 {
            assert!((0..3).any(|t| inst.branch_cov().get(t, b)), "branch {b} uncovered");
        }
        // Exclusivity: only block tests touch block entities.
        for t in 3..8 {
            for s in 0..10 {
                assert!(!inst.statement_cov().get(t, s));
            }
        }
    }

    #[test]
    fn every_test_covers_at_least_one_entity() {
        let inst = generate_synthetic("nonempty", 12, 24, 8, None, 7).unwrap();
        for t in 0..12 {
            let any = inst.statement_cov().row_ones(t).next().is_some()
                || inst.branch_cov().row_ones(t).next().is_some();
            assert!(any, "test {t} covers nothing");
        }
    }

    #[test]
    fn invalid_block_specs_are_rejected() {
        let overlapping = BlockSpec {
            blocks: vec![
                Block { tests: 0..3, statements: 0..5, branches: 0..0 },
                Block { tests: 2..5, statements: 5..10, branches: 0..0 },
            ],
        };
        assert!(generate_synthetic("x", 10, 20, 4, Some(&overlapping), 1).is_err());

        let oversized = BlockSpec {
            blocks: vec![Block { tests: 0..15, statements: 0..5, branches: 0..0 }],
        };
        assert!(generate_synthetic("x", 10, 20, 4, Some(&oversized), 1).is_err());

        let empty_tests = BlockSpec {
            blocks: vec![Block { tests: 3..3, statements: 0..5, branches: 0..0 }],
        };
        assert!(generate_synthetic("x", 10, 20, 4, Some(&empty_tests), 1).is_err());
    }

    #[test]
    fn tiled_layout_is_disjoint_and_valid() {
        let spec = BlockSpec::tiled(4, 5, 15, 5);
        assert_eq!(spec.blocks.len(), 4);
        assert_eq!(spec.blocks[3].tests, 15..20);
        assert_eq!(spec.blocks[3].statements, 45..60);
        spec.validate(40, 120, 40).unwrap();
    }

    #[test]
    fn faults_have_few_coverage_correlated_detectors() {
        let inst = generate_synthetic("f", 30, 60, 20, None, 3).unwrap();
        let faults = generate_synthetic_faults(&inst, 15, 3, 9).unwrap();
        assert_eq!(faults.num_faults(), 15);
        for f in 0..15 {
            let detectors = faults.detects().column(f).count_ones();
            assert!((1..=3).contains(&detectors), "fault {f} has {detectors} detectors");
        }
        let again = generate_synthetic_faults(&inst, 15, 3, 9).unwrap();
        assert!(again == faults, "deterministic per seed");
    }
}

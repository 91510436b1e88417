//! Solution encoding, objective evaluation, and Pareto dominance.
//!
//! A candidate sub-suite is a [`Chromosome`]: one bit per test, set iff the
//! test is selected. [`evaluate`] maps a chromosome to a three-component
//! [`ObjectiveVector`] in minimization form:
//!
//! ```text
//! [ selected cost / total cost,  1 − statement coverage,  1 − branch coverage ]
//! ```
//!
//! Coverage is the weight of entities covered by the union of the selected
//! tests divided by the instance's fixed total weight, so values are identical
//! on raw and compacted instances.

use crate::bits::{weighted_ones, BitVec};
use crate::instance::Instance;

/// Fixed-length bit vector over tests; bit `i` = 1 iff test `i` is selected.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chromosome {
    bits: BitVec,
}

impl Chromosome {
    /// All-zero selection of the given length.
    pub fn empty(num_tests: usize) -> Self {
        Chromosome {
            bits: BitVec::zeros(num_tests),
        }
    }

    /// Each bit drawn independently with probability 0.5.
    pub fn random(num_tests: usize, rng: &mut impl rand::Rng) -> Self {
        Chromosome {
            bits: BitVec::random(num_tests, rng),
        }
    }

    pub fn from_bits(bits: BitVec) -> Self {
        Chromosome { bits }
    }

    /// Parses a `01` string; `None` on any other character or empty input.
    pub fn from_bitstring(s: &str) -> Option<Self> {
        if s.is_empty() {
            return None;
        }
        let mut bits = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits.set(i, true),
                _ => return None,
            }
        }
        Some(Chromosome { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits.set(i, value);
    }

    pub fn flip(&mut self, i: usize) {
        self.bits.flip(i);
    }

    /// Number of selected tests.
    pub fn count_selected(&self) -> usize {
        self.bits.count_ones()
    }

    /// Indices of selected tests, ascending.
    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn bits_mut(&mut self) -> &mut BitVec {
        &mut self.bits
    }
}

impl std::fmt::Display for Chromosome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.bits)
    }
}

impl std::fmt::Debug for Chromosome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.bits)
    }
}

/// Objective values in minimization form; the optimizer produces arity 3,
/// indicator functions accept any arity.
#[derive(Clone, PartialEq, Debug)]
pub struct ObjectiveVector {
    values: Vec<f64>,
}

impl ObjectiveVector {
    /// Wraps raw values. All components must be finite.
    pub fn new(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        ObjectiveVector { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn arity(&self) -> usize {
        self.values.len()
    }

    /// Squared Euclidean distance to another vector of the same arity.
    pub fn distance_sq(&self, other: &ObjectiveVector) -> f64 {
        debug_assert_eq!(self.arity(), other.arity());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// Total order for deterministic sorting/deduplication: lexicographic on
    /// components (all values are finite by construction).
    pub fn lex_cmp(&self, other: &ObjectiveVector) -> std::cmp::Ordering {
        for (a, b) in self.values.iter().zip(&other.values) {
            match a.partial_cmp(b).expect("objective values are finite") {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.arity().cmp(&other.arity())
    }
}

/// Evaluates a chromosome on an instance.
///
/// Cost is normalized by the whole suite's cost; coverage components are
/// `1 − covered_weight / total_weight` per criterion, so every component lies
/// in `[0, 1]` and smaller is better.
///
/// # Panics
/// If the chromosome length differs from the instance's test count.
pub fn evaluate(chromosome: &Chromosome, instance: &Instance) -> ObjectiveVector {
    assert_eq!(
        chromosome.len(),
        instance.num_tests(),
        "chromosome length {} does not match instance test count {}",
        chromosome.len(),
        instance.num_tests()
    );

    let mut cost = 0.0;
    let mut stmt_union = vec![0u64; instance.statement_cov().words_per_row()];
    let mut branch_union = vec![0u64; instance.branch_cov().words_per_row()];
    for t in chromosome.selected() {
        cost += instance.cost()[t];
        instance.statement_cov().or_row_into(t, &mut stmt_union);
        instance.branch_cov().or_row_into(t, &mut branch_union);
    }

    let stmt_covered = weighted_ones(&stmt_union, instance.statement_weights());
    let branch_covered = weighted_ones(&branch_union, instance.branch_weights());

    ObjectiveVector::new(vec![
        cost / instance.total_cost(),
        1.0 - stmt_covered as f64 / instance.total_statement_weight() as f64,
        1.0 - branch_covered as f64 / instance.total_branch_weight() as f64,
    ])
}

/// Pareto dominance in minimization form: `a` dominates `b` iff `a` is no
/// worse in every component and strictly better in at least one.
///
/// # Panics
/// If the arities differ.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    assert_eq!(a.arity(), b.arity(), "dominance requires equal arity");
    let mut strictly_better = false;
    for (x, y) in a.values().iter().zip(b.values()) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

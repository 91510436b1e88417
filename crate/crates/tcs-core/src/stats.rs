//! Statistical comparison of repeated runs: Wilcoxon rank-sum test and the
//! Vargha–Delaney A12 effect size, plus the median/quartile summaries used in
//! comparison reports.

use crate::{Error, Result};

/// A labeled set of observations, one per independent run.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    label: String,
    values: Vec<f64>,
}

impl SampleSet {
    /// # Errors
    /// If `values` is empty or contains a non-finite number.
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if values.is_empty() {
            return Err(Error::Sample(format!("sample set '{label}' is empty")));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Sample(format!(
                "sample set '{label}' contains non-finite value {bad}"
            )));
        }
        Ok(SampleSet { label, values })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // enforced non-empty at construction
    }
}

/// Midranks of the concatenation `a ++ b`: ties share the average of the
/// positions they occupy (1-based).
fn midranks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len() + b.len();
    let mut order: Vec<usize> = (0..n).collect();
    let value = |i: usize| if i < a.len() { a[i] } else { b[i - a.len()] };
    order.sort_by(|&x, &y| value(x).partial_cmp(&value(y)).expect("finite samples"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && value(order[j + 1]) == value(order[i]) {
            j += 1;
        }
        // Positions i..=j (0-based) hold ranks i+1..=j+1; average them.
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Exact permutation p-value: enumerate every way to assign `n1` of the `n`
/// observed ranks to the first sample and count assignments at least as
/// extreme (in |rank sum − mean|) as observed. Exact even under ties, because
/// the enumeration conditions on the observed midranks.
fn exact_two_sided_p(ranks: &[f64], n1: usize, observed_dev: f64) -> f64 {
    let n = ranks.len();
    let mean = n1 as f64 * (n as f64 + 1.0) / 2.0;
    let mut extreme = 0u64;
    let mut total = 0u64;
    // Lexicographic combination walk over index subsets of size n1.
    let mut idx: Vec<usize> = (0..n1).collect();
    loop {
        let w: f64 = idx.iter().map(|&i| ranks[i]).sum();
        total += 1;
        // Ranks are multiples of 0.5, so deviations are too; the epsilon only
        // absorbs float noise, never a genuinely smaller deviation.
        if (w - mean).abs() >= observed_dev - 1e-9 {
            extreme += 1;
        }
        let mut i = n1;
        while i > 0 && idx[i - 1] == n - n1 + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..n1 {
            idx[j] = idx[j - 1] + 1;
        }
    }
    extreme as f64 / total as f64
}

/// Normal-approximation p-value with tie-corrected variance and a 0.5
/// continuity correction.
fn approx_two_sided_p(ranks: &[f64], a_len: usize, b_len: usize, observed_dev: f64) -> f64 {
    let n = ranks.len() as f64;
    let (n1, n2) = (a_len as f64, b_len as f64);
    // Tie correction: group sizes t over the pooled sample contribute t³ − t.
    let mut sorted = ranks.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite ranks"));
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if variance <= 0.0 {
        return 1.0; // every observation tied: no evidence either way
    }
    let z = (observed_dev - 0.5).max(0.0) / variance.sqrt();
    libm::erfc(z / std::f64::consts::SQRT_2).min(1.0)
}

/// Two-sided Wilcoxon rank-sum (Mann–Whitney) p-value for the hypothesis
/// that the two samples come from the same distribution.
///
/// Uses exact permutation enumeration when the pooled size is at most 12
/// (ties included — midranks are enumerated as observed), otherwise the
/// normal approximation with tie-corrected variance and continuity
/// correction. Always in (0, 1].
pub fn wilcoxon_rank_sum(a: &SampleSet, b: &SampleSet) -> f64 {
    let ranks = midranks(a.values(), b.values());
    let n = ranks.len();
    let n1 = a.len();
    let w: f64 = ranks[..n1].iter().sum();
    let mean = n1 as f64 * (n as f64 + 1.0) / 2.0;
    let observed_dev = (w - mean).abs();
    if n <= 12 {
        exact_two_sided_p(&ranks, n1, observed_dev)
    } else {
        approx_two_sided_p(&ranks, n1, b.len(), observed_dev)
    }
}

/// Effect-size label for an A12 value, by distance from 0.5.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Magnitude {
    Negligible,
    Small,
    Medium,
    Large,
}

impl Magnitude {
    /// Standard thresholds: |A12 − 0.5| below 0.06 / 0.14 / 0.21 is
    /// negligible / small / medium; anything at or beyond a threshold falls
    /// in the larger class. The epsilon absorbs float rounding at the
    /// boundaries (e.g. 0.71 − 0.5 lands just below 0.21); real A12 values
    /// are rationals too coarse for it to ever flip a genuine interior case.
    pub fn from_a12(a12: f64) -> Magnitude {
        const EPS: f64 = 1e-9;
        let d = (a12 - 0.5).abs();
        if d < 0.06 - EPS {
            Magnitude::Negligible
        } else if d < 0.14 - EPS {
            Magnitude::Small
        } else if d < 0.21 - EPS {
            Magnitude::Medium
        } else {
            Magnitude::Large
        }
    }
}

impl std::fmt::Display for Magnitude {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Magnitude::Negligible => "negligible",
            Magnitude::Small => "small",
            Magnitude::Medium => "medium",
            Magnitude::Large => "large",
        })
    }
}

/// Vargha–Delaney A12: the probability that a random observation from `a`
/// exceeds one from `b`, counting ties as half. 0.5 means no effect; values
/// above favor `a`. Returns the statistic with its magnitude label.
pub fn vargha_delaney_a12(a: &SampleSet, b: &SampleSet) -> (f64, Magnitude) {
    let mut favorable = 0.0;
    for &x in a.values() {
        for &y in b.values() {
            if x > y {
                favorable += 1.0;
            } else if x == y {
                favorable += 0.5;
            }
        }
    }
    let a12 = favorable / (a.len() as f64 * b.len() as f64);
    (a12, Magnitude::from_a12(a12))
}

/// Quantile of pre-sorted data by linear interpolation between closest ranks
/// (the `h = (n−1)p` convention).
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (h - lo as f64)
}

/// Median by linear interpolation.
///
/// # Panics
/// On an empty slice.
pub fn median(values: &[f64]) -> f64 {
    let (_, q2, _) = quartiles(values);
    q2
}

/// (Q1, median, Q3) by linear interpolation between closest ranks.
///
/// # Panics
/// On an empty slice.
pub fn quartiles(values: &[f64]) -> (f64, f64, f64) {
    assert!(!values.is_empty(), "quartiles of an empty slice");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    (
        quantile_sorted(&sorted, 0.25),
        quantile_sorted(&sorted, 0.5),
        quantile_sorted(&sorted, 0.75),
    )
}

//! Elitist non-dominated-sorting GA machinery and the baseline algorithm.
//!
//! The building blocks are exposed individually (initialization, fast
//! non-dominated sorting, crowding distance, binary tournament, scattered
//! crossover, bit-flip mutation, environmental selection) so they can be
//! oracle-tested in isolation; [`run_nsga2`] wires them into the standard
//! generational loop. The linkage-learning variant reuses the same loop with a
//! different recombination operator (see [`crate::linkage::run_l2nsga`]).

mod result;
mod run;

pub use result::RunResult;
pub use run::{run_nsga2, run_with_variation, Variation};

use crate::instance::Instance;
use crate::objectives::{dominates, evaluate, Chromosome, ObjectiveVector};
use crate::{Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Which optimizer a run uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Nsga2,
    L2Nsga,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Nsga2 => "nsga2",
            Algorithm::L2Nsga => "l2nsga",
        })
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nsga2" => Ok(Algorithm::Nsga2),
            "l2nsga" => Ok(Algorithm::L2Nsga),
            other => Err(Error::Config(format!(
                "unknown algorithm {other:?} (expected nsga2 or l2nsga)"
            ))),
        }
    }
}

/// Which solutions the linkage model is learned from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkageSource {
    /// The whole current population (default).
    Population,
    /// Only the current first non-dominated front.
    FirstFront,
}

impl std::fmt::Display for LinkageSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LinkageSource::Population => "population",
            LinkageSource::FirstFront => "first_front",
        })
    }
}

impl std::str::FromStr for LinkageSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "population" => Ok(LinkageSource::Population),
            "first_front" => Ok(LinkageSource::FirstFront),
            other => Err(Error::Config(format!(
                "unknown linkage source {other:?} (expected population or first_front)"
            ))),
        }
    }
}

/// Run parameters. Defaults: population 100, budget 20 000 evaluations,
/// crossover probability 0.8, mutation probability 1/num_tests.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub population_size: usize,
    /// Total `evaluate` calls allowed, the initial population included.
    pub max_evaluations: usize,
    pub crossover_probability: f64,
    /// `None` resolves to 1/num_tests at run time.
    pub mutation_probability: Option<f64>,
    pub linkage_source: LinkageSource,
    /// When `Some(k)`, the first front is recorded every `k` generations.
    pub snapshot_every: Option<usize>,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, seed: u64) -> Self {
        RunConfig {
            algorithm,
            seed,
            population_size: 100,
            max_evaluations: 20_000,
            crossover_probability: 0.8,
            mutation_probability: None,
            linkage_source: LinkageSource::Population,
            snapshot_every: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 || self.population_size % 2 != 0 {
            return Err(Error::Config(format!(
                "population_size must be even and at least 2, got {}",
                self.population_size
            )));
        }
        if self.max_evaluations < self.population_size {
            return Err(Error::Config(format!(
                "max_evaluations {} is below population_size {}",
                self.max_evaluations, self.population_size
            )));
        }
        if !(0.0..=1.0).contains(&self.crossover_probability) {
            return Err(Error::Config(format!(
                "crossover_probability must lie in [0,1], got {}",
                self.crossover_probability
            )));
        }
        if let Some(pm) = self.mutation_probability {
            if !(0.0..=1.0).contains(&pm) {
                return Err(Error::Config(format!(
                    "mutation_probability must lie in [0,1], got {pm}"
                )));
            }
        }
        if self.snapshot_every == Some(0) {
            return Err(Error::Config("snapshot_every must be at least 1".into()));
        }
        Ok(())
    }

    /// The per-bit mutation probability actually used for `num_tests` genes.
    pub fn resolved_mutation_probability(&self, num_tests: usize) -> f64 {
        self.mutation_probability.unwrap_or(1.0 / num_tests as f64)
    }
}

/// A chromosome with its objective values and the transient sorting state
/// (front rank, crowding distance) the selection operators read.
#[derive(Clone, Debug)]
pub struct EvaluatedSolution {
    pub chromosome: Chromosome,
    pub objectives: ObjectiveVector,
    /// 1-based front index; 0 until assigned by sorting.
    pub rank: usize,
    pub crowding: f64,
}

impl EvaluatedSolution {
    pub fn new(chromosome: Chromosome, instance: &Instance) -> Self {
        let objectives = evaluate(&chromosome, instance);
        EvaluatedSolution { chromosome, objectives, rank: 0, crowding: 0.0 }
    }
}

/// Draws `size` uniform-random chromosomes and evaluates them.
pub fn initial_population(
    size: usize,
    instance: &Instance,
    rng: &mut ChaCha8Rng,
) -> Vec<EvaluatedSolution> {
    (0..size)
        .map(|_| EvaluatedSolution::new(Chromosome::random(instance.num_tests(), rng), instance))
        .collect()
}

/// Partitions the population into non-dominated fronts (Deb's fast sort) and
/// writes 1-based ranks back. Returns the fronts as index lists; within a
/// front, original order is preserved.
///
/// # Panics
/// On an empty population.
pub fn fast_nondominated_sort(population: &mut [EvaluatedSolution]) -> Vec<Vec<usize>> {
    assert!(!population.is_empty(), "cannot sort an empty population");
    let n = population.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&population[i].objectives, &population[j].objectives) {
                dominated_by[i].push(j);
                domination_count[j] += 1;
            } else if dominates(&population[j].objectives, &population[i].objectives) {
                dominated_by[j].push(i);
                domination_count[i] += 1;
            }
        }
    }

    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        for &i in &current {
            population[i].rank = fronts.len() + 1;
        }
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::take(&mut current));
        current = next;
    }
    fronts
}

/// Assigns crowding distances to the members of one front (given by index
/// into `population`).
///
/// Per objective, the front is sorted by value; the two extreme members gain
/// `+inf` and interior members gain the normalized gap between their
/// neighbors. An objective that is constant across the front contributes
/// nothing. Members tied on an objective value are ordered by their index.
pub fn crowding_distance(population: &mut [EvaluatedSolution], front: &[usize]) {
    for &i in front {
        population[i].crowding = 0.0;
    }
    if front.len() <= 2 {
        for &i in front {
            population[i].crowding = f64::INFINITY;
        }
        return;
    }
    let arity = population[front[0]].objectives.arity();
    let mut order: Vec<usize> = front.to_vec();
    for k in 0..arity {
        order.sort_by(|&a, &b| {
            let va = population[a].objectives.values()[k];
            let vb = population[b].objectives.values()[k];
            va.partial_cmp(&vb).expect("finite objectives").then(a.cmp(&b))
        });
        let lo = population[*order.first().expect("non-empty front")].objectives.values()[k];
        let hi = population[*order.last().expect("non-empty front")].objectives.values()[k];
        if hi == lo {
            continue;
        }
        population[order[0]].crowding = f64::INFINITY;
        population[order[order.len() - 1]].crowding = f64::INFINITY;
        for w in 1..order.len() - 1 {
            let prev = population[order[w - 1]].objectives.values()[k];
            let next = population[order[w + 1]].objectives.values()[k];
            population[order[w]].crowding += (next - prev) / (hi - lo);
        }
    }
}

/// Binary tournament: draws two distinct members uniformly; lower rank wins,
/// rank ties go to larger crowding, full ties are settled by a fair coin.
/// Returns the winner's index.
///
/// # Panics
/// If the population has fewer than two members.
pub fn tournament_select(population: &[EvaluatedSolution], rng: &mut ChaCha8Rng) -> usize {
    assert!(population.len() >= 2, "tournament needs at least two members");
    let i = rng.gen_range(0..population.len());
    let mut j = rng.gen_range(0..population.len() - 1);
    if j >= i {
        j += 1;
    }
    let (a, b) = (&population[i], &population[j]);
    if a.rank != b.rank {
        return if a.rank < b.rank { i } else { j };
    }
    if a.crowding != b.crowding {
        return if a.crowding > b.crowding { i } else { j };
    }
    if rng.gen_bool(0.5) {
        i
    } else {
        j
    }
}

/// Uniform (scattered) crossover: every child gene comes from either parent
/// with a fair coin.
///
/// # Panics
/// On length mismatch.
pub fn scattered_crossover(p1: &Chromosome, p2: &Chromosome, rng: &mut ChaCha8Rng) -> Chromosome {
    assert_eq!(p1.len(), p2.len(), "parents must have equal length");
    let mask = crate::bits::BitVec::random(p1.len(), rng);
    let mut child = p1.clone();
    for ((c, &d), &m) in child
        .bits_mut()
        .words_mut()
        .iter_mut()
        .zip(p2.bits().words())
        .zip(mask.words())
    {
        *c = (*c & m) | (d & !m);
    }
    child
}

/// Flips each bit independently with probability `p_m`.
pub fn bit_flip_mutation(c: &Chromosome, p_m: f64, rng: &mut ChaCha8Rng) -> Chromosome {
    debug_assert!((0.0..=1.0).contains(&p_m));
    let mut out = c.clone();
    for i in 0..out.len() {
        if rng.gen_bool(p_m) {
            out.flip(i);
        }
    }
    out
}

/// Elitist reduction of parents ∪ offspring to `population_size` survivors:
/// whole fronts are taken in rank order; the first front that does not fit is
/// truncated by descending crowding distance (ties broken by position, parents
/// before offspring). Survivors keep the rank/crowding computed on the
/// combined population.
pub fn environmental_selection(
    parents: Vec<EvaluatedSolution>,
    offspring: Vec<EvaluatedSolution>,
    population_size: usize,
) -> Vec<EvaluatedSolution> {
    let mut combined = parents;
    combined.extend(offspring);
    assert!(
        combined.len() >= population_size,
        "need at least population_size candidates"
    );

    let fronts = fast_nondominated_sort(&mut combined);
    let mut chosen: Vec<usize> = Vec::with_capacity(population_size);
    for front in &fronts {
        crowding_distance(&mut combined, front);
        if chosen.len() + front.len() <= population_size {
            chosen.extend_from_slice(front);
            if chosen.len() == population_size {
                break;
            }
        } else {
            let mut by_crowding = front.clone();
            by_crowding.sort_by(|&a, &b| {
                combined[b]
                    .crowding
                    .partial_cmp(&combined[a].crowding)
                    .expect("crowding is never NaN")
                    .then(a.cmp(&b))
            });
            by_crowding.truncate(population_size - chosen.len());
            chosen.extend(by_crowding);
            break;
        }
    }

    let mut slots: Vec<Option<EvaluatedSolution>> = combined.into_iter().map(Some).collect();
    chosen
        .into_iter()
        .map(|i| slots[i].take().expect("each survivor chosen once"))
        .collect()
}

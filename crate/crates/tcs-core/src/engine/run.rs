//! The shared generational loop.
//!
//! Per generation: a parent (and, when the crossover coin succeeds, a donor)
//! is chosen by binary tournament, recombined by the run's [`Variation`],
//! mutated, and evaluated; once `population_size` offspring exist (or the
//! evaluation budget runs out first), environmental selection reduces parents
//! plus offspring back to `population_size`. The loop stops exactly when
//! `max_evaluations` evaluations have been spent, the initial population
//! included, so the last generation may be partial.

use super::{
    bit_flip_mutation, environmental_selection, fast_nondominated_sort, initial_population,
    scattered_crossover, tournament_select, Algorithm, EvaluatedSolution, RunConfig, RunResult,
};
use crate::instance::Instance;
use crate::objectives::{Chromosome, ObjectiveVector};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A recombination strategy plugged into the generational loop.
pub trait Variation {
    /// Called once at the start of each offspring generation (0-based), after
    /// ranks and crowding are assigned, before any offspring is produced.
    fn begin_generation(&mut self, _generation: usize, _population: &[EvaluatedSolution]) {}

    /// Produces a child from a parent and a donor.
    fn recombine(
        &mut self,
        parent: &Chromosome,
        donor: &Chromosome,
        rng: &mut ChaCha8Rng,
    ) -> Chromosome;

    /// How many times a linkage model was inferred (0 for model-free variation).
    fn linkage_inferences(&self) -> usize {
        0
    }
}

/// Plain scattered (uniform) crossover — the baseline's variation.
struct Scattered;

impl Variation for Scattered {
    fn recombine(
        &mut self,
        parent: &Chromosome,
        donor: &Chromosome,
        rng: &mut ChaCha8Rng,
    ) -> Chromosome {
        scattered_crossover(parent, donor, rng)
    }
}

/// Runs the baseline algorithm (scattered crossover).
pub fn run_nsga2(config: &RunConfig, instance: &Instance) -> Result<RunResult> {
    if config.algorithm != Algorithm::Nsga2 {
        return Err(crate::Error::Config(format!(
            "run_nsga2 called with algorithm {}",
            config.algorithm
        )));
    }
    run_with_variation(config, instance, &mut Scattered)
}

/// Runs the generational loop with an arbitrary [`Variation`].
///
/// The whole run consumes one sequential RNG stream seeded from
/// `config.seed`; evaluations are pure, so results are identical no matter
/// how callers schedule independent runs.
pub fn run_with_variation(
    config: &RunConfig,
    instance: &Instance,
    variation: &mut dyn Variation,
) -> Result<RunResult> {
    config.validate()?;
    let start = std::time::Instant::now();
    let p_m = config.resolved_mutation_probability(instance.num_tests());
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut population = initial_population(config.population_size, instance, &mut rng);
    let mut evaluations = population.len();
    let fronts = fast_nondominated_sort(&mut population);
    for front in &fronts {
        super::crowding_distance(&mut population, front);
    }

    let mut snapshots: Vec<(usize, Vec<(Chromosome, ObjectiveVector)>)> = Vec::new();
    if config.snapshot_every.is_some() {
        snapshots.push((0, first_front(&population)));
    }

    let mut generations = 0usize;
    while evaluations < config.max_evaluations {
        variation.begin_generation(generations, &population);
        let brood = config
            .population_size
            .min(config.max_evaluations - evaluations);
        let mut offspring = Vec::with_capacity(brood);
        for _ in 0..brood {
            let parent = tournament_select(&population, &mut rng);
            let child = if rng.gen_bool(config.crossover_probability) {
                let donor = tournament_select(&population, &mut rng);
                variation.recombine(
                    &population[parent].chromosome,
                    &population[donor].chromosome,
                    &mut rng,
                )
            } else {
                population[parent].chromosome.clone()
            };
            let mutated = bit_flip_mutation(&child, p_m, &mut rng);
            offspring.push(EvaluatedSolution::new(mutated, instance));
        }
        evaluations += offspring.len();
        population = environmental_selection(population, offspring, config.population_size);
        generations += 1;
        if let Some(k) = config.snapshot_every {
            if generations % k == 0 {
                snapshots.push((generations, first_front(&population)));
            }
        }
    }

    Ok(RunResult {
        algorithm: config.algorithm,
        seed: config.seed,
        instance_name: instance.name().to_string(),
        instance_digest: instance.digest().to_string(),
        num_tests: instance.num_tests(),
        population_size: config.population_size,
        max_evaluations: config.max_evaluations,
        crossover_probability: config.crossover_probability,
        mutation_probability: p_m,
        linkage_source: config.linkage_source,
        evaluations,
        generations,
        linkage_inferences: variation.linkage_inferences(),
        front: first_front(&population),
        population,
        snapshots,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// The rank-1 members as (chromosome, objectives) pairs, population order.
fn first_front(population: &[EvaluatedSolution]) -> Vec<(Chromosome, ObjectiveVector)> {
    population
        .iter()
        .filter(|s| s.rank == 1)
        .map(|s| (s.chromosome.clone(), s.objectives.clone()))
        .collect()
}

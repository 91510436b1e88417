//! Linkage learning and the linkage-guided recombination operator.
//!
//! The model is learned from the population's gene columns: the distance
//! between two genes is the hamming distance between their columns (in how
//! many members do the two bits differ), average-linkage agglomerative
//! clustering ([`upgma`]) turns the distance matrix into a binary merge tree,
//! and [`extract_fos`] reads the tree's subsets off as the family of subsets
//! (FOS) — every leaf plus every internal node except the root. Gene groups
//! that tend to be set together end up in the same subsets.
//!
//! [`l2_crossover`] then recombines by copying whole subsets: half of the FOS
//! is drawn at random and the donor's genes overwrite the parent's clone on
//! the union of the drawn subsets. [`run_l2nsga`] plugs this operator into the
//! engine's generational loop, re-learning the model every other generation.

use crate::bits::BitVec;
use crate::engine::{
    run_with_variation, Algorithm, EvaluatedSolution, LinkageSource, RunConfig, RunResult,
    Variation,
};
use crate::instance::Instance;
use crate::objectives::Chromosome;
use crate::sampling::choose_k;
use crate::{Error, Result};
use rand_chacha::ChaCha8Rng;

/// Symmetric gene-to-gene distance matrix with a zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneDistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl GeneDistanceMatrix {
    pub fn zeros(n: usize) -> Self {
        GeneDistanceMatrix { n, d: vec![0.0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// Sets the distance for both orientations of the pair.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(value >= 0.0 && value.is_finite());
        self.d[i * self.n + j] = value;
        self.d[j * self.n + i] = value;
    }
}

/// Computes pairwise gene distances from a population's gene columns:
/// `d[i][j]` = number of members whose bit `i` differs from bit `j`.
///
/// # Panics
/// On an empty population or unequal chromosome lengths.
pub fn gene_distances<'a, I>(population: I) -> GeneDistanceMatrix
where
    I: IntoIterator<Item = &'a Chromosome>,
{
    let chromosomes: Vec<&Chromosome> = population.into_iter().collect();
    assert!(!chromosomes.is_empty(), "gene distances need a non-empty population");
    let n = chromosomes[0].len();
    assert!(
        chromosomes.iter().all(|c| c.len() == n),
        "all chromosomes must have equal length"
    );

    let members = chromosomes.len();
    let columns: Vec<BitVec> = (0..n)
        .map(|gene| {
            let mut col = BitVec::zeros(members);
            for (m, c) in chromosomes.iter().enumerate() {
                if c.get(gene) {
                    col.set(m, true);
                }
            }
            col
        })
        .collect();

    let mut d = GeneDistanceMatrix::zeros(n);
    let words = columns[0].words().len();
    for i in 0..n {
        let wi = columns[i].words();
        for j in (i + 1)..n {
            let wj = columns[j].words();
            // Populations up to 128 members fit two words; give that case a
            // branch-free body.
            let diff = if words <= 2 {
                let mut acc = (wi[0] ^ wj[0]).count_ones();
                if words == 2 {
                    acc += (wi[1] ^ wj[1]).count_ones();
                }
                acc
            } else {
                wi.iter().zip(wj).map(|(a, b)| (a ^ b).count_ones()).sum()
            };
            d.set(i, j, diff as f64);
        }
    }
    d
}

/// One agglomeration step: clusters `left` and `right` (ids; `left < right`)
/// merged at `height` into a new cluster. Step `t` creates cluster id `n + t`;
/// leaves are ids `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
}

/// A complete UPGMA tree over `n` genes: `n − 1` merges ending in one root.
#[derive(Clone, Debug, PartialEq)]
pub struct LinkageTree {
    pub n: usize,
    pub merges: Vec<Merge>,
}

/// The Lance–Williams update for average linkage:
/// `dist(A ∪ B, C) = (|A|·dist(A,C) + |B|·dist(B,C)) / (|A| + |B|)`.
///
/// Exposed so oracle implementations can reproduce bit-identical heights.
pub fn average_linkage(size_a: usize, dist_a: f64, size_b: usize, dist_b: f64) -> f64 {
    (size_a as f64 * dist_a + size_b as f64 * dist_b) / (size_a + size_b) as f64
}

/// Full average-linkage agglomeration of the distance matrix.
///
/// Deterministic: among equal-distance candidates the pair with the
/// lexicographically smallest cluster ids is merged. Every slot caches its
/// nearest neighbor's key; merging can only raise distances to the merged
/// pair (average linkage is reducible), so a cached key whose neighbor was
/// merged away stays a valid lower bound and is marked stale instead of
/// being recomputed. Only a stale slot that surfaces as the global minimum
/// is rescanned, which keeps the whole agglomeration near O(n²).
///
/// # Panics
/// If the matrix has fewer than 2 genes.
pub fn upgma(d: &GeneDistanceMatrix) -> LinkageTree {
    let n = d.n();
    assert!(n >= 2, "clustering needs at least 2 genes");

    // Working state, indexed by slot (0..n). A merge keeps the smaller slot.
    let mut work: Vec<f64> = (0..n * n).map(|k| d.get(k / n, k % n)).collect();
    let mut size = vec![1usize; n];
    let mut id: Vec<usize> = (0..n).collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut alive_pos: Vec<usize> = (0..n).collect();

    // Per-slot cached nearest-neighbor candidate, split into parallel arrays
    // so the selection scan touches a dense f64 row.
    let mut nn_h = vec![f64::INFINITY; n];
    let mut nn_lo = vec![0usize; n];
    let mut nn_hi = vec![0usize; n];
    let mut nn_slot = vec![0usize; n];
    let mut stale = vec![false; n];

    // Best candidate of slot `i` over the alive slots: smallest height, ties
    // by (lo, hi) cluster ids.
    let rescan = |work: &[f64],
                  id: &[usize],
                  alive: &[usize],
                  i: usize|
     -> (usize, f64, usize, usize) {
        let row = &work[i * n..(i + 1) * n];
        let mut best_j = usize::MAX;
        let mut best_h = f64::INFINITY;
        let mut tied = false;
        for &j in alive {
            let h = row[j];
            if j != i {
                if h < best_h {
                    best_h = h;
                    best_j = j;
                    tied = false;
                } else if h == best_h {
                    tied = true;
                }
            }
        }
        let key = |j: usize| -> (usize, usize) {
            if id[i] < id[j] { (id[i], id[j]) } else { (id[j], id[i]) }
        };
        let (mut lo, mut hi) = key(best_j);
        if tied {
            for &j in alive {
                if j != i && j != best_j && row[j] == best_h {
                    let (l, h2) = key(j);
                    if (l, h2) < (lo, hi) {
                        lo = l;
                        hi = h2;
                        best_j = j;
                    }
                }
            }
        }
        (best_j, best_h, lo, hi)
    };

    for i in 0..n {
        let (j, h, lo, hi) = rescan(&work, &id, &alive, i);
        nn_slot[i] = j;
        nn_h[i] = h;
        nn_lo[i] = lo;
        nn_hi[i] = hi;
    }

    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        // Fresh global minimum among the cached keys; stale caches are lower
        // bounds, so one only needs rescanning when it surfaces as minimum.
        let (i, j, height, lo, hi) = loop {
            let mut bi = usize::MAX;
            let mut bh = f64::INFINITY;
            let mut tied = false;
            for &k in &alive {
                let h = nn_h[k];
                if h < bh {
                    bh = h;
                    bi = k;
                    tied = false;
                } else if h == bh {
                    tied = true;
                }
            }
            if tied {
                for &k in &alive {
                    if nn_h[k] == bh && k != bi && (nn_lo[k], nn_hi[k]) < (nn_lo[bi], nn_hi[bi]) {
                        bi = k;
                    }
                }
            }
            if stale[bi] {
                let (j, h, lo, hi) = rescan(&work, &id, &alive, bi);
                nn_slot[bi] = j;
                nn_h[bi] = h;
                nn_lo[bi] = lo;
                nn_hi[bi] = hi;
                stale[bi] = false;
                continue;
            }
            break (bi, nn_slot[bi], nn_h[bi], nn_lo[bi], nn_hi[bi]);
        };

        let (keep, drop) = if i < j { (i, j) } else { (j, i) };
        merges.push(Merge { left: lo, right: hi, height });

        // Remove `drop` from the alive list (swap-remove keeps it dense).
        let pos = alive_pos[drop];
        let moved = *alive.last().expect("alive list is non-empty");
        alive.swap_remove(pos);
        if pos < alive.len() {
            alive_pos[moved] = pos;
        }

        let new_id = n + step;
        let (size_keep, size_drop) = (size[keep], size[drop]);

        // Lance–Williams update of the kept slot's row/column, tracking the
        // kept slot's new nearest neighbor inline (its whole row changes, so
        // its cache must be rebuilt anyway).
        let mut kb_j = usize::MAX;
        let mut kb_h = f64::INFINITY;
        let mut kb_lo = usize::MAX;
        let mut kb_hi = usize::MAX;
        for &k in &alive {
            if k == keep {
                continue;
            }
            let updated = average_linkage(size_keep, work[keep * n + k], size_drop, work[drop * n + k]);
            work[keep * n + k] = updated;
            work[k * n + keep] = updated;
            if nn_slot[k] == keep || nn_slot[k] == drop {
                stale[k] = true;
            }
            let (lo_k, hi_k) = (id[k], new_id);
            if updated < kb_h || (updated == kb_h && (lo_k, hi_k) < (kb_lo, kb_hi)) {
                kb_h = updated;
                kb_j = k;
                kb_lo = lo_k;
                kb_hi = hi_k;
            }
        }
        size[keep] += size_drop;
        id[keep] = new_id;
        nn_slot[keep] = kb_j;
        nn_h[keep] = kb_h;
        nn_lo[keep] = kb_lo;
        nn_hi[keep] = kb_hi;
        stale[keep] = false;
    }

    LinkageTree { n, merges }
}

/// The family of subsets read off a linkage tree, with precomputed bit masks
/// for fast crossover.
#[derive(Clone, Debug, PartialEq)]
pub struct Fos {
    n: usize,
    subsets: Vec<Vec<usize>>,
    masks: Vec<BitVec>,
}

impl Fos {
    /// Builds a FOS from explicit subsets (used by tests and debugging tools;
    /// the optimizer builds its FOS from a tree via [`extract_fos`]).
    ///
    /// # Panics
    /// If a subset is empty or references a gene outside `0..n`.
    pub fn from_subsets(n: usize, subsets: Vec<Vec<usize>>) -> Self {
        let masks = subsets
            .iter()
            .map(|s| {
                assert!(!s.is_empty(), "FOS subsets must be non-empty");
                let mut mask = BitVec::zeros(n);
                for &gene in s {
                    assert!(gene < n, "gene index {gene} out of range");
                    mask.set(gene, true);
                }
                mask
            })
            .collect();
        Fos { n, subsets, masks }
    }

    /// Number of genes the FOS spans.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of subsets.
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    /// Subsets in FOS order (leaves first, then internal nodes by merge
    /// order); each subset's gene indices are ascending.
    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn mask(&self, index: usize) -> &BitVec {
        &self.masks[index]
    }

    /// Debug dump: one subset per line, gene indices ascending.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for subset in &self.subsets {
            let line: Vec<String> = subset.iter().map(|g| g.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Reads the FOS off a tree: the `n` leaf singletons, then each merge's union
/// in merge order, excluding the root (copying the root would clone the whole
/// donor). `|FOS| = 2n − 2` for `n ≥ 2`.
pub fn extract_fos(tree: &LinkageTree) -> Fos {
    let n = tree.n;
    let mut sets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for merge in &tree.merges {
        let mut union = sets[merge.left].clone();
        union.extend_from_slice(&sets[merge.right]);
        union.sort_unstable();
        sets.push(union);
    }
    // Drop the root (the last merge's set) when the tree has merges at all.
    if !tree.merges.is_empty() {
        sets.pop();
    } else if n == 1 {
        // A single gene has only the root singleton — nothing to recombine.
        sets.clear();
    }
    Fos::from_subsets(n, sets)
}

/// Model inference with the every-other-generation schedule: even generation
/// indices (0, 2, 4, …) learn a fresh model from the population (or its first
/// front, per `source`); odd indices return the cached model unchanged.
///
/// # Panics
/// If called on an odd generation without a cached model.
pub fn infer_model(
    population: &[EvaluatedSolution],
    generation: usize,
    cache: Option<Fos>,
    source: LinkageSource,
) -> Fos {
    if generation % 2 != 0 {
        return cache.expect("odd generation requires a cached model from the previous generation");
    }
    build_model(population, source)
}

/// Learns a FOS from the population right now, ignoring the schedule.
pub fn build_model(population: &[EvaluatedSolution], source: LinkageSource) -> Fos {
    assert!(!population.is_empty(), "cannot learn a model from an empty population");
    let selected: Vec<&Chromosome> = match source {
        LinkageSource::Population => population.iter().map(|s| &s.chromosome).collect(),
        LinkageSource::FirstFront => {
            let front: Vec<&Chromosome> = population
                .iter()
                .filter(|s| s.rank == 1)
                .map(|s| &s.chromosome)
                .collect();
            if front.is_empty() {
                // Ranks not assigned: fall back to everything.
                population.iter().map(|s| &s.chromosome).collect()
            } else {
                front
            }
        }
    };
    let n = selected[0].len();
    if n == 1 {
        return Fos::from_subsets(1, Vec::new());
    }
    extract_fos(&upgma(&gene_distances(selected)))
}

/// Subset-copying crossover: draws `K = ⌊|FOS|/2⌋` subsets uniformly without
/// replacement and copies the donor's genes over a clone of the parent on the
/// union of the drawn subsets; all other genes keep the parent's values.
///
/// # Panics
/// If the chromosome lengths do not match the FOS's gene count.
pub fn l2_crossover(
    parent: &Chromosome,
    donor: &Chromosome,
    fos: &Fos,
    rng: &mut ChaCha8Rng,
) -> Chromosome {
    assert_eq!(parent.len(), donor.len(), "parents must have equal length");
    assert_eq!(parent.len(), fos.n(), "chromosome length must match the FOS gene count");

    let mut child = parent.clone();
    let k = fos.len() / 2;
    if k == 0 {
        return child;
    }
    let mut mask = BitVec::zeros(parent.len());
    for pick in choose_k(rng, fos.len(), k) {
        for (w, &m) in mask.words_mut().iter_mut().zip(fos.mask(pick).words()) {
            *w |= m;
        }
    }
    for ((c, &d), &m) in child
        .bits_mut()
        .words_mut()
        .iter_mut()
        .zip(donor.bits().words())
        .zip(mask.words())
    {
        *c = (*c & !m) | (d & m);
    }
    child
}

/// The linkage-learning variation plugged into the engine loop.
struct L2Variation {
    source: LinkageSource,
    fos: Option<Fos>,
    inferences: usize,
}

impl Variation for L2Variation {
    fn begin_generation(&mut self, generation: usize, population: &[EvaluatedSolution]) {
        if generation % 2 == 0 {
            self.inferences += 1;
        }
        let cache = self.fos.take();
        self.fos = Some(infer_model(population, generation, cache, self.source));
    }

    fn recombine(
        &mut self,
        parent: &Chromosome,
        donor: &Chromosome,
        rng: &mut ChaCha8Rng,
    ) -> Chromosome {
        let fos = self.fos.as_ref().expect("model inferred at generation start");
        l2_crossover(parent, donor, fos, rng)
    }

    fn linkage_inferences(&self) -> usize {
        self.inferences
    }
}

/// Runs the linkage-learning variant: the engine's generational loop with
/// [`l2_crossover`] as recombination and model re-inference every other
/// generation.
pub fn run_l2nsga(config: &RunConfig, instance: &Instance) -> Result<RunResult> {
    if config.algorithm != Algorithm::L2Nsga {
        return Err(Error::Config(format!(
            "run_l2nsga called with algorithm {}",
            config.algorithm
        )));
    }
    let mut variation = L2Variation {
        source: config.linkage_source,
        fos: None,
        inferences: 0,
    };
    run_with_variation(config, instance, &mut variation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate_synthetic;
    use crate::objectives::ObjectiveVector;
    use rand::{Rng, SeedableRng};

    fn chrom(s: &str) -> Chromosome {
        Chromosome::from_bitstring(s).unwrap()
    }

    /// Naive O(n³) average-linkage clustering used as an oracle; scans all
    /// active id pairs each step and applies the same update formula.
    fn upgma_oracle(d: &GeneDistanceMatrix) -> LinkageTree {
        let n = d.n();
        let total = 2 * n - 1;
        let mut dist = vec![f64::NAN; total * total];
        for i in 0..n {
            for j in 0..n {
                dist[i * total + j] = d.get(i, j);
            }
        }
        let mut active: Vec<usize> = (0..n).collect();
        let mut size = vec![1usize; total];
        let mut merges = Vec::new();
        for step in 0..n - 1 {
            let mut best: Option<(f64, usize, usize)> = None;
            for (x, &a) in active.iter().enumerate() {
                for &b in &active[x + 1..] {
                    let (lo, hi) = (a.min(b), a.max(b));
                    let key = (dist[lo * total + hi], lo, hi);
                    let better = match &best {
                        None => true,
                        Some(bk) => {
                            key.0 < bk.0 || (key.0 == bk.0 && (key.1, key.2) < (bk.1, bk.2))
                        }
                    };
                    if better {
                        best = Some(key);
                    }
                }
            }
            let (height, left, right) = best.unwrap();
            let new = n + step;
            for &c in &active {
                if c == left || c == right {
                    continue;
                }
                let v = average_linkage(
                    size[left],
                    dist[left.min(c) * total + left.max(c)],
                    size[right],
                    dist[right.min(c) * total + right.max(c)],
                );
                dist[c.min(new) * total + c.max(new)] = v;
            }
            size[new] = size[left] + size[right];
            active.retain(|&c| c != left && c != right);
            active.push(new);
            active.sort_unstable();
            merges.push(Merge { left, right, height });
        }
        LinkageTree { n, merges }
    }

    #[test]
    fn gene_distances_hand_cases() {
        // Columns over 3 members: gene0 = [0,0,1], gene1 = [0,1,1].
        let pop = vec![chrom("00"), chrom("01"), chrom("11")];
        let d = gene_distances(pop.iter());
        assert_eq!(d.get(0, 1), 1.0);
        assert_eq!(d.get(1, 0), 1.0);
        assert_eq!(d.get(0, 0), 0.0);

        let same = vec![chrom("11"), chrom("00")];
        assert_eq!(gene_distances(same.iter()).get(0, 1), 0.0, "identical columns");
    }

    #[test]
    fn gene_distances_match_naive_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let pop: Vec<Chromosome> = (0..16).map(|_| Chromosome::random(8, &mut rng)).collect();
            let d = gene_distances(pop.iter());
            for i in 0..8 {
                for j in 0..8 {
                    let naive = pop.iter().filter(|c| c.get(i) != c.get(j)).count() as f64;
                    assert_eq!(d.get(i, j), naive);
                }
            }
        }
    }

    #[test]
    fn upgma_hand_example() {
        let mut d = GeneDistanceMatrix::zeros(3);
        d.set(0, 1, 1.0);
        d.set(0, 2, 4.0);
        d.set(1, 2, 5.0);
        let tree = upgma(&d);
        assert_eq!(
            tree.merges,
            vec![
                Merge { left: 0, right: 1, height: 1.0 },
                // d({0,1}, 2) = (4 + 5) / 2 = 4.5; new cluster id 3.
                Merge { left: 2, right: 3, height: 4.5 },
            ]
        );
    }

    #[test]
    fn equal_distances_merge_in_lexicographic_order() {
        let mut d = GeneDistanceMatrix::zeros(4);
        for i in 0..4 {
            for j in (i + 1)..4 {
                d.set(i, j, 2.0);
            }
        }
        let tree = upgma(&d);
        assert_eq!(tree.merges[0], Merge { left: 0, right: 1, height: 2.0 });
        assert_eq!(tree.merges[1], Merge { left: 2, right: 3, height: 2.0 });
        assert_eq!(tree.merges[2], Merge { left: 4, right: 5, height: 2.0 });
    }

    #[test]
    fn upgma_matches_naive_oracle_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..200 {
            let n = rng.gen_range(2..=10);
            let mut d = GeneDistanceMatrix::zeros(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    // Small integer distances provoke plenty of ties.
                    d.set(i, j, f64::from(rng.gen_range(0..6)));
                }
            }
            assert_eq!(upgma(&d), upgma_oracle(&d));
        }
    }

    #[test]
    fn merge_heights_never_decrease() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let n = rng.gen_range(2..=12);
            let mut d = GeneDistanceMatrix::zeros(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    d.set(i, j, rng.gen::<f64>() * 10.0);
                }
            }
            let tree = upgma(&d);
            for pair in tree.merges.windows(2) {
                assert!(pair[0].height <= pair[1].height + 1e-9);
            }
        }
    }

    #[test]
    fn fos_of_hand_example() {
        let mut d = GeneDistanceMatrix::zeros(3);
        d.set(0, 1, 1.0);
        d.set(0, 2, 4.0);
        d.set(1, 2, 5.0);
        let fos = extract_fos(&upgma(&d));
        assert_eq!(fos.subsets(), &[vec![0], vec![1], vec![2], vec![0, 1]]);
        assert_eq!(fos.dump(), "0\n1\n2\n0 1\n");
    }

    #[test]
    fn fos_of_two_genes_is_the_two_singletons() {
        let mut d = GeneDistanceMatrix::zeros(2);
        d.set(0, 1, 3.0);
        let fos = extract_fos(&upgma(&d));
        assert_eq!(fos.subsets(), &[vec![0], vec![1]]);
    }

    #[test]
    fn fos_structural_invariants_on_random_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let n = rng.gen_range(2..=14);
            let pop: Vec<Chromosome> = (0..20).map(|_| Chromosome::random(n, &mut rng)).collect();
            let tree = upgma(&gene_distances(pop.iter()));
            let fos = extract_fos(&tree);
            assert_eq!(fos.len(), 2 * n - 2);
            for subset in fos.subsets() {
                assert!(!subset.is_empty());
                assert!(subset.len() < n, "strict subset of the gene universe");
                assert!(subset.windows(2).all(|w| w[0] < w[1]), "sorted, distinct");
            }
            // Each internal subset is the union of its merge's children.
            let mut sets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
            for merge in &tree.merges {
                let mut union = sets[merge.left].clone();
                union.extend_from_slice(&sets[merge.right]);
                union.sort_unstable();
                sets.push(union);
            }
            for (k, merge) in tree.merges.iter().enumerate().take(n - 2) {
                let mut expected = sets[merge.left].clone();
                expected.extend_from_slice(&sets[merge.right]);
                expected.sort_unstable();
                assert_eq!(fos.subsets()[n + k], expected);
            }
        }
    }

    #[test]
    fn upgma_is_invariant_under_gene_relabeling() {
        use std::collections::BTreeSet;
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let n = rng.gen_range(3..=9);
            // Distinct distances: no ties, so structure is label-independent.
            let mut values: Vec<f64> = (1..=(n * (n - 1) / 2)).map(|v| v as f64).collect();
            for i in (1..values.len()).rev() {
                values.swap(i, rng.gen_range(0..=i));
            }
            let mut d = GeneDistanceMatrix::zeros(n);
            let mut it = values.iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    d.set(i, j, *it.next().unwrap());
                }
            }
            // Random permutation of gene labels.
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let mut dp = GeneDistanceMatrix::zeros(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    dp.set(perm[i], perm[j], d.get(i, j));
                }
            }
            let original: BTreeSet<BTreeSet<usize>> = extract_fos(&upgma(&d))
                .subsets()
                .iter()
                .map(|s| s.iter().copied().collect())
                .collect();
            let relabeled: BTreeSet<BTreeSet<usize>> = extract_fos(&upgma(&dp))
                .subsets()
                .iter()
                .map(|s| s.iter().map(|&g| perm.iter().position(|&p| p == g).unwrap()).collect())
                .collect();
            assert_eq!(original, relabeled);
        }
    }

    #[test]
    fn l2_crossover_copies_exactly_the_drawn_subsets() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..200 {
            let n = rng.gen_range(2..=12);
            let pop: Vec<Chromosome> = (0..10).map(|_| Chromosome::random(n, &mut rng)).collect();
            let fos = extract_fos(&upgma(&gene_distances(pop.iter())));
            let parent = Chromosome::random(n, &mut rng);
            let donor = Chromosome::random(n, &mut rng);
            // Replay the operator's draw with a cloned RNG to learn FOS_K.
            let mut replay = rng.clone();
            let child = l2_crossover(&parent, &donor, &fos, &mut rng);
            let chosen = choose_k(&mut replay, fos.len(), fos.len() / 2);
            let mut donor_genes = vec![false; n];
            for pick in chosen {
                for &g in &fos.subsets()[pick] {
                    donor_genes[g] = true;
                }
            }
            for g in 0..n {
                let expected = if donor_genes[g] { donor.get(g) } else { parent.get(g) };
                assert_eq!(child.get(g), expected, "gene {g}");
            }
        }
    }

    #[test]
    fn l2_crossover_forced_subset_copies_donor_genes() {
        // Both candidate subsets are {0,1}, so whichever is drawn the child
        // must take genes 0 and 1 from the donor.
        let fos = Fos::from_subsets(4, vec![vec![0, 1], vec![0, 1]]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let child = l2_crossover(&chrom("0000"), &chrom("1111"), &fos, &mut rng);
        assert_eq!(child.to_string(), "1100");
    }

    #[test]
    fn l2_crossover_identical_parents_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pop: Vec<Chromosome> = (0..8).map(|_| Chromosome::random(6, &mut rng)).collect();
        let fos = extract_fos(&upgma(&gene_distances(pop.iter())));
        let p = chrom("010110");
        assert_eq!(l2_crossover(&p, &p, &fos, &mut rng), p);
    }

    #[test]
    fn each_subset_is_drawn_with_probability_half() {
        let fos = Fos::from_subsets(6, (0..6).map(|g| vec![g]).collect());
        let parent = chrom("000000");
        let donor = chrom("111111");
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut hits = [0u32; 6];
        for _ in 0..1000 {
            let child = l2_crossover(&parent, &donor, &fos, &mut rng);
            for g in child.selected() {
                hits[g] += 1;
            }
        }
        for &h in &hits {
            let freq = f64::from(h) / 1000.0;
            assert!((freq - 0.5).abs() <= 0.05, "inclusion frequency {freq}");
        }
    }

    fn ranked_population(n_genes: usize, members: usize, seed: u64) -> Vec<EvaluatedSolution> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..members)
            .map(|m| EvaluatedSolution {
                chromosome: Chromosome::random(n_genes, &mut rng),
                objectives: ObjectiveVector::new(vec![rng.gen(), rng.gen()]),
                rank: if m % 3 == 0 { 1 } else { 2 },
                crowding: 0.0,
            })
            .collect()
    }

    #[test]
    fn infer_model_caches_on_odd_generations() {
        let pop = ranked_population(8, 20, 5);
        let g0 = infer_model(&pop, 0, None, LinkageSource::Population);
        let g1 = infer_model(&pop, 1, Some(g0.clone()), LinkageSource::Population);
        assert_eq!(g0, g1, "odd generation returns the cache");
        let changed = ranked_population(8, 20, 6);
        let g2 = infer_model(&changed, 2, Some(g1), LinkageSource::Population);
        assert_eq!(g2, build_model(&changed, LinkageSource::Population));
    }

    #[test]
    fn first_front_source_uses_only_rank_one_members() {
        let pop = ranked_population(8, 30, 9);
        let front_only: Vec<&Chromosome> = pop
            .iter()
            .filter(|s| s.rank == 1)
            .map(|s| &s.chromosome)
            .collect();
        let expected = extract_fos(&upgma(&gene_distances(front_only)));
        assert_eq!(build_model(&pop, LinkageSource::FirstFront), expected);
        assert_ne!(
            build_model(&pop, LinkageSource::Population),
            expected,
            "whole-population model should differ for this population"
        );
    }

    #[test]
    fn run_l2nsga_is_deterministic_and_counts_inferences() {
        let inst = generate_synthetic("l2", 16, 30, 10, None, 8).unwrap();
        let mut config = RunConfig::new(Algorithm::L2Nsga, 5);
        config.population_size = 20;
        config.max_evaluations = 300; // 14 offspring generations
        let a = run_l2nsga(&config, &inst).unwrap();
        let b = run_l2nsga(&config, &inst).unwrap();
        assert_eq!(a.to_result_string(), b.to_result_string());
        assert_eq!(a.generations, 14);
        assert_eq!(a.linkage_inferences, 7, "every other generation");
        assert_eq!(a.evaluations, 300);
    }

    #[test]
    fn run_l2nsga_rejects_wrong_algorithm_tag() {
        let inst = generate_synthetic("l2tag", 8, 16, 4, None, 1).unwrap();
        let config = RunConfig::new(Algorithm::Nsga2, 1);
        assert!(run_l2nsga(&config, &inst).is_err());
    }
}

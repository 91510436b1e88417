//! Seeded sampling helpers shared by variation operators and generators.

/// Draws `k` distinct indices from `0..n`, uniformly without replacement.
///
/// Implemented as a partial Fisher–Yates shuffle so the draw sequence is a
/// stable function of the RNG stream (no dependence on library internals).
/// The returned order is the draw order, not sorted.
pub(crate) fn choose_k(rng: &mut impl rand::Rng, n: usize, k: usize) -> Vec<usize> {
    debug_assert!(k <= n, "cannot draw {k} distinct values from 0..{n}");
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    idx.truncate(k);
    idx
}

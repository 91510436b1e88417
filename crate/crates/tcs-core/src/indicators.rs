//! Front quality indicators: reference fronts, inverted generational
//! distance, hypervolume, and the cost-effectiveness area under curve.
//!
//! A [`Front`] is a normalized set of mutually non-dominated objective
//! vectors, optionally paired with the chromosomes that produced them.
//! Normalization (dominance filter, exact-duplicate collapse, lexicographic
//! sort) happens in the constructors, so every function here can rely on it
//! and equal fronts compare equal regardless of construction order.

use crate::instance::{FaultMatrix, Instance};
use crate::objectives::{dominates, Chromosome, ObjectiveVector};
use crate::{Error, Result};

/// One front member: an objective vector, optionally with its chromosome.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontPoint {
    pub objectives: ObjectiveVector,
    pub chromosome: Option<Chromosome>,
}

/// A normalized non-dominated front.
///
/// Invariants (enforced on construction): no member dominates another, no two
/// members have identical objective vectors, and members are sorted
/// lexicographically by objective values.
#[derive(Clone, Debug, PartialEq)]
pub struct Front {
    points: Vec<FrontPoint>,
}

impl Front {
    /// Normalizes an arbitrary point collection into a front: dominated
    /// points and exact objective-vector duplicates are removed, the rest
    /// sorted lexicographically. Among duplicates the point with the
    /// lexicographically smallest chromosome string survives (points without
    /// a chromosome sort first), making the result independent of input
    /// order.
    pub fn from_points(points: Vec<FrontPoint>) -> Front {
        let mut kept: Vec<FrontPoint> = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let dominated = points
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && dominates(&q.objectives, &p.objectives));
            if !dominated {
                kept.push(p.clone());
            }
        }
        kept.sort_by(|a, b| {
            a.objectives.lex_cmp(&b.objectives).then_with(|| {
                let key = |p: &FrontPoint| p.chromosome.as_ref().map(|c| c.to_string());
                key(a).cmp(&key(b))
            })
        });
        kept.dedup_by(|a, b| a.objectives == b.objectives);
        Front { points: kept }
    }

    /// Front from `(chromosome, objectives)` pairs, as stored in run results.
    pub fn from_pairs(pairs: &[(Chromosome, ObjectiveVector)]) -> Front {
        Front::from_points(
            pairs
                .iter()
                .map(|(c, o)| FrontPoint {
                    objectives: o.clone(),
                    chromosome: Some(c.clone()),
                })
                .collect(),
        )
    }

    /// Front from bare objective vectors (no chromosomes attached).
    pub fn from_vectors(vectors: Vec<ObjectiveVector>) -> Front {
        Front::from_points(
            vectors
                .into_iter()
                .map(|objectives| FrontPoint { objectives, chromosome: None })
                .collect(),
        )
    }

    pub fn points(&self) -> &[FrontPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Objective arity, or `None` for an empty front.
    pub fn arity(&self) -> Option<usize> {
        self.points.first().map(|p| p.objectives.arity())
    }
}

/// A front built from the union of several fronts; the comparison baseline
/// for [`igd`].
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceFront {
    front: Front,
}

impl ReferenceFront {
    pub fn front(&self) -> &Front {
        &self.front
    }

    pub fn points(&self) -> &[FrontPoint] {
        self.front.points()
    }
}

/// Builds the reference front: the non-dominated subset of the union of all
/// input fronts, duplicates collapsed.
///
/// # Errors
/// If every input front is empty.
pub fn build_reference_front(fronts: &[Front]) -> Result<ReferenceFront> {
    let union: Vec<FrontPoint> = fronts.iter().flat_map(|f| f.points().iter().cloned()).collect();
    if union.is_empty() {
        return Err(Error::Indicator(
            "cannot build a reference front from empty fronts".into(),
        ));
    }
    Ok(ReferenceFront { front: Front::from_points(union) })
}

/// Inverted generational distance: the mean over reference points of the
/// minimum Euclidean distance to any front point. Lower is better; 0 means
/// the front covers every reference point.
///
/// # Errors
/// If the front is empty or the arities differ.
pub fn igd(front: &Front, reference: &ReferenceFront) -> Result<f64> {
    if front.is_empty() {
        return Err(Error::Indicator("IGD of an empty front".into()));
    }
    let arity = front.arity().expect("non-empty front has an arity");
    if reference.front().arity() != Some(arity) {
        return Err(Error::Indicator(format!(
            "arity mismatch: front has {arity} objectives, reference has {:?}",
            reference.front().arity()
        )));
    }
    let total: f64 = reference
        .points()
        .iter()
        .map(|r| {
            front
                .points()
                .iter()
                .map(|p| r.objectives.distance_sq(&p.objectives).sqrt())
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / reference.points().len() as f64)
}

/// Hypervolume: the exact Lebesgue measure of the region dominated by the
/// front and bounded by `reference_point`. Higher is better. Supports 1–3
/// objectives exactly (dimension sweep); more are rejected.
///
/// Points exceeding the reference point in any coordinate enclose no volume;
/// they are clipped out with a warning. An empty front (before or after
/// clipping) has hypervolume 0.
///
/// # Errors
/// If the arities differ, the reference point has more than 3 components, or
/// the reference point is non-finite.
pub fn hypervolume(front: &Front, reference_point: &[f64]) -> Result<f64> {
    let m = reference_point.len();
    if m == 0 || m > 3 {
        return Err(Error::Indicator(format!(
            "hypervolume supports 1 to 3 objectives, got {m}"
        )));
    }
    if reference_point.iter().any(|v| !v.is_finite()) {
        return Err(Error::Indicator("non-finite reference point".into()));
    }
    if let Some(arity) = front.arity() {
        if arity != m {
            return Err(Error::Indicator(format!(
                "arity mismatch: front has {arity} objectives, reference point has {m}"
            )));
        }
    }
    let mut clipped = 0usize;
    let points: Vec<&[f64]> = front
        .points()
        .iter()
        .filter_map(|p| {
            let v = p.objectives.values();
            if v.iter().zip(reference_point).any(|(x, r)| x > r) {
                clipped += 1;
                None
            } else {
                Some(v)
            }
        })
        .collect();
    if clipped > 0 {
        log::warn!("hypervolume: clipped {clipped} points exceeding the reference point");
    }
    if points.is_empty() {
        return Ok(0.0);
    }
    Ok(match m {
        1 => {
            let min = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            reference_point[0] - min
        }
        2 => hv2d(
            &points.iter().map(|p| (p[0], p[1])).collect::<Vec<_>>(),
            reference_point[0],
            reference_point[1],
        ),
        _ => hv3d(&points, reference_point),
    })
}

/// 2-D hypervolume by staircase sweep. Tolerates dominated and duplicate
/// points (they contribute nothing).
fn hv2d(points: &[(f64, f64)], ref_x: f64, ref_y: f64) -> f64 {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite objective values"));
    let mut area = 0.0;
    let mut prev_y = ref_y;
    for &(x, y) in &sorted {
        if y < prev_y {
            area += (ref_x - x) * (prev_y - y);
            prev_y = y;
        }
    }
    area
}

/// 3-D hypervolume: sweep slabs along the third coordinate, each slab's cross
/// section being the 2-D hypervolume of all points at or below it.
fn hv3d(points: &[&[f64]], r: &[f64]) -> f64 {
    let mut zs: Vec<f64> = points.iter().map(|p| p[2]).collect();
    zs.sort_by(|a, b| a.partial_cmp(b).expect("finite objective values"));
    zs.dedup();
    let mut volume = 0.0;
    for (k, &z) in zs.iter().enumerate() {
        let top = if k + 1 < zs.len() { zs[k + 1] } else { r[2] };
        if top <= z {
            continue;
        }
        let slab: Vec<(f64, f64)> = points
            .iter()
            .filter(|p| p[2] <= z)
            .map(|p| (p[0], p[1]))
            .collect();
        volume += hv2d(&slab, r[0], r[1]) * (top - z);
    }
    volume
}

/// Cost-effectiveness area under curve: how quickly fault detection
/// accumulates as budget grows.
///
/// For each front solution, its raw cost (sum of selected tests' costs) and
/// the number of distinct faults its selected tests detect are computed; the
/// right-continuous staircase `f(c)` = "most faults achievable at cost ≤ c"
/// is integrated from 0 to the instance's total cost and normalized by
/// `total_cost × num_faults`, yielding a value in [0, 1]. By convention the
/// result is 0 when the fault matrix has no faults.
///
/// # Errors
/// If a front point lacks a chromosome, a chromosome length does not match
/// the instance, or the fault matrix does not pair with the instance.
pub fn cost_effectiveness(
    front: &Front,
    instance: &Instance,
    faults: &FaultMatrix,
) -> Result<f64> {
    faults.validate_against(instance)?;
    if faults.num_faults() == 0 {
        return Ok(0.0);
    }
    let mut achieved: Vec<(f64, u32)> = Vec::with_capacity(front.len());
    for point in front.points() {
        let chromosome = point.chromosome.as_ref().ok_or_else(|| {
            Error::Indicator("cost-effectiveness needs chromosomes on every front point".into())
        })?;
        if chromosome.len() != instance.num_tests() {
            return Err(Error::Indicator(format!(
                "chromosome length {} does not match instance with {} tests",
                chromosome.len(),
                instance.num_tests()
            )));
        }
        let mut cost = 0.0;
        let mut detected = vec![0u64; faults.detects().words_per_row()];
        for test in chromosome.selected() {
            cost += instance.cost()[test];
            faults.detects().or_row_into(test, &mut detected);
        }
        let found: u32 = detected.iter().map(|w| w.count_ones()).sum();
        achieved.push((cost.min(instance.total_cost()), found));
    }
    achieved.sort_by(|a, b| a.partial_cmp(b).expect("finite costs"));

    let total_cost = instance.total_cost();
    let mut integral = 0.0;
    let mut best = 0u32;
    let mut at = 0.0;
    for &(cost, faults_found) in &achieved {
        if faults_found > best {
            integral += f64::from(best) * (cost - at);
            best = faults_found;
            at = cost;
        }
    }
    integral += f64::from(best) * (total_cost - at);
    Ok(integral / (total_cost * f64::from(faults.num_faults() as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn vecs(raw: &[&[f64]]) -> Vec<ObjectiveVector> {
        raw.iter().map(|v| ObjectiveVector::new(v.to_vec())).collect()
    }

    fn front(raw: &[&[f64]]) -> Front {
        Front::from_vectors(vecs(raw))
    }

    #[test]
    fn normalization_filters_sorts_and_dedups() {
        let f = front(&[&[2.0, 1.0], &[1.0, 2.0], &[2.0, 2.0], &[1.0, 2.0]]);
        let values: Vec<&[f64]> = f.points().iter().map(|p| p.objectives.values()).collect();
        assert_eq!(values, vec![&[1.0, 2.0][..], &[2.0, 1.0][..]]);
    }

    #[test]
    fn reference_front_hand_example() {
        let a = front(&[&[1.0, 2.0]]);
        let b = front(&[&[2.0, 1.0], &[1.0, 2.0], &[0.0, 3.0]]);
        let r = build_reference_front(&[a, b]).unwrap();
        let values: Vec<&[f64]> = r.points().iter().map(|p| p.objectives.values()).collect();
        assert_eq!(
            values,
            vec![&[0.0, 3.0][..], &[1.0, 2.0][..], &[2.0, 1.0][..]]
        );
    }

    #[test]
    fn reference_front_drops_dominated_union_members() {
        let a = front(&[&[2.0, 2.0]]);
        let b = front(&[&[1.0, 1.0]]);
        let r = build_reference_front(&[a, b]).unwrap();
        assert_eq!(r.points().len(), 1);
        assert_eq!(r.points()[0].objectives.values(), &[1.0, 1.0]);
    }

    #[test]
    fn reference_front_is_idempotent_and_order_insensitive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let fronts: Vec<Front> = (0..4)
                .map(|_| {
                    let pts: Vec<ObjectiveVector> = (0..rng.gen_range(1..6))
                        .map(|_| ObjectiveVector::new(vec![rng.gen(), rng.gen(), rng.gen()]))
                        .collect();
                    Front::from_vectors(pts)
                })
                .collect();
            let r = build_reference_front(&fronts).unwrap();
            let again = build_reference_front(&[r.front().clone()]).unwrap();
            assert_eq!(r, again, "idempotent");
            let mut reversed = fronts.clone();
            reversed.reverse();
            assert_eq!(r, build_reference_front(&reversed).unwrap(), "order-insensitive");
        }
    }

    #[test]
    fn reference_front_of_empty_fronts_is_an_error() {
        assert!(build_reference_front(&[]).is_err());
        assert!(build_reference_front(&[Front::from_vectors(vec![])]).is_err());
    }

    #[test]
    fn igd_of_front_against_itself_is_zero() {
        let f = front(&[&[0.0, 1.0], &[0.5, 0.5], &[1.0, 0.0]]);
        let r = build_reference_front(std::slice::from_ref(&f)).unwrap();
        assert_eq!(igd(&f, &r).unwrap(), 0.0);
    }

    #[test]
    fn igd_hand_example() {
        let r = build_reference_front(&[front(&[&[0.0, 1.0], &[1.0, 0.0]])]).unwrap();
        let f = front(&[&[0.5, 0.5]]);
        let expected = 0.5_f64.sqrt();
        assert!((igd(&f, &r).unwrap() - expected).abs() <= 1e-9);
    }

    #[test]
    fn igd_never_increases_when_covering_a_reference_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let r_pts: Vec<ObjectiveVector> = (0..4)
                .map(|_| ObjectiveVector::new(vec![rng.gen(), rng.gen()]))
                .collect();
            let r = build_reference_front(&[Front::from_vectors(r_pts.clone())]).unwrap();
            let f_pts: Vec<ObjectiveVector> = (0..3)
                .map(|_| ObjectiveVector::new(vec![rng.gen::<f64>() + 0.5, rng.gen::<f64>() + 0.5]))
                .collect();
            let base = Front::from_vectors(f_pts.clone());
            if base.is_empty() {
                continue;
            }
            let covered = r.points()[0].objectives.clone();
            let mut extended = f_pts;
            extended.push(covered);
            let bigger = Front::from_vectors(extended);
            assert!(igd(&bigger, &r).unwrap() <= igd(&base, &r).unwrap() + 1e-12);
        }
    }

    #[test]
    fn igd_rejects_empty_front_and_arity_mismatch() {
        let r = build_reference_front(&[front(&[&[0.0, 1.0]])]).unwrap();
        assert!(igd(&Front::from_vectors(vec![]), &r).is_err());
        assert!(igd(&front(&[&[0.0, 1.0, 2.0]]), &r).is_err());
    }

    #[test]
    fn hypervolume_unit_box() {
        let f = front(&[&[0.0, 0.0, 0.0]]);
        assert_eq!(hypervolume(&f, &[1.0, 1.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn hypervolume_hand_example_2d() {
        let f = front(&[&[0.2, 0.6], &[0.5, 0.3]]);
        let hv = hypervolume(&f, &[1.1, 1.1]).unwrap();
        assert!((hv - 0.63).abs() <= 1e-12, "got {hv}");
    }

    #[test]
    fn hypervolume_point_on_reference_is_zero() {
        let f = front(&[&[1.1, 1.1]]);
        assert_eq!(hypervolume(&f, &[1.1, 1.1]).unwrap(), 0.0);
    }

    #[test]
    fn hypervolume_clips_points_beyond_reference() {
        let f = front(&[&[0.5, 0.5], &[0.1, 2.0]]);
        // (0.1, 2.0) exceeds the reference in y; only (0.5, 0.5) counts.
        let hv = hypervolume(&f, &[1.0, 1.0]).unwrap();
        assert!((hv - 0.25).abs() <= 1e-12);
        // Everything clipped → 0.
        assert_eq!(hypervolume(&front(&[&[2.0, 2.0]]), &[1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn hypervolume_rejects_high_arity_and_mismatch() {
        let f = front(&[&[0.1, 0.2, 0.3, 0.4]]);
        assert!(hypervolume(&f, &[1.0, 1.0, 1.0, 1.0]).is_err());
        assert!(hypervolume(&front(&[&[0.1, 0.2]]), &[1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn hypervolume_monotone_under_point_addition() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let reference = [1.1, 1.1, 1.1];
        for _ in 0..100 {
            let base_pts: Vec<ObjectiveVector> = (0..4)
                .map(|_| ObjectiveVector::new(vec![rng.gen(), rng.gen(), rng.gen()]))
                .collect();
            let base = Front::from_vectors(base_pts.clone());
            let hv_base = hypervolume(&base, &reference).unwrap();

            // A dominated extra point changes nothing (normalization removes it).
            let anchor = base_pts[0].values().to_vec();
            let dominated = ObjectiveVector::new(anchor.iter().map(|v| v + 0.01).collect());
            let mut with_dominated = base_pts.clone();
            with_dominated.push(dominated);
            let hv_same = hypervolume(&Front::from_vectors(with_dominated), &reference).unwrap();
            assert_eq!(hv_base, hv_same);

            // Any extra point can only grow the measure.
            let mut with_extra = base_pts.clone();
            with_extra.push(ObjectiveVector::new(vec![rng.gen(), rng.gen(), rng.gen()]));
            let hv_more = hypervolume(&Front::from_vectors(with_extra), &reference).unwrap();
            assert!(hv_more >= hv_base - 1e-12);
        }
    }

    #[test]
    fn hypervolume_3d_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(1_203);
        let reference = [1.1, 1.1, 1.1];
        for _ in 0..10 {
            let pts: Vec<ObjectiveVector> = (0..rng.gen_range(1..=6))
                .map(|_| ObjectiveVector::new(vec![rng.gen(), rng.gen(), rng.gen()]))
                .collect();
            let f = Front::from_vectors(pts);
            let exact = hypervolume(&f, &reference).unwrap();

            let samples = 100_000u32;
            let mut hits = 0u32;
            for _ in 0..samples {
                let u = [
                    rng.gen::<f64>() * 1.1,
                    rng.gen::<f64>() * 1.1,
                    rng.gen::<f64>() * 1.1,
                ];
                if f.points().iter().any(|p| {
                    p.objectives.values().iter().zip(&u).all(|(x, s)| x <= s)
                }) {
                    hits += 1;
                }
            }
            let box_volume = 1.1_f64.powi(3);
            let p = f64::from(hits) / f64::from(samples);
            let estimate = box_volume * p;
            let sigma = box_volume * (p * (1.0 - p) / f64::from(samples)).sqrt();
            assert!(
                (estimate - exact).abs() <= 3.0 * sigma + 1e-9,
                "exact {exact} vs estimate {estimate} (sigma {sigma})"
            );
        }
    }

    /// 3 tests with costs 2, 6, 2 and two faults; detection rows chosen so the
    /// staircase integral is worked by hand below.
    fn ice_fixture() -> (Instance, FaultMatrix) {
        let mut stmt = BitMatrix::zeros(3, 3);
        stmt.set(0, 0, true);
        stmt.set(1, 1, true);
        stmt.set(2, 2, true);
        let branch = {
            let mut b = BitMatrix::zeros(3, 1);
            b.set(0, 0, true);
            b
        };
        let instance = Instance::new(
            "ice".into(),
            vec!["a".into(), "b".into(), "c".into()],
            vec![2.0, 6.0, 2.0],
            stmt,
            branch,
        )
        .unwrap();
        let mut detects = BitMatrix::zeros(3, 2);
        detects.set(0, 0, true); // test a finds fault 0
        detects.set(1, 0, true); // test b finds both
        detects.set(1, 1, true);
        let faults = FaultMatrix::new(
            vec!["a".into(), "b".into(), "c".into()],
            detects,
        )
        .unwrap();
        (instance, faults)
    }

    fn solution_front(instance: &Instance, masks: &[&str]) -> Front {
        Front::from_points(
            masks
                .iter()
                .map(|m| {
                    let c = Chromosome::from_bitstring(m).unwrap();
                    FrontPoint {
                        objectives: crate::objectives::evaluate(&c, instance),
                        chromosome: Some(c),
                    }
                })
                .collect(),
        )
    }

    #[test]
    fn cost_effectiveness_hand_example() {
        // Solutions: {a} → (cost 2, 1 fault); {a,b} → (cost 8, 2 faults).
        let (instance, faults) = ice_fixture();
        let f = solution_front(&instance, &["100", "110"]);
        // costs: 2 and 8; staircase: 0 on [0,2), 1 on [2,8), 2 on [8,10].
        // ∫ = 1·(8−2) + 2·(10−8) = 10; normalized by 10·2 = 20 → 0.5.
        let ice = cost_effectiveness(&f, &instance, &faults).unwrap();
        assert!((ice - 0.5).abs() <= 1e-12, "got {ice}");
    }

    #[test]
    fn cost_effectiveness_matches_spec_arithmetic() {
        // Cross-check of the step integration: achieved pairs (2, 1 fault)
        // and (6, 2 faults) over C_total = 10 and 2 faults must give
        // (0·2 + 1·4 + 2·4) / 20 = 0.6. Costs 2, 4, 4 total 10 and make the
        // two-test solution cost 6.
        let mut stmt = BitMatrix::zeros(3, 3);
        stmt.set(0, 0, true);
        stmt.set(1, 1, true);
        stmt.set(2, 2, true);
        let mut branch = BitMatrix::zeros(3, 1);
        branch.set(0, 0, true);
        let instance = Instance::new(
            "ice2".into(),
            vec!["a".into(), "b".into(), "c".into()],
            vec![2.0, 4.0, 4.0],
            stmt,
            branch,
        )
        .unwrap();
        let mut detects = BitMatrix::zeros(3, 2);
        detects.set(0, 0, true);
        detects.set(1, 0, true);
        detects.set(1, 1, true);
        let faults =
            FaultMatrix::new(vec!["a".into(), "b".into(), "c".into()], detects).unwrap();
        let f = solution_front(&instance, &["100", "110"]);
        let ice = cost_effectiveness(&f, &instance, &faults).unwrap();
        assert!((ice - 0.6).abs() <= 1e-12, "got {ice}");
    }

    #[test]
    fn cost_effectiveness_worst_and_best_cases() {
        let (instance, faults) = ice_fixture();
        // Only test c selected: detects nothing → 0.
        let nothing = solution_front(&instance, &["001"]);
        assert_eq!(cost_effectiveness(&nothing, &instance, &faults).unwrap(), 0.0);

        // A zero-cost solution detecting every fault → 1.
        let mut stmt = BitMatrix::zeros(2, 2);
        stmt.set(0, 0, true);
        stmt.set(1, 1, true);
        let mut branch = BitMatrix::zeros(2, 1);
        branch.set(0, 0, true);
        let utopia = Instance::new(
            "utopia".into(),
            vec!["free".into(), "paid".into()],
            vec![0.0, 5.0],
            stmt,
            branch,
        )
        .unwrap();
        let mut detects = BitMatrix::zeros(2, 1);
        detects.set(0, 0, true);
        let faults1 = FaultMatrix::new(vec!["free".into(), "paid".into()], detects).unwrap();
        let f = solution_front(&utopia, &["10"]);
        assert_eq!(cost_effectiveness(&f, &utopia, &faults1).unwrap(), 1.0);
    }

    #[test]
    fn cost_effectiveness_zero_faults_is_zero() {
        let (instance, _) = ice_fixture();
        let faults = FaultMatrix::new(
            vec!["a".into(), "b".into(), "c".into()],
            BitMatrix::zeros(3, 0),
        )
        .unwrap();
        let f = solution_front(&instance, &["110"]);
        assert_eq!(cost_effectiveness(&f, &instance, &faults).unwrap(), 0.0);
    }

    #[test]
    fn cost_effectiveness_rejects_mismatches() {
        let (instance, faults) = ice_fixture();
        // Chromosome of the wrong length.
        let short = Front::from_points(vec![FrontPoint {
            objectives: ObjectiveVector::new(vec![0.1, 0.2, 0.3]),
            chromosome: Some(Chromosome::from_bitstring("10").unwrap()),
        }]);
        assert!(cost_effectiveness(&short, &instance, &faults).is_err());
        // Missing chromosome.
        let bare = Front::from_vectors(vecs(&[&[0.1, 0.2, 0.3]]));
        assert!(cost_effectiveness(&bare, &instance, &faults).is_err());
        // Fault matrix from a different test suite.
        let other = FaultMatrix::new(
            vec!["x".into(), "y".into(), "z".into()],
            BitMatrix::zeros(3, 1),
        )
        .unwrap();
        let f = solution_front(&instance, &["100"]);
        assert!(cost_effectiveness(&f, &instance, &other).is_err());
    }

    #[test]
    fn cost_effectiveness_monotone_in_fault_detection() {
        let (instance, faults) = ice_fixture();
        // Weaker matrix: test b loses fault 1.
        let mut weaker = BitMatrix::zeros(3, 2);
        weaker.set(0, 0, true);
        weaker.set(1, 0, true);
        let weak = FaultMatrix::new(
            vec!["a".into(), "b".into(), "c".into()],
            weaker,
        )
        .unwrap();
        let f = solution_front(&instance, &["100", "110"]);
        let strong_ice = cost_effectiveness(&f, &instance, &faults).unwrap();
        let weak_ice = cost_effectiveness(&f, &instance, &weak).unwrap();
        assert!(strong_ice >= weak_ice);
    }
}

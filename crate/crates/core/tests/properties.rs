//! Property tests for the structural invariants of the core model and the
//! expression algebra, on small random systems.

use num::One;
use proptest::prelude::*;

use mvthresh_core::{
    boole_shannon_pre, check_total_symmetry, enumerate_mlvs, enumerate_muvs, pre_for,
    verify_boundary_minimality, Perspective, PreMethod, Ratio, StateCap, SystemSpec,
};

fn cap() -> StateCap {
    StateCap::default()
}

fn spec_strategy() -> impl Strategy<Value = SystemSpec> {
    (1usize..=4)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(1u32..=3, n),
                prop::collection::vec(0u64..=3, n),
            )
        })
        .prop_filter("at least one positive weight", |(_, weights)| {
            weights.iter().any(|&w| w > 0)
        })
        .prop_flat_map(|(max_states, weights)| {
            let max_sum: u64 = weights
                .iter()
                .zip(&max_states)
                .map(|(&w, &m)| w * u64::from(m))
                .sum();
            let levels = 1..=(max_sum.min(3) as usize);
            (Just(max_states), Just(weights), levels).prop_flat_map(
                move |(max_states, weights, levels)| {
                    prop::sample::subsequence((1..=max_sum).collect::<Vec<u64>>(), levels)
                        .prop_map(move |chosen| {
                            let mut thresholds = vec![0u64];
                            thresholds.extend(chosen);
                            SystemSpec::from_integers(&max_states, &weights, &thresholds)
                                .expect("generated spec is valid")
                        })
                },
            )
        })
}

proptest! {
    /// The threshold ranges partition the state space: every state lands in
    /// exactly the half-open range of its level, and level successes nest.
    #[test]
    fn levels_partition_and_nest(spec in spec_strategy()) {
        let sentinel = spec
            .weights()
            .iter()
            .zip(spec.max_states())
            .map(|(w, &m)| w * Ratio::from_integer(i64::from(m).into()))
            .sum::<Ratio>()
            + Ratio::one();
        for x in spec.states() {
            let level = spec.evaluate(&x).unwrap();
            let sum = spec.weighted_sum(&x).unwrap();
            prop_assert!(sum >= spec.thresholds()[level as usize]);
            let upper = spec
                .thresholds()
                .get(level as usize + 1)
                .cloned()
                .unwrap_or_else(|| sentinel.clone());
            prop_assert!(sum < upper);
            for j in 0..=spec.top_level() {
                prop_assert_eq!(spec.level_success(&x, j).unwrap(), j <= level);
            }
        }
    }

    /// The independent full-cone check accepts every enumerated set.
    #[test]
    fn enumerated_boundary_sets_survive_the_cone_check(spec in spec_strategy()) {
        for level in 1..=spec.top_level() {
            let muvs = enumerate_muvs(&spec, level, cap()).unwrap();
            prop_assert!(verify_boundary_minimality(&spec, &muvs, cap()).unwrap().is_ok());
            let mlvs = enumerate_mlvs(&spec, level - 1, cap()).unwrap();
            prop_assert!(verify_boundary_minimality(&spec, &mlvs, cap()).unwrap().is_ok());
        }
    }

    /// With equal weights and equal state counts the system is totally
    /// symmetric, boundary sets are permutation-closed, and orbit counts
    /// are multinomial coefficients.
    #[test]
    fn symmetric_systems_have_permutation_closed_boundaries(
        n in 2usize..=4,
        m in 1u32..=3,
        weight in 1u64..=3,
        seed in any::<u64>(),
    ) {
        let max_sum = weight * u64::from(m) * n as u64;
        let t1 = 1 + seed % max_sum;
        let spec = SystemSpec::from_integers(&vec![m; n], &vec![weight; n], &[0, t1]).unwrap();
        prop_assert!(check_total_symmetry(&spec, cap()).unwrap().totally_symmetric);

        let factorial = |k: usize| -> u64 { (1..=k as u64).product::<u64>().max(1) };
        let muvs = enumerate_muvs(&spec, 1, cap()).unwrap();
        for (rep, count) in &muvs.orbit_summary {
            // Multinomial: n! over the factorials of the value multiplicities.
            let mut mult = std::collections::HashMap::new();
            for &v in rep.values() {
                *mult.entry(v).or_insert(0usize) += 1;
            }
            let expected = mult
                .values()
                .fold(factorial(n), |acc, &c| acc / factorial(c));
            prop_assert_eq!(*count as u64, expected);
            // Closure: every permutation of the representative is a member.
            let mut sorted = rep.values().to_vec();
            sorted.sort_unstable();
            let mut perms = 0usize;
            loop {
                let candidate = mvthresh_core::StateVector::new(sorted.clone());
                if muvs.vectors.contains(&candidate) {
                    perms += 1;
                }
                if !next_permutation(&mut sorted) {
                    break;
                }
            }
            prop_assert_eq!(perms, *count);
        }
    }

    /// For any disjoint expression the cell counts add up to the denotation
    /// cardinality.
    #[test]
    fn disjoint_cell_counts_add_up(spec in spec_strategy()) {
        for level in 1..=spec.top_level() {
            for perspective in [Perspective::Success, Perspective::Failure] {
                let pre = pre_for(&spec, level, perspective, PreMethod::Shelling, cap()).unwrap();
                let total: u128 = pre
                    .expression
                    .terms
                    .iter()
                    .map(|t| t.cell_count(&spec))
                    .sum();
                let denotation = pre.expression.denotation(&spec, cap()).unwrap();
                prop_assert_eq!(total, denotation.len() as u128);
            }
        }
    }

    /// The expansion's merge pass preserves disjointness and meaning.
    #[test]
    fn expansion_stays_disjoint_after_merging(spec in spec_strategy()) {
        for level in 1..=spec.top_level() {
            let pre = boole_shannon_pre(&spec, level, Perspective::Success, cap()).unwrap();
            prop_assert!(mvthresh_core::is_pre(&pre, &spec).is_pre);
        }
    }
}

fn next_permutation(values: &mut [u32]) -> bool {
    let n = values.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && values[i - 1] >= values[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while values[j] <= values[i - 1] {
        j -= 1;
    }
    values.swap(i - 1, j);
    values[i..].reverse();
    true
}

//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Expected values are frozen from independent oracles computed here in
//! test code (generating-function coefficients, binomial tails, direct
//! state scans) or hand-checked on the reference fixture.

use std::collections::HashSet;

use num::{One, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use mvthresh_core::{
    assert_equivalent, build_table, check_coherence, enumerate_mlvs, enumerate_muvs, is_pre,
    level_probabilities_failure, level_probabilities_success, minimal_sop, pre_for,
    render_level_map, render_structure_map, ComponentDistribution, DistributionMode,
    LevelOverlays, LevelSelector, MapFormat, MapLayout, Perspective, PreMethod, ProductTerm,
    Ratio, StateCap, StateVector, SystemSpec,
};

fn cap() -> StateCap {
    StateCap::default()
}

fn running_example() -> SystemSpec {
    SystemSpec::from_integers(&[2, 2, 2, 2], &[1, 1, 1, 1], &[0, 2, 4, 6]).unwrap()
}

fn ratio(n: i64, d: i64) -> Ratio {
    Ratio::new(n.into(), d.into())
}

/// Independent oracle: coefficients of `prod_k (1 + x + ... + x^{m_k})`,
/// i.e. the number of states per weighted sum for unit weights.
fn sum_count_polynomial(max_states: &[u32]) -> Vec<u64> {
    let mut coeffs = vec![1u64];
    for &m in max_states {
        let mut next = vec![0u64; coeffs.len() + m as usize];
        for (i, &c) in coeffs.iter().enumerate() {
            for v in 0..=m as usize {
                next[i + v] += c;
            }
        }
        coeffs = next;
    }
    coeffs
}

/// Independent oracle: per-level state counts obtained by slicing the
/// sum-count polynomial at the thresholds.
fn level_counts_by_generating_function(max_states: &[u32], thresholds: &[u64]) -> Vec<u64> {
    let coeffs = sum_count_polynomial(max_states);
    let top: u64 = coeffs.len() as u64 - 1;
    let mut counts = Vec::new();
    for (j, &t) in thresholds.iter().enumerate() {
        let upper = thresholds.get(j + 1).copied().unwrap_or(top + 1);
        counts.push(
            (t..upper.min(top + 1))
                .map(|s| coeffs[s as usize])
                .sum(),
        );
    }
    counts
}

/// Direct test-side scan of the level set, independent of the expression
/// machinery.
fn scan_level_states(spec: &SystemSpec, keep: impl Fn(u32) -> bool) -> HashSet<Vec<u32>> {
    spec.states()
        .filter(|x| keep(spec.evaluate(x).unwrap()))
        .map(|x| x.values().to_vec())
        .collect()
}

fn denoted_states(spec: &SystemSpec, e: &mvthresh_core::SopExpression) -> HashSet<Vec<u32>> {
    e.denotation(spec, cap())
        .unwrap()
        .iter()
        .map(|i| spec.state_at(i).values().to_vec())
        .collect()
}

/// Hand-computed 9x9 level map of the reference system: rows are (X3, X4),
/// both in natural ascending order.
const LEVEL_MAP_9X9: [[u32; 9]; 9] = [
    [0, 0, 1, 0, 1, 1, 1, 1, 2],
    [0, 1, 1, 1, 1, 2, 1, 2, 2],
    [1, 1, 2, 1, 2, 2, 2, 2, 3],
    [0, 1, 1, 1, 1, 2, 1, 2, 2],
    [1, 1, 2, 1, 2, 2, 2, 2, 3],
    [1, 2, 2, 2, 2, 3, 2, 3, 3],
    [1, 1, 2, 1, 2, 2, 2, 2, 3],
    [1, 2, 2, 2, 2, 3, 2, 3, 3],
    [2, 2, 3, 2, 3, 3, 3, 3, 3],
];

/// Hand-computed 9x9 arithmetic-sum map, same layout.
const SUM_MAP_9X9: [[u32; 9]; 9] = [
    [0, 1, 2, 1, 2, 3, 2, 3, 4],
    [1, 2, 3, 2, 3, 4, 3, 4, 5],
    [2, 3, 4, 3, 4, 5, 4, 5, 6],
    [1, 2, 3, 2, 3, 4, 3, 4, 5],
    [2, 3, 4, 3, 4, 5, 4, 5, 6],
    [3, 4, 5, 4, 5, 6, 5, 6, 7],
    [2, 3, 4, 3, 4, 5, 4, 5, 6],
    [3, 4, 5, 4, 5, 6, 5, 6, 7],
    [4, 5, 6, 5, 6, 7, 6, 7, 8],
];

fn cell_state(row: usize, col: usize) -> StateVector {
    StateVector::new(vec![
        (col / 3) as u32,
        (col % 3) as u32,
        (row / 3) as u32,
        (row % 3) as u32,
    ])
}

#[test]
fn criterion_1_structure_function_golden() {
    let spec = running_example();

    for (row, (levels, sums)) in LEVEL_MAP_9X9.iter().zip(&SUM_MAP_9X9).enumerate() {
        for col in 0..9 {
            let x = cell_state(row, col);
            assert_eq!(spec.evaluate(&x).unwrap(), levels[col], "level at {x}");
            assert_eq!(
                spec.weighted_sum(&x).unwrap(),
                Ratio::from_integer(i64::from(sums[col]).into()),
                "sum at {x}"
            );
        }
    }

    let spot = [
        (vec![0, 0, 0, 0], 0),
        (vec![2, 2, 2, 2], 3),
        (vec![1, 2, 2, 2], 3),
        (vec![2, 1, 1, 1], 2),
    ];
    for (values, level) in spot {
        assert_eq!(spec.evaluate(&StateVector::new(values)).unwrap(), level);
    }

    let expected = level_counts_by_generating_function(&[2, 2, 2, 2], &[0, 2, 4, 6]);
    assert_eq!(expected, vec![5, 26, 35, 15]);
    let table = build_table(&spec, cap()).unwrap();
    assert_eq!(table.level_counts(), expected.as_slice());
    assert_eq!(table.len(), 81);

    println!("criterion 1 PASS: structure function matches the hand-computed maps; level counts (5, 26, 35, 15)");
}

/// Expected orbits per level: (representative, member count, PI cell count).
type OrbitExpectation = (u32, &'static [(&'static [u32], usize, u128)]);

#[test]
fn criterion_2_boundary_vector_goldens() {
    let spec = running_example();

    let muv_expect: [OrbitExpectation; 3] = [
        (3, &[(&[2, 2, 2, 0], 4, 3), (&[2, 2, 1, 1], 6, 4)]),
        (
            2,
            &[
                (&[2, 2, 0, 0], 6, 9),
                (&[2, 1, 1, 0], 12, 12),
                (&[1, 1, 1, 1], 1, 16),
            ],
        ),
        (1, &[(&[2, 0, 0, 0], 4, 27), (&[1, 1, 0, 0], 6, 36)]),
    ];
    for (level, orbits) in muv_expect {
        let set = enumerate_muvs(&spec, level, cap()).unwrap();
        let total: usize = orbits.iter().map(|(_, c, _)| c).sum();
        assert_eq!(set.len(), total, "MUV count at level {level}");
        let got: Vec<(Vec<u32>, usize)> = set
            .orbit_summary
            .iter()
            .map(|(v, c)| (v.values().to_vec(), *c))
            .collect();
        let want: Vec<(Vec<u32>, usize)> =
            orbits.iter().map(|(v, c, _)| (v.to_vec(), *c)).collect();
        assert_eq!(got, want, "MUV orbits at level {level}");
        for (rep, _, cells) in orbits {
            let term = ProductTerm::from_muv(&spec, &StateVector::new(rep.to_vec()));
            assert_eq!(term.cell_count(&spec), *cells, "PI cells of {rep:?}");
        }
    }

    let mlv_expect: [OrbitExpectation; 3] = [
        (2, &[(&[2, 2, 1, 0], 12, 18), (&[2, 1, 1, 1], 4, 24)]),
        (1, &[(&[2, 1, 0, 0], 12, 6), (&[1, 1, 1, 0], 4, 8)]),
        (0, &[(&[1, 0, 0, 0], 4, 2)]),
    ];
    for (level, orbits) in mlv_expect {
        let set = enumerate_mlvs(&spec, level, cap()).unwrap();
        let total: usize = orbits.iter().map(|(_, c, _)| c).sum();
        assert_eq!(set.len(), total, "MLV count at level {level}");
        let got: Vec<(Vec<u32>, usize)> = set
            .orbit_summary
            .iter()
            .map(|(v, c)| (v.values().to_vec(), *c))
            .collect();
        let want: Vec<(Vec<u32>, usize)> =
            orbits.iter().map(|(v, c, _)| (v.to_vec(), *c)).collect();
        assert_eq!(got, want, "MLV orbits at level {level}");
        for (rep, _, cells) in orbits {
            let term = ProductTerm::from_mlv(&spec, &StateVector::new(rep.to_vec()));
            assert_eq!(term.cell_count(&spec), *cells, "PI cells of {rep:?}");
        }
    }

    println!("criterion 2 PASS: MUV counts 10/19/10, MLV counts 16/16/4, orbits and PI cell counts all as expected");
}

#[test]
fn criterion_3_shellability_without_term_growth() {
    let spec = running_example();
    let cases = [
        (Perspective::Success, 3, 10),
        (Perspective::Success, 2, 19),
        (Perspective::Success, 1, 10),
        (Perspective::Failure, 3, 16),
        (Perspective::Failure, 2, 16),
        (Perspective::Failure, 1, 4),
    ];
    for (perspective, level, pi_count) in cases {
        let sop = minimal_sop(&spec, level, perspective, cap()).unwrap();
        assert_eq!(sop.term_count(), pi_count);
        let pre = pre_for(&spec, level, perspective, PreMethod::Shelling, cap()).unwrap();
        assert_eq!(
            pre.shellable,
            Some(true),
            "{perspective} level {level} must shell"
        );
        assert_eq!(pre.expression.term_count(), pi_count);
        assert!(is_pre(&pre.expression, &spec).is_pre);
        let selector = match perspective {
            Perspective::Success => LevelSelector::at_least(level, 3),
            Perspective::Failure => LevelSelector::at_most(level - 1),
        };
        let verdict = assert_equivalent(&spec, &pre.expression, &selector, cap()).unwrap();
        assert!(verdict.equal);
    }
    println!("criterion 3 PASS: all six level functions shell with term counts 10/19/10 and 16/16/4");
}

fn random_exact_distribution(spec: &SystemSpec, rng: &mut StdRng) -> ComponentDistribution {
    let masses = spec
        .max_states()
        .iter()
        .map(|&m| {
            let raw: Vec<i64> = (0..=m).map(|_| rng.random_range(1..=10)).collect();
            let total: i64 = raw.iter().sum();
            raw.into_iter().map(|v| ratio(v, total)).collect()
        })
        .collect();
    ComponentDistribution::new(spec, masses, DistributionMode::Exact).unwrap()
}

#[test]
fn criterion_4_three_method_equivalence() {
    let spec = running_example();
    let mut rng = StdRng::seed_from_u64(0x4d56_5448);
    let mut distributions = vec![ComponentDistribution::uniform(&spec)];
    for _ in 0..20 {
        distributions.push(random_exact_distribution(&spec, &mut rng));
    }

    for perspective in [Perspective::Success, Perspective::Failure] {
        for level in 1..=3u32 {
            let pres: Vec<_> = [PreMethod::Shelling, PreMethod::Reflection, PreMethod::Expansion]
                .into_iter()
                .map(|m| pre_for(&spec, level, perspective, m, cap()).unwrap().expression)
                .collect();
            let denotations: Vec<_> = pres
                .iter()
                .map(|e| e.denotation(&spec, cap()).unwrap())
                .collect();
            assert_eq!(denotations[0], denotations[1]);
            assert_eq!(denotations[1], denotations[2]);
            for d in &distributions {
                let expectations: Vec<Ratio> = pres
                    .iter()
                    .map(|e| mvthresh_core::expectation_of_pre(&spec, e, d).unwrap())
                    .collect();
                assert_eq!(expectations[0], expectations[1]);
                assert_eq!(expectations[1], expectations[2]);
            }
        }
    }
    println!("criterion 4 PASS: shelling, reflection and expansion agree on denotations and on exact expectations under 21 distributions");
}

#[test]
fn criterion_5_probability_identities() {
    let spec = running_example();
    let uniform = ComponentDistribution::uniform(&spec);

    let success =
        level_probabilities_success(&spec, &uniform, PreMethod::Shelling, cap()).unwrap();
    assert_eq!(
        success.exactly,
        vec![ratio(5, 81), ratio(26, 81), ratio(35, 81), ratio(15, 81)]
    );
    let failure =
        level_probabilities_failure(&spec, &uniform, PreMethod::Shelling, cap()).unwrap();
    assert_eq!(success.exactly, failure.exactly);
    assert_eq!(success.at_least, failure.at_least);
    assert_eq!(success.at_most, failure.at_most);
    assert_eq!(success.exactly.iter().sum::<Ratio>(), Ratio::one());
    assert!(success.oracle_agrees);
    assert!(failure.oracle_agrees);

    // Independent reference: uniform probability is state count / 81, with
    // counts from the generating-function oracle.
    let counts = level_counts_by_generating_function(&[2, 2, 2, 2], &[0, 2, 4, 6]);
    for (j, &count) in counts.iter().enumerate() {
        assert_eq!(success.exactly[j], ratio(count as i64, 81));
    }

    println!(
        "criterion 5 PASS: uniform level probabilities are (5, 26, 35, 15)/81 exactly, success and failure pipelines agree, total is 1"
    );
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut result = 1u64;
    for i in 0..k.min(n - k) {
        result = result * (n - i) / (i + 1);
    }
    result
}

/// Independent oracle: `P(at least k of n succeed)` for i.i.d. success
/// probability `p`, as an exact rational tail sum.
fn binomial_tail(n: u64, k: u64, p: &Ratio) -> Ratio {
    let q = Ratio::one() - p;
    (k..=n)
        .map(|i| {
            Ratio::from_integer(binomial(n, i).into())
                * num::pow::pow(p.clone(), i as usize)
                * num::pow::pow(q.clone(), (n - i) as usize)
        })
        .sum()
}

#[test]
fn criterion_6_k_out_of_n_reduction() {
    let mut rng = StdRng::seed_from_u64(0x6b6f_666e);
    for _ in 0..10 {
        let n = rng.random_range(2..=8u64);
        let k = rng.random_range(1..=n);
        let spec = SystemSpec::from_integers(
            &vec![1; n as usize],
            &vec![1; n as usize],
            &[0, k],
        )
        .unwrap();

        // MUV set at level 1 must be exactly the size-k subsets.
        let muvs = enumerate_muvs(&spec, 1, cap()).unwrap();
        assert_eq!(muvs.len() as u64, binomial(n, k), "n={n}, k={k}");
        for v in &muvs.vectors {
            assert_eq!(v.values().iter().filter(|&&b| b == 1).count() as u64, k);
        }

        // P(S >= 1) must match the binomial tail for a random i.i.d. p.
        let p = ratio(rng.random_range(1..10), 10);
        let masses = vec![vec![Ratio::one() - &p, p.clone()]; n as usize];
        let d = ComponentDistribution::new(&spec, masses, DistributionMode::Exact).unwrap();
        let report = level_probabilities_success(&spec, &d, PreMethod::Shelling, cap()).unwrap();
        assert_eq!(report.at_least[1], binomial_tail(n, k, &p), "n={n}, k={k}, p={p}");
        assert!(report.oracle_agrees);
    }
    println!("criterion 6 PASS: binary reduction yields size-k MUV subsets and binomial k-out-of-n probabilities for 10 random (n, k) pairs");
}

/// Strategy for small random truly-threshold systems: n <= 4, m_k <= 3,
/// weights 0..=3 (not all zero), strictly increasing reachable thresholds.
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

fn dominating_distribution(
    spec: &SystemSpec,
    d: &ComponentDistribution,
    rng: &mut StdRng,
) -> ComponentDistribution {
    let masses = d
        .masses()
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let mut row = row.to_vec();
            let m = spec.max_state(k) as usize;
            if m > 0 {
                let lo = rng.random_range(0..m);
                let hi = rng.random_range(lo + 1..=m);
                // Move half of the mass at lo up to hi: a stochastic
                // dominance improvement.
                let moved = row[lo].clone() / Ratio::from_integer(2.into());
                row[lo] -= &moved;
                row[hi] += &moved;
            }
            row
        })
        .collect();
    ComponentDistribution::new(spec, masses, DistributionMode::Exact).unwrap()
}

#[test]
fn criterion_7_randomized_property_suite() {
    let shellable_misses = std::sync::atomic::AtomicUsize::new(0);
    let config = ProptestConfig {
        cases: 220,
        ..ProptestConfig::default()
    };
    proptest!(config, |(spec in spec_strategy(), seed in any::<u64>())| {
        let mut rng = StdRng::seed_from_u64(seed);
        let top = spec.top_level();

        // Monotonicity and causality always hold for valid specs.
        let coherence = check_coherence(&spec, cap()).unwrap();
        prop_assert!(coherence.monotone);
        prop_assert!(coherence.causal);

        for level in 1..=top {
            let muvs = enumerate_muvs(&spec, level, cap()).unwrap();
            let mlvs = enumerate_mlvs(&spec, level - 1, cap()).unwrap();

            // Antichain property.
            for set in [&muvs, &mlvs] {
                for (i, v) in set.vectors.iter().enumerate() {
                    for w in &set.vectors[i + 1..] {
                        prop_assert!(!v.comparable(w));
                    }
                }
            }

            // Characterization: S(x) >= j iff x dominates some MUV;
            // S(x) <= j-1 iff some MLV dominates x.
            for x in spec.states() {
                let s = spec.evaluate(&x).unwrap();
                let covered = muvs.vectors.iter().any(|v| x.dominates(v));
                prop_assert_eq!(s >= level, covered);
                let under = mlvs.vectors.iter().any(|v| v.dominates(&x));
                prop_assert_eq!(s < level, under);
            }

            // All three PREs are pairwise disjoint and match the level set.
            for perspective in [Perspective::Success, Perspective::Failure] {
                let reference = scan_level_states(&spec, |l| match perspective {
                    Perspective::Success => l >= level,
                    Perspective::Failure => l < level,
                });
                for method in [PreMethod::Shelling, PreMethod::Reflection, PreMethod::Expansion] {
                    let pre = pre_for(&spec, level, perspective, method, cap()).unwrap();
                    prop_assert!(is_pre(&pre.expression, &spec).is_pre);
                    prop_assert_eq!(&denoted_states(&spec, &pre.expression), &reference);
                    if pre.shellable == Some(false) {
                        shellable_misses.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        println!(
                            "note: shellable=false for a generated spec ({perspective} level {level})"
                        );
                    }
                }
            }
        }

        // Stochastic dominance: moving mass upward never lowers P(S >= j).
        let d = random_exact_distribution(&spec, &mut rng);
        let d_up = dominating_distribution(&spec, &d, &mut rng);
        let table = build_table(&spec, cap()).unwrap();
        for level in 1..=top {
            let selector = LevelSelector::at_least(level, top);
            let base = table.probability(&d, &selector);
            let improved = table.probability(&d_up, &selector);
            prop_assert!(improved >= base);
        }
    });
    let misses = shellable_misses.load(std::sync::atomic::Ordering::Relaxed);
    println!("criterion 7 PASS: 220 randomized specs satisfied every property ({misses} shellable=false instances logged)");
}

#[test]
fn criterion_8_rendering_goldens() {
    let spec = running_example();
    let layout = MapLayout::default_for(&spec);

    let rendered = render_structure_map(&spec, &layout, MapFormat::Text, cap()).unwrap();
    let golden_path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/running_example_map.txt");
    let golden = std::fs::read_to_string(&golden_path).unwrap();
    assert_eq!(rendered, golden, "structure map must be byte-identical");

    let csv = render_level_map(
        &spec,
        &layout,
        1,
        Perspective::Failure,
        LevelOverlays {
            boundary: false,
            cover: Some(PreMethod::Shelling),
        },
        MapFormat::Csv,
        cap(),
    )
    .unwrap();
    let cells: Vec<&str> = csv
        .lines()
        .skip(3)
        .flat_map(|l| l.split(',').skip(2))
        .collect();
    let sizes: Vec<usize> = ["a", "b", "c", "d"]
        .iter()
        .map(|m| cells.iter().filter(|c| *c == m).count())
        .collect();
    assert_eq!(sizes, vec![2, 1, 1, 1]);

    println!("criterion 8 PASS: structure map is byte-identical to the fixture; failure-level-1 cover regions are (2,1,1,1)");
}

#[test]
fn zero_is_never_a_probability_lower_bound_violation() {
    // Degenerate sanity alongside the suite: an all-at-zero distribution
    // pins all mass at level 0 through both pipelines.
    let spec = running_example();
    let d = ComponentDistribution::degenerate(&spec, &spec.bottom_state()).unwrap();
    let s = level_probabilities_success(&spec, &d, PreMethod::Expansion, cap()).unwrap();
    assert_eq!(s.exactly[0], Ratio::one());
    assert!(s.exactly[1..].iter().all(|p| p.is_zero()));
}

//! Enumeration of the minimal upper vectors and maximal lower vectors that
//! characterize each system level.
//!
//! A minimal upper vector (MUV) for level `j` reaches level `j` while every
//! strictly smaller vector stays below it; a maximal lower vector (MLV) for
//! level `j` stays at or below `j` while every strictly larger vector
//! exceeds it. Because the structure function is monotone, testing the
//! immediate neighbors (one component down or up) suffices during
//! enumeration; [`verify_boundary_minimality`] re-checks the definitions
//! against the full cones as an independent guard.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::system::{StateCap, StateVector, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Muv,
    Mlv,
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryKind::Muv => write!(f, "MUV"),
            BoundaryKind::Mlv => write!(f, "MLV"),
        }
    }
}

/// The complete boundary-vector set of one level, in descending
/// lexicographic order, with a permutation-orbit summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryVectorSet {
    pub level: u32,
    pub kind: BoundaryKind,
    pub vectors: Vec<StateVector>,
    /// Orbit representatives (coordinates sorted descending) with the number
    /// of set members sharing that coordinate multiset. Meaningful for
    /// totally symmetric systems, reported for all.
    pub orbit_summary: Vec<(StateVector, usize)>,
}

impl BoundaryVectorSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

fn orbit_summary(vectors: &[StateVector]) -> Vec<(StateVector, usize)> {
    let mut orbits: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for v in vectors {
        let mut key = v.values().to_vec();
        key.sort_unstable_by(|a, b| b.cmp(a));
        *orbits.entry(key).or_insert(0) += 1;
    }
    let mut summary: Vec<(StateVector, usize)> = orbits
        .into_iter()
        .map(|(rep, count)| (StateVector::new(rep), count))
        .collect();
    summary.sort_by(|a, b| b.0.cmp(&a.0));
    summary
}

fn collect_set(
    spec: &SystemSpec,
    level: u32,
    kind: BoundaryKind,
    mut keep: impl FnMut(&StateVector) -> bool,
) -> BoundaryVectorSet {
    let mut vectors: Vec<StateVector> = spec.states().filter(|x| keep(x)).collect();
    vectors.sort_by(|a, b| b.cmp(a));
    let orbit_summary = orbit_summary(&vectors);
    BoundaryVectorSet {
        level,
        kind,
        vectors,
        orbit_summary,
    }
}

/// All minimal vectors of `{x : S(x) >= j}` for `1 <= j <= M`.
pub fn enumerate_muvs(spec: &SystemSpec, j: u32, cap: StateCap) -> Result<BoundaryVectorSet> {
    if j < 1 || j > spec.top_level() {
        return Err(Error::LevelOutOfRange {
            level: j,
            min: 1,
            max: spec.top_level(),
        });
    }
    spec.ensure_within_cap(cap)?;
    let threshold = spec.scaled_threshold(j);
    Ok(collect_set(spec, j, BoundaryKind::Muv, |x| {
        let sum = spec.scaled_sum(x);
        sum >= threshold
            && (0..x.len()).all(|k| {
                x.get(k) == 0 || sum - spec.scaled_weight(k) < threshold
            })
    }))
}

/// All maximal vectors of `{x : S(x) <= j}` for `0 <= j <= M-1`.
pub fn enumerate_mlvs(spec: &SystemSpec, j: u32, cap: StateCap) -> Result<BoundaryVectorSet> {
    if j >= spec.top_level() {
        return Err(Error::LevelOutOfRange {
            level: j,
            min: 0,
            max: spec.top_level().saturating_sub(1),
        });
    }
    spec.ensure_within_cap(cap)?;
    // S(x) <= j  iff  the weighted sum misses T_{j+1}.
    let upper = spec.scaled_threshold(j + 1);
    Ok(collect_set(spec, j, BoundaryKind::Mlv, |x| {
        let sum = spec.scaled_sum(x);
        sum < upper
            && (0..x.len()).all(|k| {
                x.get(k) == spec.max_state(k) || sum + spec.scaled_weight(k) >= upper
            })
    }))
}

/// One defect found while re-checking a boundary set against its definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryDefect {
    /// The vector is not in the half-space the set claims to bound.
    WrongSide { vector: StateVector },
    /// A strictly smaller (MUV) / larger (MLV) vector stays in the
    /// half-space, so the vector is not minimal/maximal.
    NotExtremal {
        vector: StateVector,
        witness: StateVector,
    },
    /// Two set members are comparable, breaking the antichain property.
    ComparablePair {
        first: StateVector,
        second: StateVector,
    },
    /// A state in the half-space is not covered by any set member.
    Incomplete { state: StateVector },
    /// A state outside the half-space is covered by a set member.
    Spurious { state: StateVector },
}

impl fmt::Display for BoundaryDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryDefect::WrongSide { vector } => {
                write!(f, "{vector} is on the wrong side of the level boundary")
            }
            BoundaryDefect::NotExtremal { vector, witness } => {
                write!(f, "{vector} is not extremal: witness {witness}")
            }
            BoundaryDefect::ComparablePair { first, second } => {
                write!(f, "{first} and {second} are comparable")
            }
            BoundaryDefect::Incomplete { state } => {
                write!(f, "{state} is in the level set but covered by no vector")
            }
            BoundaryDefect::Spurious { state } => {
                write!(f, "{state} is outside the level set but covered")
            }
        }
    }
}

/// Outcome of the independent full-cone re-check of a boundary set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryVerdict {
    pub defects: Vec<BoundaryDefect>,
}

impl BoundaryVerdict {
    pub fn is_ok(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Iterator over the box `lo <= x <= hi` in ascending lexicographic order.
fn box_iter(lo: Vec<u32>, hi: Vec<u32>) -> impl Iterator<Item = StateVector> {
    let mut next = Some(lo.clone());
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        for k in (0..succ.len()).rev() {
            if succ[k] < hi[k] {
                succ[k] += 1;
                next = Some(succ);
                return Some(StateVector::new(current));
            }
            succ[k] = lo[k];
        }
        Some(StateVector::new(current))
    })
}

/// Re-checks a boundary set by scanning the full cone below/above every
/// member and the full state space for completeness, independently of the
/// immediate-neighbor shortcut used during enumeration.
pub fn verify_boundary_minimality(
    spec: &SystemSpec,
    set: &BoundaryVectorSet,
    cap: StateCap,
) -> Result<BoundaryVerdict> {
    spec.ensure_within_cap(cap)?;
    let j = set.level;
    spec.check_level(j)?;
    let mut defects = Vec::new();

    let in_half_space = |x: &StateVector| -> bool {
        let level = spec.evaluate(x).expect("state from the lattice");
        match set.kind {
            BoundaryKind::Muv => level >= j,
            BoundaryKind::Mlv => level <= j,
        }
    };

    for v in &set.vectors {
        if !in_half_space(v) {
            defects.push(BoundaryDefect::WrongSide { vector: v.clone() });
            continue;
        }
        let cone: Box<dyn Iterator<Item = StateVector>> = match set.kind {
            BoundaryKind::Muv => Box::new(box_iter(vec![0; v.len()], v.values().to_vec())),
            BoundaryKind::Mlv => Box::new(box_iter(
                v.values().to_vec(),
                spec.max_states().to_vec(),
            )),
        };
        if let Some(witness) = cone.filter(|y| y != v).find(|y| in_half_space(y)) {
            defects.push(BoundaryDefect::NotExtremal {
                vector: v.clone(),
                witness,
            });
        }
    }

    for (a, v) in set.vectors.iter().enumerate() {
        for w in &set.vectors[a + 1..] {
            if v.comparable(w) {
                defects.push(BoundaryDefect::ComparablePair {
                    first: v.clone(),
                    second: w.clone(),
                });
            }
        }
    }

    for x in spec.states() {
        let covered = match set.kind {
            BoundaryKind::Muv => set.vectors.iter().any(|v| x.dominates(v)),
            BoundaryKind::Mlv => set.vectors.iter().any(|v| v.dominates(&x)),
        };
        match (in_half_space(&x), covered) {
            (true, false) => defects.push(BoundaryDefect::Incomplete { state: x }),
            (false, true) => defects.push(BoundaryDefect::Spurious { state: x }),
            _ => {}
        }
    }

    Ok(BoundaryVerdict { defects })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> SystemSpec {
        SystemSpec::demo_4x3()
    }

    fn cap() -> StateCap {
        StateCap::default()
    }

    fn orbit(set: &BoundaryVectorSet) -> Vec<(Vec<u32>, usize)> {
        set.orbit_summary
            .iter()
            .map(|(v, c)| (v.values().to_vec(), *c))
            .collect()
    }

    #[test]
    fn muv_sets_match_the_expected_orbits() {
        let spec = spec();
        let level3 = enumerate_muvs(&spec, 3, cap()).unwrap();
        assert_eq!(level3.len(), 10);
        assert_eq!(orbit(&level3), vec![(vec![2, 2, 2, 0], 4), (vec![2, 2, 1, 1], 6)]);

        let level2 = enumerate_muvs(&spec, 2, cap()).unwrap();
        assert_eq!(level2.len(), 19);
        assert_eq!(
            orbit(&level2),
            vec![
                (vec![2, 2, 0, 0], 6),
                (vec![2, 1, 1, 0], 12),
                (vec![1, 1, 1, 1], 1)
            ]
        );

        let level1 = enumerate_muvs(&spec, 1, cap()).unwrap();
        assert_eq!(level1.len(), 10);
        assert_eq!(orbit(&level1), vec![(vec![2, 0, 0, 0], 4), (vec![1, 1, 0, 0], 6)]);
    }

    #[test]
    fn mlv_sets_match_the_expected_orbits() {
        let spec = spec();
        let level2 = enumerate_mlvs(&spec, 2, cap()).unwrap();
        assert_eq!(level2.len(), 16);
        assert_eq!(orbit(&level2), vec![(vec![2, 2, 1, 0], 12), (vec![2, 1, 1, 1], 4)]);

        let level1 = enumerate_mlvs(&spec, 1, cap()).unwrap();
        assert_eq!(level1.len(), 16);
        assert_eq!(orbit(&level1), vec![(vec![2, 1, 0, 0], 12), (vec![1, 1, 1, 0], 4)]);

        let level0 = enumerate_mlvs(&spec, 0, cap()).unwrap();
        assert_eq!(level0.len(), 4);
        assert_eq!(orbit(&level0), vec![(vec![1, 0, 0, 0], 4)]);
    }

    #[test]
    fn binary_series_system_needs_both_components() {
        let series = SystemSpec::from_integers(&[1, 1], &[1, 1], &[0, 2]).unwrap();
        let set = enumerate_muvs(&series, 1, cap()).unwrap();
        assert_eq!(set.vectors, vec![StateVector::new(vec![1, 1])]);
    }

    #[test]
    fn level_bounds_are_enforced() {
        let spec = spec();
        assert!(matches!(
            enumerate_muvs(&spec, 0, cap()),
            Err(Error::LevelOutOfRange { .. })
        ));
        assert!(matches!(
            enumerate_muvs(&spec, 4, cap()),
            Err(Error::LevelOutOfRange { .. })
        ));
        assert!(matches!(
            enumerate_mlvs(&spec, 3, cap()),
            Err(Error::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn cap_aborts_enumeration() {
        let spec = spec();
        assert!(matches!(
            enumerate_muvs(&spec, 3, StateCap(10)),
            Err(Error::StateSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn vectors_are_lexicographically_descending_antichains() {
        let spec = spec();
        for j in 1..=3 {
            let set = enumerate_muvs(&spec, j, cap()).unwrap();
            for pair in set.vectors.windows(2) {
                assert!(pair[0] > pair[1]);
            }
            for (a, v) in set.vectors.iter().enumerate() {
                for w in &set.vectors[a + 1..] {
                    assert!(!v.comparable(w), "{v} and {w} comparable at level {j}");
                }
            }
        }
    }

    #[test]
    fn full_cone_verification_accepts_enumerated_sets() {
        let spec = spec();
        for j in 1..=3 {
            let set = enumerate_muvs(&spec, j, cap()).unwrap();
            assert!(verify_boundary_minimality(&spec, &set, cap()).unwrap().is_ok());
        }
        for j in 0..=2 {
            let set = enumerate_mlvs(&spec, j, cap()).unwrap();
            assert!(verify_boundary_minimality(&spec, &set, cap()).unwrap().is_ok());
        }
    }

    #[test]
    fn verification_spots_a_removed_vector() {
        let spec = spec();
        let mut set = enumerate_muvs(&spec, 2, cap()).unwrap();
        set.vectors.retain(|v| v.values() != [1, 1, 1, 1]);
        let verdict = verify_boundary_minimality(&spec, &set, cap()).unwrap();
        assert!(verdict.defects.iter().any(|d| matches!(
            d,
            BoundaryDefect::Incomplete { state } if state.values() == [1, 1, 1, 1]
        )));
    }

    #[test]
    fn verification_spots_a_non_minimal_vector() {
        let spec = spec();
        let mut set = enumerate_muvs(&spec, 1, cap()).unwrap();
        // (2,1,0,0) reaches level 1 but is not minimal.
        set.vectors.push(StateVector::new(vec![2, 1, 0, 0]));
        let verdict = verify_boundary_minimality(&spec, &set, cap()).unwrap();
        assert!(verdict
            .defects
            .iter()
            .any(|d| matches!(d, BoundaryDefect::NotExtremal { .. })));
        assert!(verdict
            .defects
            .iter()
            .any(|d| matches!(d, BoundaryDefect::ComparablePair { .. })));
    }

    #[test]
    fn zero_weight_components_pin_boundary_coordinates() {
        let spec = SystemSpec::from_integers(&[2, 2], &[1, 0], &[0, 2]).unwrap();
        let muvs = enumerate_muvs(&spec, 1, cap()).unwrap();
        assert_eq!(muvs.vectors, vec![StateVector::new(vec![2, 0])]);
        let mlvs = enumerate_mlvs(&spec, 0, cap()).unwrap();
        assert_eq!(mlvs.vectors, vec![StateVector::new(vec![1, 2])]);
    }
}

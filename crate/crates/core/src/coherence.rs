//! Exhaustive coherence, symmetry and binary-image checks.

use crate::boundary::{BoundaryKind, BoundaryVectorSet};
use crate::error::{Error, Result};
use crate::system::{StateCap, StateVector, SystemSpec};

/// Result of the causality / monotonicity / relevancy scan.
///
/// Component indices are 0-based. Witnesses are the first counterexamples
/// in ascending lexicographic state order, so reports are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceReport {
    pub causal: bool,
    /// Offending endpoint and its level, when causality fails.
    pub causal_witnesses: Vec<(StateVector, u32)>,
    pub monotone: bool,
    /// `(x, k)` with `S(x + e_k) < S(x)`, when monotonicity fails.
    pub monotone_witness: Option<(StateVector, usize)>,
    pub relevant: Vec<bool>,
    /// For each relevant component, an `x` where raising it raises the level.
    pub relevancy_witness: Vec<Option<StateVector>>,
}

impl CoherenceReport {
    pub fn coherent(&self) -> bool {
        self.causal && self.monotone && self.relevant.iter().all(|&r| r)
    }
}

/// Checks causality, monotonicity and per-component relevancy by scanning
/// the whole state lattice.
pub fn check_coherence(spec: &SystemSpec, cap: StateCap) -> Result<CoherenceReport> {
    spec.ensure_within_cap(cap)?;
    let n = spec.component_count();
    let top_level = spec.top_level();

    let mut causal_witnesses = Vec::new();
    let bottom = spec.bottom_state();
    let bottom_level = spec.evaluate(&bottom)?;
    if bottom_level != 0 {
        causal_witnesses.push((bottom, bottom_level));
    }
    let top = spec.top_state();
    let top_val = spec.evaluate(&top)?;
    if top_val != top_level {
        causal_witnesses.push((top, top_val));
    }

    let mut monotone = true;
    let mut monotone_witness = None;
    let mut relevant = vec![false; n];
    let mut relevancy_witness: Vec<Option<StateVector>> = vec![None; n];

    for x in spec.states() {
        let sum = spec.scaled_sum(&x);
        let level = spec.level_of_sum(sum);
        for k in 0..n {
            if x.get(k) == spec.max_state(k) {
                continue;
            }
            let bumped = spec.level_of_sum(sum + spec.scaled_weight(k));
            if bumped < level && monotone {
                monotone = false;
                monotone_witness = Some((x.clone(), k));
            }
            if bumped > level && relevancy_witness[k].is_none() {
                relevant[k] = true;
                relevancy_witness[k] = Some(x.clone());
            }
        }
    }

    Ok(CoherenceReport {
        causal: causal_witnesses.is_empty(),
        causal_witnesses,
        monotone,
        monotone_witness,
        relevant,
        relevancy_witness,
    })
}

/// Result of the pairwise swap test for total symmetry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryReport {
    pub totally_symmetric: bool,
    /// First asymmetric pair (0-based); the witness state is `None` when the
    /// pair is structurally asymmetric (`m_i != m_j`).
    pub first_asymmetric_pair: Option<(usize, usize, Option<StateVector>)>,
}

/// True iff swapping any two components leaves the structure function
/// unchanged on every state. Pairs with different state counts are
/// structurally asymmetric.
pub fn check_total_symmetry(spec: &SystemSpec, cap: StateCap) -> Result<SymmetryReport> {
    spec.ensure_within_cap(cap)?;
    let n = spec.component_count();
    for i in 0..n {
        for j in i + 1..n {
            if spec.max_state(i) != spec.max_state(j) {
                return Ok(SymmetryReport {
                    totally_symmetric: false,
                    first_asymmetric_pair: Some((i, j, None)),
                });
            }
            for x in spec.states() {
                let swapped = x.swapped(i, j);
                if spec.evaluate(&x)? != spec.evaluate(&swapped)? {
                    return Ok(SymmetryReport {
                        totally_symmetric: false,
                        first_asymmetric_pair: Some((i, j, Some(x))),
                    });
                }
            }
        }
    }
    Ok(SymmetryReport {
        totally_symmetric: true,
        first_asymmetric_pair: None,
    })
}

/// Per-level binary-image verdicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImageReport {
    /// `(level j, verdict)` for `j = 1..=M`.
    pub per_level: Vec<(u32, bool)>,
    pub overall: bool,
}

/// A level `j` is binary-imaged when its MUVs use only coordinates
/// `{0, j}` and the MLVs of level `j - 1` use only `{j - 1, m_k}`;
/// then success at `j` depends only on component successes at `j`.
pub fn check_binary_imaged(
    spec: &SystemSpec,
    muvs_per_level: &[BoundaryVectorSet],
    mlvs_per_level: &[BoundaryVectorSet],
) -> Result<BinaryImageReport> {
    let find = |sets: &[BoundaryVectorSet], kind: BoundaryKind, level: u32| -> Result<BoundaryVectorSet> {
        sets.iter()
            .find(|s| s.kind == kind && s.level == level)
            .cloned()
            .ok_or_else(|| {
                Error::InvalidArgument(format!("missing {kind} set for level {level}"))
            })
    };
    let mut per_level = Vec::new();
    for j in 1..=spec.top_level() {
        let muvs = find(muvs_per_level, BoundaryKind::Muv, j)?;
        let mlvs = find(mlvs_per_level, BoundaryKind::Mlv, j - 1)?;
        let muvs_ok = muvs
            .vectors
            .iter()
            .all(|v| v.values().iter().all(|&c| c == 0 || c == j));
        let mlvs_ok = mlvs.vectors.iter().all(|v| {
            v.values()
                .iter()
                .enumerate()
                .all(|(k, &c)| c == j - 1 || c == spec.max_state(k))
        });
        per_level.push((j, muvs_ok && mlvs_ok));
    }
    Ok(BinaryImageReport {
        overall: per_level.iter().all(|&(_, ok)| ok),
        per_level,
    })
}

//! System definition and the multi-valued structure function.
//!
//! A truly-threshold system is fully specified by per-component top states
//! `m_k`, non-negative weights `W_k` and a strictly increasing threshold
//! ladder `T_0 = 0 < T_1 < ... < T_M`. The system sits at level `j` exactly
//! when `T_j <= sum_k W_k * X_k < T_{j+1}`, with an implicit sentinel above
//! the top level.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, InvalidSpec, Result, SpecViolation};

/// Exact rational scalar used for weights, thresholds and probabilities.
pub type Ratio = BigRational;

/// Parse a rational from `"a"` or `"a/b"` decimal-integer notation.
pub fn parse_ratio(s: &str) -> std::result::Result<Ratio, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("invalid numerator in {s:?}"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("invalid denominator in {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Ratio::new(num, den))
}

/// Nearest float to an exact rational, for display.
pub fn ratio_to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Render a rational as `"a"` when integral, `"a/b"` otherwise.
pub fn format_ratio(r: &Ratio) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Cap on exhaustive state-space scans. Scans over larger spaces refuse to
/// run instead of silently sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateCap(pub u64);

impl Default for StateCap {
    fn default() -> Self {
        StateCap(10_000_000)
    }
}

impl StateCap {
    pub fn unlimited() -> Self {
        StateCap(u64::MAX)
    }
}

/// One assignment of states to all components, `0 <= X_k <= m_k`.
///
/// The derived `Ord` is lexicographic and is used only for canonical
/// output ordering; the domain's componentwise partial order is exposed
/// through [`StateVector::dominates`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateVector(Vec<u32>);

impl StateVector {
    pub fn new(values: Vec<u32>) -> Self {
        StateVector(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, k: usize) -> u32 {
        self.0[k]
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &StateVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// True when the two vectors are ordered under the componentwise order.
    pub fn comparable(&self, other: &StateVector) -> bool {
        self.dominates(other) || other.dominates(self)
    }

    /// Copy with component `k` replaced by `v`.
    pub fn with_component(&self, k: usize, v: u32) -> StateVector {
        let mut values = self.0.clone();
        values[k] = v;
        StateVector(values)
    }

    /// Copy with component `k` decremented, or `None` at 0.
    pub fn decremented(&self, k: usize) -> Option<StateVector> {
        if self.0[k] == 0 {
            None
        } else {
            Some(self.with_component(k, self.0[k] - 1))
        }
    }

    /// Copy with components `i` and `j` swapped.
    pub fn swapped(&self, i: usize, j: usize) -> StateVector {
        let mut values = self.0.clone();
        values.swap(i, j);
        StateVector(values)
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for StateVector {
    fn from(values: Vec<u32>) -> Self {
        StateVector(values)
    }
}

impl From<&[u32]> for StateVector {
    fn from(values: &[u32]) -> Self {
        StateVector(values.to_vec())
    }
}

/// A validated truly-threshold system definition.
///
/// Construction checks every invariant and rejects invalid definitions with
/// the full list of violations, so a `SystemSpec` value is always sound.
/// All threshold arithmetic is exact: rational weights and thresholds are
/// rescaled to integers by their common denominator once, up front.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    max_states: Vec<u32>,
    weights: Vec<Ratio>,
    thresholds: Vec<Ratio>,
    scaled_weights: Vec<i128>,
    scaled_thresholds: Vec<i128>,
    scale: BigInt,
    sentinel_top: i128,
}

impl SystemSpec {
    pub fn new(
        max_states: Vec<u32>,
        weights: Vec<Ratio>,
        thresholds: Vec<Ratio>,
    ) -> std::result::Result<Self, InvalidSpec> {
        let mut violations = Vec::new();

        if max_states.is_empty() {
            violations.push(SpecViolation::NoComponents);
        }
        for (k, &m) in max_states.iter().enumerate() {
            if m == 0 {
                violations.push(SpecViolation::MaxStateZero { component: k + 1 });
            }
        }
        if weights.len() != max_states.len() {
            violations.push(SpecViolation::WeightCountMismatch {
                expected: max_states.len(),
                got: weights.len(),
            });
        }
        for (k, w) in weights.iter().enumerate() {
            if w.is_negative() {
                violations.push(SpecViolation::NegativeWeight {
                    component: k + 1,
                    weight: format_ratio(w),
                });
            }
        }
        if thresholds.len() < 2 {
            violations.push(SpecViolation::TooFewThresholds(thresholds.len()));
        }
        for (j, t) in thresholds.iter().enumerate() {
            if t.is_negative() {
                violations.push(SpecViolation::NegativeThreshold {
                    index: j,
                    threshold: format_ratio(t),
                });
            }
        }
        if let Some(t0) = thresholds.first() {
            if !t0.is_zero() {
                violations.push(SpecViolation::NonZeroBaseThreshold(format_ratio(t0)));
            }
        }
        for j in 1..thresholds.len() {
            if thresholds[j] <= thresholds[j - 1] {
                violations.push(SpecViolation::NonIncreasingThresholds { index: j });
            }
        }
        if !weights.is_empty() && weights.iter().all(|w| w.is_zero()) {
            violations.push(SpecViolation::AllZeroWeights);
        }

        if weights.len() == max_states.len() {
            let max_sum: Ratio = weights
                .iter()
                .zip(&max_states)
                .map(|(w, &m)| w * Ratio::from_integer(BigInt::from(m)))
                .sum();
            if let Some(top) = thresholds.last() {
                if thresholds.len() >= 2 && *top > max_sum {
                    violations.push(SpecViolation::UnreachableTopLevel {
                        threshold: format_ratio(top),
                        max_sum: format_ratio(&max_sum),
                    });
                }
            }
        }

        if !violations.is_empty() {
            return Err(InvalidSpec { violations });
        }

        // Rescale to exact integers by the common denominator.
        let mut scale = BigInt::one();
        for r in weights.iter().chain(&thresholds) {
            scale = scale.lcm(r.denom());
        }
        let to_scaled = |r: &Ratio| -> Option<i128> {
            (r.numer() * (&scale / r.denom())).to_i128()
        };
        let scaled_weights: Option<Vec<i128>> = weights.iter().map(to_scaled).collect();
        let scaled_thresholds: Option<Vec<i128>> = thresholds.iter().map(to_scaled).collect();
        let (scaled_weights, scaled_thresholds) = match (scaled_weights, scaled_thresholds) {
            (Some(w), Some(t)) => (w, t),
            _ => {
                return Err(InvalidSpec {
                    violations: vec![SpecViolation::ArithmeticOverflow],
                })
            }
        };
        let sentinel_top = scaled_weights
            .iter()
            .zip(&max_states)
            .try_fold(0i128, |acc, (&w, &m)| {
                acc.checked_add(w.checked_mul(i128::from(m))?)
            })
            .and_then(|s| s.checked_add(1));
        let sentinel_top = match sentinel_top {
            Some(s) => s,
            None => {
                return Err(InvalidSpec {
                    violations: vec![SpecViolation::ArithmeticOverflow],
                })
            }
        };

        Ok(SystemSpec {
            max_states,
            weights,
            thresholds,
            scaled_weights,
            scaled_thresholds,
            scale,
            sentinel_top,
        })
    }

    /// Convenience constructor for integer weights and thresholds.
    pub fn from_integers(
        max_states: &[u32],
        weights: &[u64],
        thresholds: &[u64],
    ) -> std::result::Result<Self, InvalidSpec> {
        SystemSpec::new(
            max_states.to_vec(),
            weights
                .iter()
                .map(|&w| Ratio::from_integer(BigInt::from(w)))
                .collect(),
            thresholds
                .iter()
                .map(|&t| Ratio::from_integer(BigInt::from(t)))
                .collect(),
        )
    }

    /// The 4-component, 4-level homogeneous instance used across the test
    /// suite: `m = (2,2,2,2)`, unit weights, thresholds `(0,2,4,6)`.
    pub fn demo_4x3() -> Self {
        SystemSpec::from_integers(&[2, 2, 2, 2], &[1, 1, 1, 1], &[0, 2, 4, 6])
            .expect("demo spec is valid")
    }

    pub fn component_count(&self) -> usize {
        self.max_states.len()
    }

    pub fn max_states(&self) -> &[u32] {
        &self.max_states
    }

    pub fn max_state(&self, k: usize) -> u32 {
        self.max_states[k]
    }

    pub fn weights(&self) -> &[Ratio] {
        &self.weights
    }

    pub fn thresholds(&self) -> &[Ratio] {
        &self.thresholds
    }

    /// Highest system level `M`.
    pub fn top_level(&self) -> u32 {
        (self.thresholds.len() - 1) as u32
    }

    /// Number of states in the full lattice, `prod_k (m_k + 1)`.
    pub fn state_space_size(&self) -> u128 {
        self.max_states
            .iter()
            .fold(1u128, |acc, &m| acc.saturating_mul(u128::from(m) + 1))
    }

    /// Errors with `StateSpaceTooLarge` when the lattice exceeds `cap`.
    pub fn ensure_within_cap(&self, cap: StateCap) -> Result<()> {
        let size = self.state_space_size();
        if size > u128::from(cap.0) {
            return Err(Error::StateSpaceTooLarge { size, cap: cap.0 });
        }
        Ok(())
    }

    pub fn check_state(&self, x: &StateVector) -> Result<()> {
        if x.len() != self.max_states.len() {
            return Err(Error::StateLengthMismatch {
                expected: self.max_states.len(),
                got: x.len(),
            });
        }
        for (k, (&v, &m)) in x.values().iter().zip(&self.max_states).enumerate() {
            if v > m {
                return Err(Error::StateOutOfRange {
                    state: x.clone(),
                    component: k + 1,
                });
            }
        }
        Ok(())
    }

    pub fn check_level(&self, j: u32) -> Result<()> {
        if j > self.top_level() {
            return Err(Error::LevelOutOfRange {
                level: j,
                min: 0,
                max: self.top_level(),
            });
        }
        Ok(())
    }

    pub(crate) fn scaled_sum(&self, x: &StateVector) -> i128 {
        self.scaled_weights
            .iter()
            .zip(x.values())
            .map(|(&w, &v)| w * i128::from(v))
            .sum()
    }

    pub(crate) fn scaled_threshold(&self, j: u32) -> i128 {
        self.scaled_thresholds[j as usize]
    }

    pub(crate) fn scaled_weight(&self, k: usize) -> i128 {
        self.scaled_weights[k]
    }

    pub(crate) fn level_of_sum(&self, sum: i128) -> u32 {
        self.level_of_scaled_sum(sum)
    }

    /// Exact weighted sum `sum_k W_k * X_k`.
    pub fn weighted_sum(&self, x: &StateVector) -> Result<Ratio> {
        self.check_state(x)?;
        Ok(Ratio::new(BigInt::from(self.scaled_sum(x)), self.scale.clone()))
    }

    /// The structure function: the unique level `j` with
    /// `T_j <= sum_k W_k * X_k < T_{j+1}`, the top range closed by the
    /// implicit sentinel.
    pub fn evaluate(&self, x: &StateVector) -> Result<u32> {
        self.check_state(x)?;
        Ok(self.level_of_scaled_sum(self.scaled_sum(x)))
    }

    fn level_of_scaled_sum(&self, sum: i128) -> u32 {
        debug_assert!(sum < self.sentinel_top);
        let mut level = 0u32;
        for (j, &t) in self.scaled_thresholds.iter().enumerate().skip(1) {
            if sum >= t {
                level = j as u32;
            } else {
                break;
            }
        }
        level
    }

    /// Binary success at level `j`: true iff the weighted sum reaches `T_j`.
    pub fn level_success(&self, x: &StateVector, j: u32) -> Result<bool> {
        self.check_level(j)?;
        self.check_state(x)?;
        Ok(self.scaled_sum(x) >= self.scaled_thresholds[j as usize])
    }

    /// All state vectors in ascending lexicographic order.
    pub fn states(&self) -> StateIter {
        StateIter::new(&self.max_states)
    }

    /// Rank of a state in ascending lexicographic order (`X_1` most
    /// significant). Only meaningful once the space fits the cap.
    pub fn state_index(&self, x: &StateVector) -> usize {
        let mut idx = 0usize;
        for (&v, &m) in x.values().iter().zip(&self.max_states) {
            idx = idx * (m as usize + 1) + v as usize;
        }
        idx
    }

    /// Inverse of [`SystemSpec::state_index`].
    pub fn state_at(&self, mut index: usize) -> StateVector {
        let mut values = vec![0u32; self.max_states.len()];
        for k in (0..self.max_states.len()).rev() {
            let radix = self.max_states[k] as usize + 1;
            values[k] = (index % radix) as u32;
            index /= radix;
        }
        StateVector(values)
    }

    /// The all-zero vector.
    pub fn bottom_state(&self) -> StateVector {
        StateVector(vec![0; self.max_states.len()])
    }

    /// The all-maximal vector.
    pub fn top_state(&self) -> StateVector {
        StateVector(self.max_states.clone())
    }
}

/// Iterator over the full state lattice in ascending lexicographic order.
pub struct StateIter {
    max_states: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl StateIter {
    fn new(max_states: &[u32]) -> Self {
        StateIter {
            max_states: max_states.to_vec(),
            next: Some(vec![0; max_states.len()]),
        }
    }
}

impl Iterator for StateIter {
    type Item = StateVector;

    fn next(&mut self) -> Option<StateVector> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut k = self.max_states.len();
        loop {
            if k == 0 {
                self.next = None;
                break;
            }
            k -= 1;
            if succ[k] < self.max_states[k] {
                succ[k] += 1;
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(StateVector(current))
    }
}

//! Exact conversion of probability-ready expressions into level
//! probabilities.
//!
//! Arithmetic is exact rational throughout. Distributions entered as
//! floats are embedded exactly (every float is a rational); the mode only
//! controls the mass-sum validation tolerance and the oracle comparison
//! tolerance.

use num::{One, Signed, Zero};

use crate::disjoint::{pre_for, PreMethod};
use crate::error::{Error, Result};
use crate::expr::{is_pre, InstanceSet, Perspective, SopExpression};
use crate::oracle::{build_table, LevelSelector};
use crate::system::{format_ratio, Ratio, StateCap, StateVector, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionMode {
    Exact,
    Float,
}

pub(crate) fn float_tolerance() -> Ratio {
    Ratio::from_float(1e-12).expect("tolerance is finite")
}

/// Per-component probability masses over states `0..=m_k`, for
/// statistically independent components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDistribution {
    masses: Vec<Vec<Ratio>>,
    mode: DistributionMode,
}

impl ComponentDistribution {
    pub fn new(
        spec: &SystemSpec,
        masses: Vec<Vec<Ratio>>,
        mode: DistributionMode,
    ) -> Result<Self> {
        if masses.len() != spec.component_count() {
            return Err(Error::InvalidDistribution(format!(
                "expected masses for {} components, got {}",
                spec.component_count(),
                masses.len()
            )));
        }
        for (k, component) in masses.iter().enumerate() {
            let expected = spec.max_state(k) as usize + 1;
            if component.len() != expected {
                return Err(Error::InvalidDistribution(format!(
                    "component {} needs {} masses, got {}",
                    k + 1,
                    expected,
                    component.len()
                )));
            }
            if let Some(neg) = component.iter().find(|p| p.is_negative()) {
                return Err(Error::InvalidDistribution(format!(
                    "component {} has a negative mass {}",
                    k + 1,
                    format_ratio(neg)
                )));
            }
            let sum: Ratio = component.iter().sum();
            let ok = match mode {
                DistributionMode::Exact => sum.is_one(),
                DistributionMode::Float => (sum.clone() - Ratio::one()).abs() <= float_tolerance(),
            };
            if !ok {
                return Err(Error::InvalidDistribution(format!(
                    "component {} masses sum to {}, not 1",
                    k + 1,
                    format_ratio(&sum)
                )));
            }
        }
        Ok(ComponentDistribution { masses, mode })
    }

    /// Uniform mass `1/(m_k+1)` over every component's states.
    pub fn uniform(spec: &SystemSpec) -> Self {
        let masses = spec
            .max_states()
            .iter()
            .map(|&m| {
                let p = Ratio::new(1.into(), (i64::from(m) + 1).into());
                vec![p; m as usize + 1]
            })
            .collect();
        ComponentDistribution {
            masses,
            mode: DistributionMode::Exact,
        }
    }

    /// All mass on one state vector.
    pub fn degenerate(spec: &SystemSpec, state: &StateVector) -> Result<Self> {
        spec.check_state(state)?;
        let masses = spec
            .max_states()
            .iter()
            .zip(state.values())
            .map(|(&m, &v)| {
                (0..=m)
                    .map(|s| if s == v { Ratio::one() } else { Ratio::zero() })
                    .collect()
            })
            .collect();
        Ok(ComponentDistribution {
            masses,
            mode: DistributionMode::Exact,
        })
    }

    /// Exact embedding of float masses; validates to the 1e-12 tolerance.
    pub fn from_floats(spec: &SystemSpec, masses: Vec<Vec<f64>>) -> Result<Self> {
        let converted: Result<Vec<Vec<Ratio>>> = masses
            .into_iter()
            .enumerate()
            .map(|(k, component)| {
                component
                    .into_iter()
                    .map(|p| {
                        Ratio::from_float(p).ok_or_else(|| {
                            Error::InvalidDistribution(format!(
                                "component {} has a non-finite mass {p}",
                                k + 1
                            ))
                        })
                    })
                    .collect()
            })
            .collect();
        ComponentDistribution::new(spec, converted?, DistributionMode::Float)
    }

    pub fn mode(&self) -> DistributionMode {
        self.mode
    }

    pub fn mass(&self, k: usize, v: u32) -> &Ratio {
        &self.masses[k][v as usize]
    }

    pub fn masses(&self) -> &[Vec<Ratio>] {
        &self.masses
    }

    /// Expectation of the literal `Xk{set}`: the summed masses.
    pub fn set_expectation(&self, k: usize, set: &InstanceSet) -> Ratio {
        set.values().iter().map(|&v| self.mass(k, v).clone()).sum()
    }

    /// Product-measure weight of one state.
    pub fn state_probability(&self, x: &StateVector) -> Ratio {
        x.values()
            .iter()
            .enumerate()
            .map(|(k, &v)| self.mass(k, v).clone())
            .product()
    }

    /// Equality up to the mode's tolerance (exact, or 1e-12 for floats).
    pub fn agrees(&self, a: &Ratio, b: &Ratio) -> bool {
        match self.mode {
            DistributionMode::Exact => a == b,
            DistributionMode::Float => (a.clone() - b).abs() <= float_tolerance(),
        }
    }
}

/// The one-to-one transform of a probability-ready expression: the sum over
/// terms of the product over components of the literal expectations.
/// Refuses expressions with overlapping terms.
pub fn expectation_of_pre(
    spec: &SystemSpec,
    e: &SopExpression,
    d: &ComponentDistribution,
) -> Result<Ratio> {
    let verdict = is_pre(e, spec);
    if let Some((first, second)) = verdict.overlapping_pair {
        return Err(Error::NotPre { first, second });
    }
    Ok(e.terms
        .iter()
        .map(|term| {
            (0..spec.component_count())
                .map(|k| d.set_expectation(k, &term.effective_set(k, spec)))
                .product::<Ratio>()
        })
        .sum())
}

/// Exact level probabilities from one perspective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityReport {
    pub perspective: Perspective,
    pub method: PreMethod,
    /// `P(S >= j)` for `j = 0..=M`.
    pub at_least: Vec<Ratio>,
    /// `P(S <= j)` for `j = 0..=M`.
    pub at_most: Vec<Ratio>,
    /// `P(S = j)` for `j = 0..=M`.
    pub exactly: Vec<Ratio>,
    /// Shellability verdicts `(level, flag)` for the generated PREs, when
    /// the shelling method was used.
    pub shellable: Vec<(u32, Option<bool>)>,
    /// Whether every probability matches the brute-force state scan.
    pub oracle_agrees: bool,
}

fn check_against_oracle(
    spec: &SystemSpec,
    d: &ComponentDistribution,
    report_at_least: &[Ratio],
    report_exactly: &[Ratio],
    cap: StateCap,
) -> Result<bool> {
    let table = build_table(spec, cap)?;
    let top = spec.top_level();
    for j in 0..=top {
        let oracle_ge = table.probability(d, &LevelSelector::at_least(j, top));
        if !d.agrees(&report_at_least[j as usize], &oracle_ge) {
            return Ok(false);
        }
        let oracle_eq = table.probability(d, &LevelSelector::exactly(j));
        if !d.agrees(&report_exactly[j as usize], &oracle_eq) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Level probabilities through the success pipeline: expectations of the
/// `S >= j` expressions for `j = M..1`, then the telescoping differences.
pub fn level_probabilities_success(
    spec: &SystemSpec,
    d: &ComponentDistribution,
    method: PreMethod,
    cap: StateCap,
) -> Result<ProbabilityReport> {
    let top = spec.top_level() as usize;
    let mut at_least = vec![Ratio::one(); top + 1];
    let mut shellable = Vec::new();
    for j in (1..=top).rev() {
        let pre = pre_for(spec, j as u32, Perspective::Success, method, cap)?;
        at_least[j] = expectation_of_pre(spec, &pre.expression, d)?;
        shellable.push((j as u32, pre.shellable));
    }

    let mut exactly = vec![Ratio::zero(); top + 1];
    exactly[top] = at_least[top].clone();
    for j in (0..top).rev() {
        exactly[j] = at_least[j].clone() - &at_least[j + 1];
    }
    let mut at_most = vec![Ratio::one(); top + 1];
    for (j, slot) in at_most.iter_mut().enumerate().take(top) {
        *slot = Ratio::one() - &at_least[j + 1];
    }

    let oracle_agrees = check_against_oracle(spec, d, &at_least, &exactly, cap)?;
    Ok(ProbabilityReport {
        perspective: Perspective::Success,
        method,
        at_least,
        at_most,
        exactly,
        shellable,
        oracle_agrees,
    })
}

/// Level probabilities through the failure pipeline: expectations of the
/// `S <= j` expressions for `j = 0..M-1`, then the telescoping differences.
pub fn level_probabilities_failure(
    spec: &SystemSpec,
    d: &ComponentDistribution,
    method: PreMethod,
    cap: StateCap,
) -> Result<ProbabilityReport> {
    let top = spec.top_level() as usize;
    let mut at_most = vec![Ratio::one(); top + 1];
    let mut shellable = Vec::new();
    for (j, slot) in at_most.iter_mut().enumerate().take(top) {
        // Failure at level j+1 is the lower value S <= j.
        let pre = pre_for(spec, j as u32 + 1, Perspective::Failure, method, cap)?;
        *slot = expectation_of_pre(spec, &pre.expression, d)?;
        shellable.push((j as u32 + 1, pre.shellable));
    }

    let mut exactly = vec![Ratio::zero(); top + 1];
    exactly[0] = at_most[0].clone();
    for j in 1..top {
        exactly[j] = at_most[j].clone() - &at_most[j - 1];
    }
    exactly[top] = Ratio::one() - &at_most[top - 1];
    let mut at_least = vec![Ratio::one(); top + 1];
    for j in 1..=top {
        at_least[j] = Ratio::one() - &at_most[j - 1];
    }

    let oracle_agrees = check_against_oracle(spec, d, &at_least, &exactly, cap)?;
    Ok(ProbabilityReport {
        perspective: Perspective::Failure,
        method,
        at_least,
        at_most,
        exactly,
        shellable,
        oracle_agrees,
    })
}

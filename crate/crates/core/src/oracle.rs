//! Brute-force ground truth: exhaustive evaluation of the whole state
//! lattice, used by every cross-check.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::Result;
use crate::expr::SopExpression;
use crate::probability::ComponentDistribution;
use crate::stateset::StateSet;
use crate::system::{format_ratio, Ratio, StateCap, StateVector, SystemSpec};

/// One evaluated state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub state: StateVector,
    pub weighted_sum: Ratio,
    pub level: u32,
}

/// The fully evaluated state space, in ascending lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpaceTable {
    rows: Vec<TableRow>,
    level_counts: Vec<u64>,
}

/// A set of system levels used to select states from the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSelector(BTreeSet<u32>);

impl LevelSelector {
    pub fn none() -> Self {
        LevelSelector(BTreeSet::new())
    }

    pub fn exactly(j: u32) -> Self {
        LevelSelector(BTreeSet::from([j]))
    }

    pub fn at_least(j: u32, top: u32) -> Self {
        LevelSelector((j..=top).collect())
    }

    pub fn at_most(j: u32) -> Self {
        LevelSelector((0..=j).collect())
    }

    pub fn contains(&self, level: u32) -> bool {
        self.0.contains(&level)
    }
}

/// Evaluates every state of the lattice.
pub fn build_table(spec: &SystemSpec, cap: StateCap) -> Result<StateSpaceTable> {
    spec.ensure_within_cap(cap)?;
    let mut rows = Vec::with_capacity(spec.state_space_size() as usize);
    let mut level_counts = vec![0u64; spec.top_level() as usize + 1];
    for state in spec.states() {
        let weighted_sum = spec.weighted_sum(&state)?;
        let level = spec.evaluate(&state)?;
        level_counts[level as usize] += 1;
        rows.push(TableRow {
            state,
            weighted_sum,
            level,
        });
    }
    Ok(StateSpaceTable { rows, level_counts })
}

impl StateSpaceTable {
    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// States per level, indexed by level.
    pub fn level_counts(&self) -> &[u64] {
        &self.level_counts
    }

    /// Probability mass of the selected levels under the product measure.
    pub fn probability(&self, d: &ComponentDistribution, selector: &LevelSelector) -> Ratio {
        self.rows
            .iter()
            .filter(|row| selector.contains(row.level))
            .map(|row| d.state_probability(&row.state))
            .sum()
    }

    /// The selected states as a bit set over state indices.
    pub fn level_state_set(&self, spec: &SystemSpec, selector: &LevelSelector) -> StateSet {
        let mut set = StateSet::empty(self.rows.len());
        for row in &self.rows {
            if selector.contains(row.level) {
                set.insert(spec.state_index(&row.state));
            }
        }
        set
    }

    /// CSV dump with columns `x_1..x_n, weighted_sum, level`.
    pub fn to_csv(&self, spec: &SystemSpec) -> String {
        let mut out = String::new();
        for k in 0..spec.component_count() {
            let _ = write!(out, "x_{},", k + 1);
        }
        out.push_str("weighted_sum,level\n");
        for row in &self.rows {
            for v in row.state.values() {
                let _ = write!(out, "{v},");
            }
            let _ = writeln!(out, "{},{}", format_ratio(&row.weighted_sum), row.level);
        }
        out
    }
}

/// How an expression's denotation compares against a level set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceVerdict {
    pub equal: bool,
    /// Selected states the expression misses (first few).
    pub missing: Vec<StateVector>,
    /// Covered states outside the selection (first few).
    pub extra: Vec<StateVector>,
    pub missing_count: usize,
    pub extra_count: usize,
}

const DIFF_SAMPLE: usize = 8;

/// Checks that an expression denotes exactly the selected level set,
/// reporting the symmetric difference otherwise.
pub fn assert_equivalent(
    spec: &SystemSpec,
    e: &SopExpression,
    selector: &LevelSelector,
    cap: StateCap,
) -> Result<EquivalenceVerdict> {
    let table = build_table(spec, cap)?;
    let denoted = e.denotation(spec, cap)?;
    let selected = table.level_state_set(spec, selector);
    let missing_set = selected.minus(&denoted);
    let extra_set = denoted.minus(&selected);
    let missing_count = missing_set.len();
    let extra_count = extra_set.len();
    let collect = |set: &StateSet| -> Vec<StateVector> {
        set.iter().take(DIFF_SAMPLE).map(|i| spec.state_at(i)).collect()
    };
    Ok(EquivalenceVerdict {
        equal: missing_count == 0 && extra_count == 0,
        missing: collect(&missing_set),
        extra: collect(&extra_set),
        missing_count,
        extra_count,
    })
}

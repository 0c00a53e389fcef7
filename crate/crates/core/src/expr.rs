//! Multi-valued Boolean expression algebra: literals over instance sets,
//! product terms and sum-of-products expressions.
//!
//! A literal `Xk{a,b,..}` is the indicator that component `k` sits in one of
//! the listed states. The singleton literals of one component are
//! orthonormal: pairwise disjoint and exhaustive. Upper values `Xk{>=j}`
//! and lower values `Xk{<=j}` are the suffix/prefix unions used to read
//! success and failure expressions straight off the boundary vectors.

use std::fmt::Write as _;

use crate::boundary::{BoundaryKind, BoundaryVectorSet};
use crate::error::{Error, Result};
use crate::stateset::StateSet;
use crate::system::{StateCap, StateVector, SystemSpec};

/// A non-empty, sorted set of states of a single component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InstanceSet(Vec<u32>);

impl InstanceSet {
    /// Builds a set from arbitrary values; sorts and deduplicates.
    pub fn new(mut values: Vec<u32>) -> Result<Self> {
        values.sort_unstable();
        values.dedup();
        if values.is_empty() {
            return Err(Error::InvalidArgument(
                "instance set must not be empty; represent the constant 0 at the term level"
                    .into(),
            ));
        }
        Ok(InstanceSet(values))
    }

    pub fn singleton(v: u32) -> Self {
        InstanceSet(vec![v])
    }

    /// Upper value `{j..=m}`.
    pub fn at_least(j: u32, m: u32) -> Self {
        InstanceSet((j..=m).collect())
    }

    /// Lower value `{0..=j}`.
    pub fn at_most(j: u32) -> Self {
        InstanceSet((0..=j).collect())
    }

    /// The constant-1 set `{0..=m}`.
    pub fn full(m: u32) -> Self {
        InstanceSet((0..=m).collect())
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_full(&self, m: u32) -> bool {
        self.0.len() == m as usize + 1
    }

    /// `Some(j)` when the set is exactly `{j..=m}`.
    pub fn as_suffix(&self, m: u32) -> Option<u32> {
        let first = *self.0.first().unwrap();
        (*self.0.last().unwrap() == m && self.0.len() as u32 == m - first + 1).then_some(first)
    }

    /// `Some(j)` when the set is exactly `{0..=j}`.
    pub fn as_prefix(&self) -> Option<u32> {
        let last = *self.0.last().unwrap();
        (*self.0.first().unwrap() == 0 && self.0.len() as u32 == last + 1).then_some(last)
    }

    pub fn intersect(&self, other: &InstanceSet) -> Option<InstanceSet> {
        let values: Vec<u32> = self.0.iter().filter(|v| other.contains(**v)).copied().collect();
        (!values.is_empty()).then_some(InstanceSet(values))
    }

    pub fn union(&self, other: &InstanceSet) -> InstanceSet {
        let mut values = self.0.clone();
        values.extend_from_slice(&other.0);
        values.sort_unstable();
        values.dedup();
        InstanceSet(values)
    }

    /// Complement within `{0..=m}`, or `None` when the set is full.
    pub fn complement(&self, m: u32) -> Option<InstanceSet> {
        let values: Vec<u32> = (0..=m).filter(|v| !self.contains(*v)).collect();
        (!values.is_empty()).then_some(InstanceSet(values))
    }

    pub fn is_subset_of(&self, other: &InstanceSet) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn is_disjoint_from(&self, other: &InstanceSet) -> bool {
        self.0.iter().all(|v| !other.contains(*v))
    }
}

/// One literal: a component index paired with its instance set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvLiteral {
    pub var: usize,
    pub instances: InstanceSet,
}

/// Rendering style for literal instance sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiteralStyle {
    /// Suffix sets print as `Xk{>=j}`; anything else as an explicit list.
    UpperSugar,
    /// Prefix sets print as `Xk{<=j}`; anything else as an explicit list.
    LowerSugar,
    /// Always the explicit list `Xk{a,b,..}`.
    Explicit,
}

fn render_literal(var: usize, set: &InstanceSet, m: u32, style: LiteralStyle) -> String {
    let name = format!("X{}", var + 1);
    match style {
        LiteralStyle::UpperSugar => {
            if let Some(j) = set.as_suffix(m) {
                return format!("{name}{{>={j}}}");
            }
        }
        LiteralStyle::LowerSugar => {
            if let Some(j) = set.as_prefix() {
                return format!("{name}{{<={j}}}");
            }
        }
        LiteralStyle::Explicit => {}
    }
    let mut out = format!("{name}{{");
    for (i, v) in set.values().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v}");
    }
    out.push('}');
    out
}

/// A conjunction of at most one literal per component.
///
/// `None` entries stand for the constant-1 full set; some constructors keep
/// full sets stored explicitly for display parity, which never changes the
/// denotation (comparisons go through the effective sets).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductTerm {
    sets: Vec<Option<InstanceSet>>,
}

impl ProductTerm {
    /// The constant-1 term over `n` components.
    pub fn constant_one(n: usize) -> Self {
        ProductTerm {
            sets: vec![None; n],
        }
    }

    pub fn from_sets(sets: Vec<Option<InstanceSet>>) -> Self {
        ProductTerm { sets }
    }

    /// Success term of one MUV: `AND_k Xk{>= v_k}` with full sets stored
    /// explicitly so zero coordinates still print as `Xk{>=0}`.
    pub fn from_muv(spec: &SystemSpec, v: &StateVector) -> Self {
        ProductTerm {
            sets: v
                .values()
                .iter()
                .enumerate()
                .map(|(k, &c)| Some(InstanceSet::at_least(c, spec.max_state(k))))
                .collect(),
        }
    }

    /// Failure term of one MLV: `AND_k Xk{<= v_k}`.
    pub fn from_mlv(_spec: &SystemSpec, v: &StateVector) -> Self {
        ProductTerm {
            sets: v
                .values()
                .iter()
                .map(|&c| Some(InstanceSet::at_most(c)))
                .collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.sets.len()
    }

    pub fn set(&self, k: usize) -> Option<&InstanceSet> {
        self.sets[k].as_ref()
    }

    /// The stored literals, skipping absent (constant-1) components.
    pub fn literals(&self) -> impl Iterator<Item = MvLiteral> + '_ {
        self.sets.iter().enumerate().filter_map(|(var, s)| {
            s.as_ref().map(|instances| MvLiteral {
                var,
                instances: instances.clone(),
            })
        })
    }

    /// The instance set of component `k` with absent literals expanded.
    pub fn effective_set(&self, k: usize, spec: &SystemSpec) -> InstanceSet {
        self.sets[k]
            .clone()
            .unwrap_or_else(|| InstanceSet::full(spec.max_state(k)))
    }

    /// Number of restricted (non-constant) literals.
    pub fn literal_count(&self, spec: &SystemSpec) -> usize {
        self.sets
            .iter()
            .enumerate()
            .filter(|(k, s)| match s {
                Some(set) => !set.is_full(spec.max_state(*k)),
                None => false,
            })
            .count()
    }

    /// Number of lattice cells the term covers.
    pub fn cell_count(&self, spec: &SystemSpec) -> u128 {
        self.sets
            .iter()
            .enumerate()
            .map(|(k, s)| match s {
                Some(set) => set.len() as u128,
                None => u128::from(spec.max_state(k)) + 1,
            })
            .product()
    }

    pub fn covers(&self, x: &StateVector) -> bool {
        self.sets
            .iter()
            .zip(x.values())
            .all(|(s, &v)| s.as_ref().is_none_or(|set| set.contains(v)))
    }

    /// Copy with component `k` narrowed to `set`; `None` when that empties
    /// the term.
    pub fn narrowed(&self, k: usize, set: &InstanceSet, spec: &SystemSpec) -> Option<ProductTerm> {
        let narrowed = self.effective_set(k, spec).intersect(set)?;
        let mut sets = self.sets.clone();
        sets[k] = if narrowed.is_full(spec.max_state(k)) && self.sets[k].is_none() {
            None
        } else {
            Some(narrowed)
        };
        Some(ProductTerm { sets })
    }

    /// True when the two terms share no cell: some component carries
    /// disjoint instance sets.
    pub fn is_disjoint_with(&self, other: &ProductTerm, _spec: &SystemSpec) -> bool {
        self.sets.iter().zip(&other.sets).any(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => a.is_disjoint_from(b),
            _ => false,
        })
    }

    /// True when `other`'s cover is contained in this term's cover.
    pub fn subsumes(&self, other: &ProductTerm, spec: &SystemSpec) -> bool {
        (0..self.sets.len()).all(|k| {
            other
                .effective_set(k, spec)
                .is_subset_of(&self.effective_set(k, spec))
        })
    }

    /// Equality of denotations, treating stored full sets as absent ones.
    pub fn equivalent(&self, other: &ProductTerm, spec: &SystemSpec) -> bool {
        (0..self.sets.len()).all(|k| self.effective_set(k, spec) == other.effective_set(k, spec))
    }

    /// Every covered state, in ascending lexicographic order.
    pub fn cells(&self, spec: &SystemSpec) -> Vec<StateVector> {
        let sets: Vec<InstanceSet> = (0..self.arity())
            .map(|k| self.effective_set(k, spec))
            .collect();
        let mut cells = Vec::new();
        let mut cursor = vec![0usize; sets.len()];
        loop {
            cells.push(StateVector::new(
                cursor
                    .iter()
                    .zip(&sets)
                    .map(|(&i, s)| s.values()[i])
                    .collect(),
            ));
            let mut k = sets.len();
            loop {
                if k == 0 {
                    return cells;
                }
                k -= 1;
                if cursor[k] + 1 < sets[k].len() {
                    cursor[k] += 1;
                    break;
                }
                cursor[k] = 0;
            }
        }
    }

    pub fn render(&self, spec: &SystemSpec, style: LiteralStyle) -> String {
        let parts: Vec<String> = self
            .sets
            .iter()
            .enumerate()
            .filter_map(|(k, s)| {
                s.as_ref()
                    .map(|set| render_literal(k, set, spec.max_state(k), style))
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

/// Whether a level is analyzed through its success (`S >= j`) or its
/// failure (`S <= j - 1`) function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perspective {
    Success,
    Failure,
}

impl std::fmt::Display for Perspective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Perspective::Success => write!(f, "success"),
            Perspective::Failure => write!(f, "failure"),
        }
    }
}

impl std::str::FromStr for Perspective {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "success" => Ok(Perspective::Success),
            "failure" => Ok(Perspective::Failure),
            other => Err(format!("unknown perspective {other:?}; use success or failure")),
        }
    }
}

/// What a sum-of-products expression claims to describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExprTarget {
    /// System success at the level: `S >= j`.
    SuccessAtLevel(u32),
    /// System failure at the level: `S <= j - 1`.
    FailureAtLevel(u32),
    /// The exact-level indicator `S = j`.
    ExactLevel(u32),
}

impl ExprTarget {
    /// The set of levels whose states the target covers, as an inclusive
    /// `(lo, hi)` range of levels.
    pub fn level_range(&self, top_level: u32) -> (u32, u32) {
        match *self {
            ExprTarget::SuccessAtLevel(j) => (j, top_level),
            ExprTarget::FailureAtLevel(j) => (0, j.saturating_sub(1)),
            ExprTarget::ExactLevel(j) => (j, j),
        }
    }
}

impl std::fmt::Display for ExprTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExprTarget::SuccessAtLevel(j) => write!(f, "S{{>={j}}}"),
            ExprTarget::FailureAtLevel(j) => write!(f, "S{{<={}}}", j.saturating_sub(1)),
            ExprTarget::ExactLevel(j) => write!(f, "S{{{j}}}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Minimal,
    Disjoint,
}

/// An ordered disjunction of product terms with its intended reading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SopExpression {
    pub terms: Vec<ProductTerm>,
    pub target: ExprTarget,
    pub form: Form,
    pub style: LiteralStyle,
}

impl SopExpression {
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Canonical text rendering: terms joined by `" ∨ "`, or `" + "` in
    /// ASCII mode; the empty expression prints as `"0"`.
    pub fn render(&self, spec: &SystemSpec, ascii: bool) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let joiner = if ascii { " + " } else { " \u{2228} " };
        self.terms
            .iter()
            .map(|t| t.render(spec, self.style))
            .collect::<Vec<_>>()
            .join(joiner)
    }

    /// Exact set of states covered by the expression.
    pub fn denotation(&self, spec: &SystemSpec, cap: StateCap) -> Result<StateSet> {
        spec.ensure_within_cap(cap)?;
        let mut set = StateSet::empty(spec.state_space_size() as usize);
        for term in &self.terms {
            for cell in term.cells(spec) {
                set.insert(spec.state_index(&cell));
            }
        }
        Ok(set)
    }
}

/// Verdict of the probability-ready check.
///
/// Condition (a), pairwise term disjointness, is tested; condition (b),
/// independence of ANDed factors, holds by construction because every term
/// multiplies single-component literals of statistically independent
/// components, and the verdict carries that justification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreVerdict {
    pub is_pre: bool,
    /// Indices of the first overlapping term pair, if any.
    pub overlapping_pair: Option<(usize, usize)>,
    pub independence_note: &'static str,
}

pub const INDEPENDENCE_NOTE: &str = "ANDed factors are single-component literals of \
statistically independent components, so they are independent by construction";

/// True iff some component opposes the two terms with disjoint instance sets.
pub fn is_disjoint_pair(a: &ProductTerm, b: &ProductTerm, spec: &SystemSpec) -> bool {
    a.is_disjoint_with(b, spec)
}

/// Checks that all term pairs are disjoint, which makes the expression
/// probability-ready.
pub fn is_pre(e: &SopExpression, spec: &SystemSpec) -> PreVerdict {
    for i in 0..e.terms.len() {
        for j in i + 1..e.terms.len() {
            if !e.terms[i].is_disjoint_with(&e.terms[j], spec) {
                return PreVerdict {
                    is_pre: false,
                    overlapping_pair: Some((i, j)),
                    independence_note: INDEPENDENCE_NOTE,
                };
            }
        }
    }
    PreVerdict {
        is_pre: true,
        overlapping_pair: None,
        independence_note: INDEPENDENCE_NOTE,
    }
}

/// Minimal sum-of-products for success at the set's level: one prime
/// implicant `AND_k Xk{>= v_k}` per MUV.
pub fn sop_from_muvs(spec: &SystemSpec, muvs: &BoundaryVectorSet) -> Result<SopExpression> {
    if muvs.kind != BoundaryKind::Muv {
        return Err(Error::InvalidArgument(
            "success expressions are generated from MUV sets".into(),
        ));
    }
    Ok(SopExpression {
        terms: muvs
            .vectors
            .iter()
            .map(|v| ProductTerm::from_muv(spec, v))
            .collect(),
        target: ExprTarget::SuccessAtLevel(muvs.level),
        form: Form::Minimal,
        style: LiteralStyle::UpperSugar,
    })
}

/// Minimal sum-of-products for failure at level `j + 1` (that is,
/// `S <= j`): one prime implicant `AND_k Xk{<= v_k}` per MLV.
pub fn sop_from_mlvs(spec: &SystemSpec, mlvs: &BoundaryVectorSet) -> Result<SopExpression> {
    if mlvs.kind != BoundaryKind::Mlv {
        return Err(Error::InvalidArgument(
            "failure expressions are generated from MLV sets".into(),
        ));
    }
    Ok(SopExpression {
        terms: mlvs
            .vectors
            .iter()
            .map(|v| ProductTerm::from_mlv(spec, v))
            .collect(),
        target: ExprTarget::FailureAtLevel(mlvs.level + 1),
        form: Form::Minimal,
        style: LiteralStyle::LowerSugar,
    })
}

//! Conversion of minimal sum-of-products expressions into disjoint,
//! probability-ready form.
//!
//! Three routes are provided:
//!
//! * shelling — searches for an ordering of the prime implicants whose
//!   successive residuals are single subcubes, keeping one disjoint term
//!   per implicant;
//! * reflection — the algebraic rewrite `A v B = A v (A/C)' B` with the
//!   complement expanded into mutually disjoint pieces, which always
//!   terminates but may grow the term count;
//! * expansion — the multi-valued Boole-Shannon expansion about successive
//!   components, whose leaves are disjoint by orthonormality of instances.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::expr::{
    sop_from_mlvs, sop_from_muvs, ExprTarget, Form, InstanceSet, LiteralStyle, Perspective,
    ProductTerm, SopExpression,
};
use crate::boundary::{enumerate_mlvs, enumerate_muvs};
use crate::stateset::StateSet;
use crate::system::{StateCap, SystemSpec};

/// Which disjointing procedure generated a probability-ready expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreMethod {
    Shelling,
    Reflection,
    Expansion,
}

impl std::fmt::Display for PreMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PreMethod::Shelling => write!(f, "shelling"),
            PreMethod::Reflection => write!(f, "reflection"),
            PreMethod::Expansion => write!(f, "expansion"),
        }
    }
}

impl std::str::FromStr for PreMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "shelling" => Ok(PreMethod::Shelling),
            "reflection" => Ok(PreMethod::Reflection),
            "expansion" => Ok(PreMethod::Expansion),
            other => Err(format!(
                "unknown method {other:?}; use shelling, reflection or expansion"
            )),
        }
    }
}

/// A probability-ready expression together with the shellability verdict
/// when the shelling route was asked for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreResult {
    pub expression: SopExpression,
    /// `Some(true)` when shelling succeeded with one term per prime
    /// implicant, `Some(false)` when it fell back to reflection, `None`
    /// for the other methods.
    pub shellable: Option<bool>,
}

fn cover_of(spec: &SystemSpec, term: &ProductTerm) -> StateSet {
    let mut set = StateSet::empty(spec.state_space_size() as usize);
    for cell in term.cells(spec) {
        set.insert(spec.state_index(&cell));
    }
    set
}

/// The residual of `cover` against `union`, as a single product term if it
/// is one (nonempty and exactly a subcube).
fn residual_term(spec: &SystemSpec, cover: &StateSet, union: &StateSet) -> Option<ProductTerm> {
    let residual = cover.minus(union);
    let count = residual.len();
    if count == 0 {
        return None;
    }
    let n = spec.component_count();
    let mut values: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
    for index in residual.iter() {
        let state = spec.state_at(index);
        for (seen, &v) in values.iter_mut().zip(state.values()) {
            seen.insert(v);
        }
    }
    let product: u128 = values.iter().map(|s| s.len() as u128).product();
    if product != count as u128 {
        return None;
    }
    let sets = values
        .into_iter()
        .map(|s| Some(InstanceSet::new(s.into_iter().collect()).expect("residual is nonempty")))
        .collect();
    Some(ProductTerm::from_sets(sets))
}

fn try_order(
    spec: &SystemSpec,
    covers: &[StateSet],
    order: &[usize],
) -> Option<Vec<ProductTerm>> {
    let mut union = StateSet::empty(spec.state_space_size() as usize);
    let mut terms = Vec::with_capacity(order.len());
    for &i in order {
        let term = residual_term(spec, &covers[i], &union)?;
        union.union_with(&covers[i]);
        terms.push(term);
    }
    Some(terms)
}

const BACKTRACK_PI_LIMIT: usize = 20;
const BACKTRACK_NODE_BUDGET: usize = 500_000;

fn backtrack(
    spec: &SystemSpec,
    covers: &[StateSet],
    union: &StateSet,
    used: u32,
    acc: &mut Vec<ProductTerm>,
    dead: &mut HashSet<u32>,
    budget: &mut usize,
) -> bool {
    if acc.len() == covers.len() {
        return true;
    }
    if dead.contains(&used) {
        return false;
    }
    for (i, cover) in covers.iter().enumerate() {
        if used & (1 << i) != 0 {
            continue;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        if let Some(term) = residual_term(spec, cover, union) {
            let mut next_union = union.clone();
            next_union.union_with(cover);
            acc.push(term);
            if backtrack(spec, covers, &next_union, used | (1 << i), acc, dead, budget) {
                return true;
            }
            acc.pop();
        }
    }
    dead.insert(used);
    false
}

/// Searches for a shelling of the expression's prime implicants: an
/// ordering whose successive residuals are single subcubes. On success the
/// returned cover has exactly one disjoint term per implicant and the flag
/// is `true`; otherwise the reflection fallback is returned with `false`.
///
/// Tried in turn: the given term order, cell count ascending, cell count
/// descending, then a memoized backtracking search for up to
/// 20 implicants.
pub fn shellable_disjoint_cover(
    spec: &SystemSpec,
    e: &SopExpression,
    cap: StateCap,
) -> Result<(SopExpression, bool)> {
    spec.ensure_within_cap(cap)?;
    let rebuild = |terms: Vec<ProductTerm>| SopExpression {
        terms,
        target: e.target,
        form: Form::Disjoint,
        style: LiteralStyle::Explicit,
    };

    let covers: Vec<StateSet> = e.terms.iter().map(|t| cover_of(spec, t)).collect();

    let identity: Vec<usize> = (0..e.terms.len()).collect();
    let mut ascending = identity.clone();
    ascending.sort_by_key(|&i| e.terms[i].cell_count(spec));
    let mut descending = identity.clone();
    descending.sort_by_key(|&i| std::cmp::Reverse(e.terms[i].cell_count(spec)));

    for order in [&identity, &ascending, &descending] {
        if let Some(terms) = try_order(spec, &covers, order) {
            return Ok((rebuild(terms), true));
        }
    }

    if e.terms.len() <= BACKTRACK_PI_LIMIT {
        let mut acc = Vec::new();
        let mut dead = HashSet::new();
        let mut budget = BACKTRACK_NODE_BUDGET;
        let empty = StateSet::empty(spec.state_space_size() as usize);
        if backtrack(spec, &covers, &empty, 0, &mut acc, &mut dead, &mut budget) {
            return Ok((rebuild(acc), true));
        }
    }

    Ok((disjoint_via_reflection(spec, e)?, false))
}

/// Splits `piece AND NOT other` into mutually disjoint product terms via
/// the disjoint De Morgan expansion of the complemented quotient.
fn split_off(spec: &SystemSpec, piece: &ProductTerm, other: &ProductTerm) -> Vec<ProductTerm> {
    let opposed: Vec<usize> = (0..piece.arity())
        .filter(|&k| {
            !piece
                .effective_set(k, spec)
                .is_subset_of(&other.effective_set(k, spec))
        })
        .collect();
    let mut out = Vec::new();
    let mut inside = piece.clone();
    for (idx, &k) in opposed.iter().enumerate() {
        let restriction = other.effective_set(k, spec);
        let outside = restriction
            .complement(spec.max_state(k))
            .expect("an opposed variable is restricted");
        if let Some(p) = inside.narrowed(k, &outside, spec) {
            out.push(p);
        }
        if idx + 1 < opposed.len() {
            match inside.narrowed(k, &restriction, spec) {
                Some(next) => inside = next,
                None => break,
            }
        }
    }
    out
}

/// Replaces `pieces` by their parts disjoint from `minuend`, dropping
/// covered pieces and splitting overlapping ones.
fn subtract_term(
    spec: &SystemSpec,
    pieces: Vec<ProductTerm>,
    minuend: &ProductTerm,
) -> Vec<ProductTerm> {
    let mut next = Vec::new();
    for piece in pieces {
        if piece.is_disjoint_with(minuend, spec) {
            next.push(piece);
        } else if minuend.subsumes(&piece, spec) {
            // fully covered: absorbed
        } else {
            next.extend(split_off(spec, &piece, minuend));
        }
    }
    next
}

/// Sequential disjointing by the reflection rewrite: terms are pre-sorted
/// with fewer restricted literals first, subsumed terms absorbed, and each
/// remaining term split against all retained predecessors. The result is
/// always probability-ready; its term count may exceed the input's.
pub fn disjoint_via_reflection(spec: &SystemSpec, e: &SopExpression) -> Result<SopExpression> {
    let mut ordered = e.terms.clone();
    ordered.sort_by_key(|t| t.literal_count(spec));

    let mut kept: Vec<ProductTerm> = Vec::new();
    for term in ordered {
        if kept.iter().any(|a| a.subsumes(&term, spec)) {
            continue;
        }
        kept.retain(|a| !term.subsumes(a, spec));
        kept.push(term);
    }

    let mut result: Vec<ProductTerm> = Vec::new();
    for term in kept {
        let mut pieces = vec![term];
        for retained in &result {
            pieces = subtract_term(spec, pieces, retained);
            if pieces.is_empty() {
                break;
            }
        }
        result.extend(pieces);
    }

    Ok(SopExpression {
        terms: result,
        target: e.target,
        form: Form::Disjoint,
        style: LiteralStyle::Explicit,
    })
}

fn merge_adjacent(spec: &SystemSpec, terms: Vec<ProductTerm>, var: usize) -> Vec<ProductTerm> {
    let mut merged: Vec<ProductTerm> = Vec::new();
    let mut by_rest: HashMap<Vec<Option<InstanceSet>>, usize> = HashMap::new();
    for term in terms {
        let mut key: Vec<Option<InstanceSet>> = (0..term.arity())
            .map(|k| term.set(k).cloned())
            .collect();
        key.remove(var);
        match by_rest.get(&key) {
            Some(&slot) => {
                let existing = &merged[slot];
                let union = existing
                    .effective_set(var, spec)
                    .union(&term.effective_set(var, spec));
                let mut sets: Vec<Option<InstanceSet>> = (0..existing.arity())
                    .map(|k| existing.set(k).cloned())
                    .collect();
                sets[var] = if union.is_full(spec.max_state(var)) {
                    None
                } else {
                    Some(union)
                };
                merged[slot] = ProductTerm::from_sets(sets);
            }
            None => {
                by_rest.insert(key, merged.len());
                merged.push(term);
            }
        }
    }
    merged
}

/// Multi-valued Boole-Shannon expansion of the level function about
/// successive components. Subtrees where the threshold comparison is
/// already decided become constant leaves; the 1-leaves yield terms that
/// are disjoint by construction. A single merge sweep per component fuses
/// terms differing only in that component's instance set.
pub fn boole_shannon_pre(
    spec: &SystemSpec,
    level: u32,
    perspective: Perspective,
    cap: StateCap,
) -> Result<SopExpression> {
    spec.ensure_within_cap(cap)?;
    check_perspective_level(spec, level, perspective)?;
    let n = spec.component_count();
    let threshold = spec.scaled_threshold(level);
    let success = perspective == Perspective::Success;

    // suffix_max[k] = largest weighted sum contributable by components k..n.
    let mut suffix_max = vec![0i128; n + 1];
    for k in (0..n).rev() {
        suffix_max[k] =
            suffix_max[k + 1] + spec.scaled_weight(k) * i128::from(spec.max_state(k));
    }

    struct Expansion<'a> {
        spec: &'a SystemSpec,
        suffix_max: Vec<i128>,
        threshold: i128,
        success: bool,
        assigned: Vec<Option<u32>>,
        out: Vec<ProductTerm>,
    }

    impl Expansion<'_> {
        fn expand(&mut self, k: usize, sum: i128) {
            let lo = sum;
            let hi = sum + self.suffix_max[k];
            let (is_one, is_zero) = if self.success {
                (lo >= self.threshold, hi < self.threshold)
            } else {
                (hi < self.threshold, lo >= self.threshold)
            };
            if is_one {
                self.out.push(ProductTerm::from_sets(
                    self.assigned
                        .iter()
                        .map(|a| a.map(InstanceSet::singleton))
                        .collect(),
                ));
                return;
            }
            if is_zero {
                return;
            }
            debug_assert!(k < self.spec.component_count());
            for v in 0..=self.spec.max_state(k) {
                self.assigned[k] = Some(v);
                self.expand(k + 1, sum + self.spec.scaled_weight(k) * i128::from(v));
            }
            self.assigned[k] = None;
        }
    }

    let mut expansion = Expansion {
        spec,
        suffix_max,
        threshold,
        success,
        assigned: vec![None; n],
        out: Vec::new(),
    };
    expansion.expand(0, 0);
    let mut terms = expansion.out;

    for var in (0..n).rev() {
        terms = merge_adjacent(spec, terms, var);
    }

    Ok(SopExpression {
        terms,
        target: match perspective {
            Perspective::Success => ExprTarget::SuccessAtLevel(level),
            Perspective::Failure => ExprTarget::FailureAtLevel(level),
        },
        form: Form::Disjoint,
        style: LiteralStyle::Explicit,
    })
}

fn check_perspective_level(spec: &SystemSpec, level: u32, perspective: Perspective) -> Result<()> {
    match perspective {
        Perspective::Success => spec.check_level(level),
        Perspective::Failure => {
            if level < 1 || level > spec.top_level() {
                Err(Error::LevelOutOfRange {
                    level,
                    min: 1,
                    max: spec.top_level(),
                })
            } else {
                Ok(())
            }
        }
    }
}

/// The minimal sum-of-products of a level function, read off its boundary
/// vectors. Success at level 0 is the constant 1.
pub fn minimal_sop(
    spec: &SystemSpec,
    level: u32,
    perspective: Perspective,
    cap: StateCap,
) -> Result<SopExpression> {
    check_perspective_level(spec, level, perspective)?;
    match perspective {
        Perspective::Success => {
            if level == 0 {
                return Ok(SopExpression {
                    terms: vec![ProductTerm::constant_one(spec.component_count())],
                    target: ExprTarget::SuccessAtLevel(0),
                    form: Form::Minimal,
                    style: LiteralStyle::UpperSugar,
                });
            }
            sop_from_muvs(spec, &enumerate_muvs(spec, level, cap)?)
        }
        Perspective::Failure => sop_from_mlvs(spec, &enumerate_mlvs(spec, level - 1, cap)?),
    }
}

/// Generates the probability-ready expression of a level function by the
/// requested method.
pub fn pre_for(
    spec: &SystemSpec,
    level: u32,
    perspective: Perspective,
    method: PreMethod,
    cap: StateCap,
) -> Result<PreResult> {
    match method {
        PreMethod::Shelling => {
            let sop = minimal_sop(spec, level, perspective, cap)?;
            let (expression, shellable) = shellable_disjoint_cover(spec, &sop, cap)?;
            Ok(PreResult {
                expression,
                shellable: Some(shellable),
            })
        }
        PreMethod::Reflection => {
            let sop = minimal_sop(spec, level, perspective, cap)?;
            Ok(PreResult {
                expression: disjoint_via_reflection(spec, &sop)?,
                shellable: None,
            })
        }
        PreMethod::Expansion => Ok(PreResult {
            expression: boole_shannon_pre(spec, level, perspective, cap)?,
            shellable: None,
        }),
    }
}

/// Disjoint expression for the exact-level indicator `S = j`, built as
/// `PRE(S >= j)` with the success terms of level `j + 1` subtracted.
pub fn instance_expression(
    spec: &SystemSpec,
    j: u32,
    method: PreMethod,
    cap: StateCap,
) -> Result<SopExpression> {
    spec.check_level(j)?;
    let pre = pre_for(spec, j, Perspective::Success, method, cap)?.expression;
    if j == spec.top_level() {
        return Ok(SopExpression {
            target: ExprTarget::ExactLevel(j),
            ..pre
        });
    }
    let upper = minimal_sop(spec, j + 1, Perspective::Success, cap)?;
    let mut result = Vec::new();
    for term in pre.terms {
        let mut pieces = vec![term];
        for muv_term in &upper.terms {
            pieces = subtract_term(spec, pieces, muv_term);
            if pieces.is_empty() {
                break;
            }
        }
        result.extend(pieces);
    }
    Ok(SopExpression {
        terms: result,
        target: ExprTarget::ExactLevel(j),
        form: Form::Disjoint,
        style: LiteralStyle::Explicit,
    })
}

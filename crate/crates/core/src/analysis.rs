//! Per-level analysis bundles and the full cross-check suite.

use num::One;

use crate::boundary::{enumerate_mlvs, enumerate_muvs, verify_boundary_minimality, BoundaryVectorSet};
use crate::coherence::check_coherence;
use crate::disjoint::{minimal_sop, pre_for, PreMethod};
use crate::error::Result;
use crate::expr::{is_pre, Perspective, SopExpression};
use crate::oracle::{assert_equivalent, EquivalenceVerdict, LevelSelector};
use crate::probability::{
    expectation_of_pre, level_probabilities_failure, level_probabilities_success,
    ComponentDistribution,
};
use crate::system::{Ratio, StateCap, SystemSpec};

/// Everything the analysis derives about one level from one perspective.
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub level: u32,
    pub perspective: Perspective,
    pub method: PreMethod,
    pub boundary: BoundaryVectorSet,
    pub minimal_sop: SopExpression,
    pub pre: SopExpression,
    /// Shelling verdict, when the shelling method was used.
    pub shellable: Option<bool>,
    /// `P(S >= level)` or `P(S <= level - 1)`, when a distribution is given.
    pub probability: Option<Ratio>,
    /// Denotation check of the minimal expression against the level set.
    pub sop_verdict: EquivalenceVerdict,
    /// Denotation check of the PRE against the level set.
    pub pre_verdict: EquivalenceVerdict,
}

fn selector_for(spec: &SystemSpec, level: u32, perspective: Perspective) -> LevelSelector {
    match perspective {
        Perspective::Success => LevelSelector::at_least(level, spec.top_level()),
        Perspective::Failure => LevelSelector::at_most(level - 1),
    }
}

/// Runs the whole pipeline for one level: boundary vectors, minimal SOP,
/// PRE, probability and the oracle cross-checks.
pub fn analyze_level(
    spec: &SystemSpec,
    level: u32,
    perspective: Perspective,
    method: PreMethod,
    dist: Option<&ComponentDistribution>,
    cap: StateCap,
) -> Result<LevelReport> {
    let boundary = match perspective {
        Perspective::Success => enumerate_muvs(spec, level, cap)?,
        Perspective::Failure => enumerate_mlvs(spec, level - 1, cap)?,
    };
    let minimal = minimal_sop(spec, level, perspective, cap)?;
    let pre = pre_for(spec, level, perspective, method, cap)?;
    let selector = selector_for(spec, level, perspective);
    let sop_verdict = assert_equivalent(spec, &minimal, &selector, cap)?;
    let pre_verdict = assert_equivalent(spec, &pre.expression, &selector, cap)?;
    let probability = match dist {
        Some(d) => Some(expectation_of_pre(spec, &pre.expression, d)?),
        None => None,
    };
    Ok(LevelReport {
        level,
        perspective,
        method,
        boundary,
        minimal_sop: minimal,
        pre: pre.expression,
        shellable: pre.shellable,
        probability,
        sop_verdict,
        pre_verdict,
    })
}

/// One named check of the verification suite.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the full cross-check suite.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs every internal consistency check against the brute-force oracle:
/// coherence, boundary minimality and completeness, denotation equivalence
/// of the minimal SOPs and of all three PRE methods for every level and
/// both perspectives, PRE disjointness, and the success/failure probability
/// duality under the given (or uniform) distribution.
pub fn run_full_verification(
    spec: &SystemSpec,
    dist: Option<&ComponentDistribution>,
    cap: StateCap,
) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    let mut push = |name: String, passed: bool, detail: String| {
        checks.push(CheckResult {
            name,
            passed,
            detail,
        });
    };

    let coherence = check_coherence(spec, cap)?;
    push(
        "coherence".into(),
        coherence.coherent(),
        if coherence.coherent() {
            "causal, monotone, all components relevant".into()
        } else {
            format!(
                "causal={}, monotone={}, relevant={:?}",
                coherence.causal, coherence.monotone, coherence.relevant
            )
        },
    );

    for level in 1..=spec.top_level() {
        let muvs = enumerate_muvs(spec, level, cap)?;
        let verdict = verify_boundary_minimality(spec, &muvs, cap)?;
        push(
            format!("boundary: MUV set, level {level}"),
            verdict.is_ok(),
            match verdict.defects.first() {
                None => format!("{} vectors", muvs.len()),
                Some(d) => d.to_string(),
            },
        );
    }
    for level in 0..spec.top_level() {
        let mlvs = enumerate_mlvs(spec, level, cap)?;
        let verdict = verify_boundary_minimality(spec, &mlvs, cap)?;
        push(
            format!("boundary: MLV set, level {level}"),
            verdict.is_ok(),
            match verdict.defects.first() {
                None => format!("{} vectors", mlvs.len()),
                Some(d) => d.to_string(),
            },
        );
    }

    for perspective in [Perspective::Success, Perspective::Failure] {
        let lo = match perspective {
            Perspective::Success => 1,
            Perspective::Failure => 1,
        };
        for level in lo..=spec.top_level() {
            let selector = selector_for(spec, level, perspective);
            let minimal = minimal_sop(spec, level, perspective, cap)?;
            let verdict = assert_equivalent(spec, &minimal, &selector, cap)?;
            push(
                format!("minimal SOP = level set: {perspective} level {level}"),
                verdict.equal,
                format!(
                    "{} terms, missing {}, extra {}",
                    minimal.term_count(),
                    verdict.missing_count,
                    verdict.extra_count
                ),
            );
            for method in [PreMethod::Shelling, PreMethod::Reflection, PreMethod::Expansion] {
                let pre = pre_for(spec, level, perspective, method, cap)?;
                let disjoint = is_pre(&pre.expression, spec).is_pre;
                let verdict = assert_equivalent(spec, &pre.expression, &selector, cap)?;
                let shell_note = match pre.shellable {
                    Some(true) => ", shellable".to_string(),
                    Some(false) => ", not shellable (reflection fallback)".to_string(),
                    None => String::new(),
                };
                push(
                    format!("PRE ({method}) = level set: {perspective} level {level}"),
                    disjoint && verdict.equal,
                    format!(
                        "{} terms{}, disjoint={}, missing {}, extra {}",
                        pre.expression.term_count(),
                        shell_note,
                        disjoint,
                        verdict.missing_count,
                        verdict.extra_count
                    ),
                );
            }
        }
    }

    let uniform;
    let d = match dist {
        Some(d) => d,
        None => {
            uniform = ComponentDistribution::uniform(spec);
            &uniform
        }
    };
    for method in [PreMethod::Shelling, PreMethod::Reflection, PreMethod::Expansion] {
        let success = level_probabilities_success(spec, d, method, cap)?;
        let failure = level_probabilities_failure(spec, d, method, cap)?;
        let dual = success
            .exactly
            .iter()
            .zip(&failure.exactly)
            .all(|(a, b)| d.agrees(a, b));
        let total: Ratio = success.exactly.iter().sum();
        let sums_to_one = d.agrees(&total, &Ratio::one());
        push(
            format!("probability duality ({method})"),
            dual && sums_to_one && success.oracle_agrees && failure.oracle_agrees,
            format!(
                "duality={}, total=1: {}, oracle: success={}, failure={}",
                dual, sums_to_one, success.oracle_agrees, failure.oracle_agrees
            ),
        );
    }

    Ok(VerificationReport { checks })
}

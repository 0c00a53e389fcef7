//! Symbolic reliability analysis of coherent multi-state truly-threshold
//! systems.
//!
//! A truly-threshold system of `n` multi-state components sits at level `j`
//! exactly when the weighted sum of its component states falls in
//! `[T_j, T_{j+1})`. This crate characterizes such systems symbolically at
//! every level:
//!
//! * [`SystemSpec`] validates a definition and evaluates the multi-valued
//!   structure function exactly (rational weights and thresholds are
//!   rescaled to integers once, so threshold comparisons never see float
//!   drift);
//! * [`enumerate_muvs`] / [`enumerate_mlvs`] list the minimal upper and
//!   maximal lower vectors of every level, with an independent full-cone
//!   re-check in [`verify_boundary_minimality`];
//! * [`sop_from_muvs`] / [`sop_from_mlvs`] read minimal sum-of-products
//!   expressions for level success and failure straight off the boundary
//!   vectors, and [`shellable_disjoint_cover`], [`disjoint_via_reflection`]
//!   and [`boole_shannon_pre`] convert them to disjoint probability-ready
//!   form by three independent routes;
//! * [`expectation_of_pre`] and the level-probability pipelines turn PREs
//!   into exact rational probabilities from the success and the failure
//!   perspective;
//! * [`build_table`] and [`assert_equivalent`] provide the brute-force
//!   oracle every result is cross-checked against;
//! * [`render_structure_map`] and [`render_level_map`] draw the
//!   multi-valued Karnaugh maps with boundary and cover overlays.
//!
//! ```
//! use mvthresh_core::{ComponentDistribution, PreMethod, Ratio, StateCap, SystemSpec};
//! use mvthresh_core::level_probabilities_success;
//!
//! let spec = SystemSpec::from_integers(&[2, 2, 2, 2], &[1, 1, 1, 1], &[0, 2, 4, 6]).unwrap();
//! let uniform = ComponentDistribution::uniform(&spec);
//! let report = level_probabilities_success(
//!     &spec, &uniform, PreMethod::Shelling, StateCap::default()).unwrap();
//! assert_eq!(report.exactly[3], Ratio::new(15.into(), 81.into()));
//! ```

mod analysis;
mod boundary;
mod coherence;
mod disjoint;
mod error;
mod expr;
mod oracle;
mod probability;
mod render;
mod stateset;
mod system;

pub use analysis::{analyze_level, run_full_verification, CheckResult, LevelReport, VerificationReport};
pub use boundary::{
    enumerate_mlvs, enumerate_muvs, verify_boundary_minimality, BoundaryDefect, BoundaryKind,
    BoundaryVectorSet, BoundaryVerdict,
};
pub use coherence::{
    check_binary_imaged, check_coherence, check_total_symmetry, BinaryImageReport,
    CoherenceReport, SymmetryReport,
};
pub use disjoint::{
    boole_shannon_pre, disjoint_via_reflection, instance_expression, minimal_sop, pre_for,
    shellable_disjoint_cover, PreMethod, PreResult,
};
pub use error::{Error, InvalidSpec, Result, SpecViolation};
pub use expr::{
    is_disjoint_pair, is_pre, sop_from_mlvs, sop_from_muvs, ExprTarget, Form, InstanceSet,
    LiteralStyle, MvLiteral, Perspective, PreVerdict, ProductTerm, SopExpression,
};
pub use oracle::{
    assert_equivalent, build_table, EquivalenceVerdict, LevelSelector, StateSpaceTable, TableRow,
};
pub use probability::{
    expectation_of_pre, level_probabilities_failure, level_probabilities_success,
    ComponentDistribution, DistributionMode, ProbabilityReport,
};
pub use render::{
    render_level_map, render_structure_map, render_sum_map, LevelOverlays, MapFormat, MapLayout,
};
pub use stateset::StateSet;
pub use system::{format_ratio, parse_ratio, ratio_to_f64, Ratio, StateCap, StateVector, SystemSpec};

use thiserror::Error;

use crate::system::StateVector;

/// A single violated invariant of a system definition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecViolation {
    #[error("base threshold must be zero, got {0}")]
    NonZeroBaseThreshold(String),
    #[error("thresholds must be strictly increasing (offending index {index})")]
    NonIncreasingThresholds { index: usize },
    #[error("top threshold {threshold} exceeds the maximal weighted sum {max_sum}; the top level is unreachable")]
    UnreachableTopLevel { threshold: String, max_sum: String },
    #[error("all component weights are zero")]
    AllZeroWeights,
    #[error("system needs at least one component")]
    NoComponents,
    #[error("component {component} has max state 0; components need at least states 0 and 1")]
    MaxStateZero { component: usize },
    #[error("expected {expected} weights, got {got}")]
    WeightCountMismatch { expected: usize, got: usize },
    #[error("component {component} has a negative weight {weight}")]
    NegativeWeight { component: usize, weight: String },
    #[error("threshold {index} is negative ({threshold})")]
    NegativeThreshold { index: usize, threshold: String },
    #[error("need at least two thresholds (T0 and T1), got {0}")]
    TooFewThresholds(usize),
    #[error("scaled weights or thresholds overflow the internal integer range")]
    ArithmeticOverflow,
}

/// A system definition that failed validation, with every violation found.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct InvalidSpec {
    pub violations: Vec<SpecViolation>,
}

impl std::fmt::Display for InvalidSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid system definition:")?;
        for v in &self.violations {
            write!(f, "\n  - {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    InvalidSpec(#[from] InvalidSpec),
    #[error("state vector {state} is out of range (component {component} exceeds its max state)")]
    StateOutOfRange { state: StateVector, component: usize },
    #[error("state vector has {got} components, system has {expected}")]
    StateLengthMismatch { expected: usize, got: usize },
    #[error("level {level} is out of range {min}..={max}")]
    LevelOutOfRange { level: u32, min: u32, max: u32 },
    #[error("state space has {size} states, above the cap of {cap}; raise the cap to force the scan")]
    StateSpaceTooLarge { size: u128, cap: u64 },
    #[error("expression is not a probability-ready expression: terms {first} and {second} overlap")]
    NotPre { first: usize, second: usize },
    #[error("invalid component distribution: {0}")]
    InvalidDistribution(String),
    #[error("map with {cells} cells is too large for text rendering (limit {limit}); use CSV output")]
    MapTooLarge { cells: u128, limit: u64 },
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! The JSON system-definition file.
//!
//! ```json
//! {
//!   "components": [
//!     { "max_state": 2, "weight": 1, "probs": ["1/3", "1/3", "1/3"],
//!       "state_labels": ["Failed", "Half-power", "Full-power"] }
//!   ],
//!   "thresholds": [0, 2, 4, 6],
//!   "system_state_labels": ["Crash landing", "Normal landing"]
//! }
//! ```
//!
//! Weights, thresholds and probabilities accept integers, floats or
//! `"a/b"` strings. Strings and integers are exact; floats are embedded
//! exactly as the rational they denote, and mark the distribution as
//! float-sourced (mass sums are then checked to 1e-12 instead of exactly).

use serde::Deserialize;

use mvthresh_core::{
    parse_ratio, ComponentDistribution, DistributionMode, Ratio, SystemSpec,
};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl RationalValue {
    /// The exact rational value and whether it came from a float literal.
    fn to_ratio(&self) -> Result<(Ratio, bool), String> {
        match self {
            RationalValue::Int(i) => Ok((Ratio::from_integer((*i).into()), false)),
            RationalValue::Float(f) => Ratio::from_float(*f)
                .map(|r| (r, true))
                .ok_or_else(|| format!("non-finite number {f}")),
            RationalValue::Text(s) => parse_ratio(s).map(|r| (r, false)),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDef {
    pub max_state: u32,
    pub weight: RationalValue,
    #[serde(default)]
    pub probs: Option<Vec<RationalValue>>,
    #[serde(default)]
    pub state_labels: Option<Vec<String>>,
}

/// Why a definition file could not become a [`SystemSpec`].
#[derive(Debug)]
pub enum ToSpecError {
    /// Malformed numeric field: a usage-level problem.
    Parse(String),
    /// Well-formed file describing an invalid system.
    Invalid(mvthresh_core::InvalidSpec),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDefinitionFile {
    pub components: Vec<ComponentDef>,
    pub thresholds: Vec<RationalValue>,
    #[serde(default)]
    pub system_state_labels: Option<Vec<String>>,
}

impl SystemDefinitionFile {
    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Parses the numeric fields; bad syntax is a parse error, violated
    /// invariants come back as the full violation list.
    pub fn to_spec(&self) -> Result<SystemSpec, ToSpecError> {
        let max_states: Vec<u32> = self.components.iter().map(|c| c.max_state).collect();
        let weights: Vec<Ratio> = self
            .components
            .iter()
            .enumerate()
            .map(|(k, c)| {
                c.weight
                    .to_ratio()
                    .map(|(r, _)| r)
                    .map_err(|e| ToSpecError::Parse(format!("component {} weight: {e}", k + 1)))
            })
            .collect::<Result<_, _>>()?;
        let thresholds: Vec<Ratio> = self
            .thresholds
            .iter()
            .enumerate()
            .map(|(j, t)| {
                t.to_ratio()
                    .map(|(r, _)| r)
                    .map_err(|e| ToSpecError::Parse(format!("threshold {j}: {e}")))
            })
            .collect::<Result<_, _>>()?;
        SystemSpec::new(max_states, weights, thresholds).map_err(ToSpecError::Invalid)
    }

    /// The distribution given in the file, when every component carries one.
    pub fn distribution(
        &self,
        spec: &SystemSpec,
    ) -> Result<Option<ComponentDistribution>, String> {
        let given = self.components.iter().filter(|c| c.probs.is_some()).count();
        if given == 0 {
            return Ok(None);
        }
        if given != self.components.len() {
            return Err("probs must be given for every component or for none".into());
        }
        let mut masses = Vec::new();
        let mut any_float = false;
        for (k, c) in self.components.iter().enumerate() {
            let probs = c.probs.as_ref().expect("checked above");
            let mut row = Vec::new();
            for p in probs {
                let (r, was_float) = p
                    .to_ratio()
                    .map_err(|e| format!("component {}: {e}", k + 1))?;
                any_float |= was_float;
                row.push(r);
            }
            masses.push(row);
        }
        let mode = if any_float {
            DistributionMode::Float
        } else {
            DistributionMode::Exact
        };
        ComponentDistribution::new(spec, masses, mode)
            .map(Some)
            .map_err(|e| e.to_string())
    }
}

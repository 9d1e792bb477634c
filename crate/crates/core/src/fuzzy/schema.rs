//! JSON document describing an inference system.
//!
//! ```json
//! {
//!   "inputs": [{"name": "...", "sets": [{"label": "Low", "kind": "trapezoidal", "breakpoints": [0, 0, 20, 50]}]}],
//!   "output": {"name": "...", "sets": [...]},
//!   "rules": [{"antecedents": [["Audio Emotion Intensity", "Low"], ["Video Emotion Intensity", "High"]], "consequent": "High"}],
//!   "grid_resolution": 1001
//! }
//! ```

use serde::{Deserialize, Serialize};

use super::defaults::DEFAULT_GRID_RESOLUTION;
use super::{FuzzyError, FuzzyRule, FuzzySet, FuzzyVariable, InferenceSystem, MembershipFunction, ShapeKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetDefinition {
    pub label: String,
    pub kind: ShapeKind,
    pub breakpoints: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableDefinition {
    pub name: String,
    pub sets: Vec<SetDefinition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDefinition {
    pub antecedents: Vec<(String, String)>,
    pub consequent: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDefinition {
    pub inputs: Vec<VariableDefinition>,
    pub output: VariableDefinition,
    pub rules: Vec<RuleDefinition>,
    #[serde(default = "default_grid")]
    pub grid_resolution: usize,
}

fn default_grid() -> usize {
    DEFAULT_GRID_RESOLUTION
}

impl From<&FuzzyVariable> for VariableDefinition {
    fn from(v: &FuzzyVariable) -> Self {
        Self {
            name: v.name().to_string(),
            sets: v
                .sets()
                .iter()
                .map(|s| SetDefinition {
                    label: s.label.clone(),
                    kind: s.mf.kind(),
                    breakpoints: s.mf.breakpoints(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&VariableDefinition> for FuzzyVariable {
    type Error = FuzzyError;

    fn try_from(def: &VariableDefinition) -> Result<Self, Self::Error> {
        let sets = def
            .sets
            .iter()
            .map(|s| {
                MembershipFunction::from_breakpoints(s.kind, &s.breakpoints)
                    .map(|mf| FuzzySet::new(s.label.clone(), mf))
            })
            .collect::<Result<Vec<_>, _>>()?;
        FuzzyVariable::new(def.name.clone(), sets)
    }
}

impl InferenceSystem {
    pub fn definition(&self) -> SystemDefinition {
        SystemDefinition {
            inputs: self.inputs().iter().map(VariableDefinition::from).collect(),
            output: self.output().into(),
            rules: self
                .rules()
                .iter()
                .map(|r| RuleDefinition {
                    antecedents: r.antecedents.clone(),
                    consequent: r.consequent.clone(),
                    note: r.note.clone(),
                })
                .collect(),
            grid_resolution: self.grid_resolution(),
        }
    }

    pub fn from_definition(def: &SystemDefinition) -> Result<Self, FuzzyError> {
        let inputs = def
            .inputs
            .iter()
            .map(FuzzyVariable::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        let output = FuzzyVariable::try_from(&def.output)?;
        let rules = def
            .rules
            .iter()
            .map(|r| FuzzyRule {
                antecedents: r.antecedents.clone(),
                consequent: r.consequent.clone(),
                note: r.note.clone(),
            })
            .collect();
        Self::new(inputs, output, rules, def.grid_resolution)
    }

    pub fn from_json(text: &str) -> Result<Self, FuzzyError> {
        let def: SystemDefinition = serde_json::from_str(text)?;
        Self::from_definition(&def)
    }

    /// Pretty-printed canonical JSON definition.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.definition()).expect("definition serializes")
    }
}

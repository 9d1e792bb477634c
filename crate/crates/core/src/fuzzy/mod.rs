//! Mamdani fuzzy inference: fuzzification, min-AND rule evaluation, clipped
//! consequents aggregated with max, and centroid defuzzification.

pub mod defaults;
mod membership;
mod rules;
mod schema;
mod system;
mod variable;

use thiserror::Error;

pub use defaults::{default_system, RulesMode, DEFAULT_GRID_RESOLUTION};
pub use membership::{MembershipFunction, ShapeKind, DOMAIN_MAX, DOMAIN_MIN};
pub use rules::{evaluate_rule, FuzzyRule};
pub use schema::{RuleDefinition, SetDefinition, SystemDefinition, VariableDefinition};
pub use system::{defuzzify_centroid, AggregatedOutput, Inference, InferenceSystem};
pub use variable::{Fuzzified, FuzzySet, FuzzyVariable};

#[derive(Debug, Error)]
pub enum FuzzyError {
    #[error("invalid breakpoints {breakpoints:?}: {reason}")]
    InvalidBreakpoints { breakpoints: Vec<f64>, reason: String },
    #[error("variable '{variable}' has no sets")]
    EmptyVariable { variable: String },
    #[error("variable '{variable}' has duplicate set label '{label}'")]
    DuplicateLabel { variable: String, label: String },
    #[error("variable '{variable}': set '{after}' peaks before preceding set '{before}'")]
    SetOrder {
        variable: String,
        before: String,
        after: String,
    },
    #[error("variable '{variable}' leaves x={at} uncovered")]
    CoverageGap { variable: String, at: f64 },
    #[error("duplicate variable name '{0}'")]
    DuplicateVariable(String),
    #[error("system has no input variables")]
    NoInputs,
    #[error("system has no rules")]
    NoRules,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("variable '{variable}' has no set labeled '{label}'")]
    UnknownLabel { variable: String, label: String },
    #[error("rule {rule}: {detail}")]
    MalformedRule { rule: usize, detail: String },
    #[error("no fuzzified value supplied for variable '{0}'")]
    MissingInput(String),
    #[error("expected {expected} crisp inputs, got {got}")]
    InputArity { expected: usize, got: usize },
    #[error("grid resolution must be at least 2, got {0}")]
    GridResolution(usize),
    #[error("no rule fired: aggregated output has zero area")]
    EmptyAggregate,
    #[error("aggregate has {mu} membership samples for a {xs}-point grid")]
    AggregateShape { xs: usize, mu: usize },
    #[error("system definition: {0}")]
    Json(#[from] serde_json::Error),
}

use std::collections::HashSet;

use sha2::{Digest, Sha256};

use super::membership::{DOMAIN_MAX, DOMAIN_MIN};
use super::{Fuzzified, FuzzyError, FuzzyRule, FuzzyVariable};

#[derive(Debug, Clone, PartialEq)]
struct CompiledRule {
    antecedents: Vec<(usize, usize)>,
    consequent: usize,
}

/// An immutable Mamdani inference system: input variables, one output
/// variable, a rule base and the sampling grid used for aggregation.
#[derive(Debug, Clone)]
pub struct InferenceSystem {
    inputs: Vec<FuzzyVariable>,
    output: FuzzyVariable,
    rules: Vec<FuzzyRule>,
    compiled: Vec<CompiledRule>,
    grid: Vec<f64>,
    // output set memberships sampled on `grid`
    consequent_curves: Vec<Vec<f64>>,
}

/// Aggregated output membership sampled over the output domain.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedOutput {
    xs: Vec<f64>,
    mu: Vec<f64>,
}

impl AggregatedOutput {
    pub fn new(xs: Vec<f64>, mu: Vec<f64>) -> Result<Self, FuzzyError> {
        if xs.len() != mu.len() {
            return Err(FuzzyError::AggregateShape {
                xs: xs.len(),
                mu: mu.len(),
            });
        }
        Ok(Self { xs, mu })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn membership(&self) -> &[f64] {
        &self.mu
    }

    pub fn area(&self) -> f64 {
        self.mu.iter().sum()
    }
}

/// Everything produced by one inference pass.
#[derive(Debug, Clone)]
pub struct Inference {
    pub aggregate: AggregatedOutput,
    /// Activation of each rule, in rule-base order.
    pub activations: Vec<f64>,
    /// Inputs that were clamped into the domain: (variable name, original value).
    pub clamped: Vec<(String, f64)>,
}

/// Centroid of the sampled aggregate: `Σ xᵢ·μᵢ / Σ μᵢ`.
pub fn defuzzify_centroid(agg: &AggregatedOutput) -> Result<f64, FuzzyError> {
    let (num, den) = agg
        .xs
        .iter()
        .zip(&agg.mu)
        .fold((0.0, 0.0), |(n, d), (&x, &m)| (n + x * m, d + m));
    if den <= 0.0 {
        return Err(FuzzyError::EmptyAggregate);
    }
    Ok(num / den)
}

impl InferenceSystem {
    pub fn new(
        inputs: Vec<FuzzyVariable>,
        output: FuzzyVariable,
        rules: Vec<FuzzyRule>,
        grid_resolution: usize,
    ) -> Result<Self, FuzzyError> {
        if inputs.is_empty() {
            return Err(FuzzyError::NoInputs);
        }
        if rules.is_empty() {
            return Err(FuzzyError::NoRules);
        }
        if grid_resolution < 2 {
            return Err(FuzzyError::GridResolution(grid_resolution));
        }
        let mut names = HashSet::new();
        for v in inputs.iter().chain(std::iter::once(&output)) {
            if !names.insert(v.name()) {
                return Err(FuzzyError::DuplicateVariable(v.name().to_string()));
            }
        }

        let mut compiled = Vec::with_capacity(rules.len());
        for (i, rule) in rules.iter().enumerate() {
            if rule.antecedents.is_empty() {
                return Err(FuzzyError::MalformedRule {
                    rule: i + 1,
                    detail: "no antecedents".into(),
                });
            }
            let mut antecedents = Vec::with_capacity(rule.antecedents.len());
            let mut used = HashSet::new();
            for (var, label) in &rule.antecedents {
                let vi = inputs
                    .iter()
                    .position(|v| v.name() == var)
                    .ok_or_else(|| FuzzyError::UnknownVariable(var.clone()))?;
                if !used.insert(vi) {
                    return Err(FuzzyError::MalformedRule {
                        rule: i + 1,
                        detail: format!("variable '{var}' appears twice"),
                    });
                }
                let si = inputs[vi].index_of(label).ok_or_else(|| FuzzyError::UnknownLabel {
                    variable: var.clone(),
                    label: label.clone(),
                })?;
                antecedents.push((vi, si));
            }
            let consequent = output
                .index_of(&rule.consequent)
                .ok_or_else(|| FuzzyError::UnknownLabel {
                    variable: output.name().to_string(),
                    label: rule.consequent.clone(),
                })?;
            compiled.push(CompiledRule {
                antecedents,
                consequent,
            });
        }

        let step = (DOMAIN_MAX - DOMAIN_MIN) / (grid_resolution - 1) as f64;
        let grid: Vec<f64> = (0..grid_resolution).map(|i| DOMAIN_MIN + step * i as f64).collect();
        let consequent_curves = output
            .sets()
            .iter()
            .map(|s| grid.iter().map(|&x| s.mf.degree(x)).collect())
            .collect();

        Ok(Self {
            inputs,
            output,
            rules,
            compiled,
            grid,
            consequent_curves,
        })
    }

    /// Same variables and rules sampled on a different grid.
    pub fn with_grid_resolution(&self, grid_resolution: usize) -> Result<Self, FuzzyError> {
        Self::new(
            self.inputs.clone(),
            self.output.clone(),
            self.rules.clone(),
            grid_resolution,
        )
    }

    pub fn inputs(&self) -> &[FuzzyVariable] {
        &self.inputs
    }

    pub fn output(&self) -> &FuzzyVariable {
        &self.output
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    pub fn grid_resolution(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Fuzzifies one crisp value per input variable, in declaration order.
    pub fn fuzzify_inputs(&self, crisp: &[f64]) -> Result<Vec<Fuzzified<'_>>, FuzzyError> {
        if crisp.len() != self.inputs.len() {
            return Err(FuzzyError::InputArity {
                expected: self.inputs.len(),
                got: crisp.len(),
            });
        }
        Ok(self.inputs.iter().zip(crisp).map(|(v, &x)| v.fuzzify(x)).collect())
    }

    /// Clips every output set at `levels[i]` and combines them with max.
    /// `levels` holds one clip level per output set, in declaration order.
    pub fn aggregate(&self, levels: &[f64]) -> Result<AggregatedOutput, FuzzyError> {
        if levels.len() != self.consequent_curves.len() {
            return Err(FuzzyError::InputArity {
                expected: self.consequent_curves.len(),
                got: levels.len(),
            });
        }
        let mut mu = vec![0.0_f64; self.grid.len()];
        for (curve, &level) in self.consequent_curves.iter().zip(levels) {
            let level = level.clamp(0.0, 1.0);
            if level <= 0.0 {
                continue;
            }
            for (m, &c) in mu.iter_mut().zip(curve) {
                *m = (*m).max(c.min(level));
            }
        }
        AggregatedOutput::new(self.grid.clone(), mu)
    }

    pub fn infer(&self, crisp: &[f64]) -> Result<Inference, FuzzyError> {
        let fuzzified = self.fuzzify_inputs(crisp)?;
        let clamped = fuzzified
            .iter()
            .filter_map(|f| f.clamped_from.map(|x| (f.variable().name().to_string(), x)))
            .collect();

        let activations: Vec<f64> = self
            .compiled
            .iter()
            .map(|r| {
                r.antecedents
                    .iter()
                    .map(|&(vi, si)| fuzzified[vi].degrees()[si])
                    .fold(1.0, f64::min)
            })
            .collect();

        // Clipping then max-combining is the same as clipping each output
        // set once at the strongest activation among its rules.
        let mut levels = vec![0.0_f64; self.output.sets().len()];
        for (r, &a) in self.compiled.iter().zip(&activations) {
            levels[r.consequent] = levels[r.consequent].max(a);
        }
        if levels.iter().all(|&l| l <= 0.0) {
            return Err(FuzzyError::EmptyAggregate);
        }
        Ok(Inference {
            aggregate: self.aggregate(&levels)?,
            activations,
            clamped,
        })
    }

    /// Crisp overall intensity for a pair of audio and video intensities.
    pub fn fuse_intensity(&self, audio_pct: f64, video_pct: f64) -> Result<f64, FuzzyError> {
        let inference = self.infer(&[audio_pct, video_pct])?;
        defuzzify_centroid(&inference.aggregate)
    }

    /// SHA-256 over the compact canonical JSON definition.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_vec(&self.definition()).expect("definition serializes");
        format!("sha256:{}", hex::encode(Sha256::digest(&canonical)))
    }
}

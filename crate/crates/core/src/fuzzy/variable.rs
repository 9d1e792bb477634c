use std::collections::HashSet;

use super::membership::{MembershipFunction, DOMAIN_MAX, DOMAIN_MIN};
use super::FuzzyError;

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySet {
    pub label: String,
    pub mf: MembershipFunction,
}

impl FuzzySet {
    pub fn new(label: impl Into<String>, mf: MembershipFunction) -> Self {
        Self {
            label: label.into(),
            mf,
        }
    }
}

/// A named linguistic variable over [0,100] partitioned into labeled sets.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyVariable {
    name: String,
    sets: Vec<FuzzySet>,
}

impl FuzzyVariable {
    /// Validates label uniqueness, set ordering and domain coverage.
    pub fn new(name: impl Into<String>, sets: Vec<FuzzySet>) -> Result<Self, FuzzyError> {
        let name = name.into();
        if sets.is_empty() {
            return Err(FuzzyError::EmptyVariable { variable: name });
        }
        let mut seen = HashSet::new();
        for s in &sets {
            if !seen.insert(s.label.as_str()) {
                return Err(FuzzyError::DuplicateLabel {
                    variable: name,
                    label: s.label.clone(),
                });
            }
        }
        for w in sets.windows(2) {
            if w[1].mf.core_center() < w[0].mf.core_center() {
                return Err(FuzzyError::SetOrder {
                    variable: name,
                    before: w[0].label.clone(),
                    after: w[1].label.clone(),
                });
            }
        }
        let var = Self { name, sets };
        // Memberships are linear between consecutive breakpoints, so a
        // positive maximum at every breakpoint implies coverage in between.
        let mut probes: Vec<f64> = var
            .sets
            .iter()
            .flat_map(|s| s.mf.breakpoints())
            .chain([DOMAIN_MIN, DOMAIN_MAX])
            .collect();
        probes.sort_by(f64::total_cmp);
        probes.dedup();
        if let Some(&at) = probes.iter().find(|&&x| var.max_degree(x) <= 0.0) {
            return Err(FuzzyError::CoverageGap { variable: var.name, at });
        }
        Ok(var)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sets(&self) -> &[FuzzySet] {
        &self.sets
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.sets.iter().map(|s| s.label.as_str())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.sets.iter().position(|s| s.label == label)
    }

    fn max_degree(&self, x: f64) -> f64 {
        self.sets.iter().map(|s| s.mf.degree(x)).fold(0.0, f64::max)
    }

    /// Degrees of membership of `x` in every set. Inputs outside [0,100] are
    /// clamped first and the original value is kept in `clamped_from`.
    pub fn fuzzify(&self, x: f64) -> Fuzzified<'_> {
        let xc = if x.is_nan() {
            DOMAIN_MIN
        } else {
            x.clamp(DOMAIN_MIN, DOMAIN_MAX)
        };
        Fuzzified {
            variable: self,
            degrees: self.sets.iter().map(|s| s.mf.degree(xc)).collect(),
            clamped_from: (xc != x || x.is_nan()).then_some(x),
        }
    }
}

/// Result of fuzzifying one crisp value: a degree per set label.
#[derive(Debug, Clone, PartialEq)]
pub struct Fuzzified<'a> {
    variable: &'a FuzzyVariable,
    degrees: Vec<f64>,
    /// Original input when it had to be clamped into the domain.
    pub clamped_from: Option<f64>,
}

impl<'a> Fuzzified<'a> {
    pub fn variable(&self) -> &'a FuzzyVariable {
        self.variable
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.variable.index_of(label).map(|i| self.degrees[i])
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'a str, f64)> + '_ {
        self.variable.labels().zip(self.degrees.iter().copied())
    }

    /// Index of the set with the highest degree; ties resolve toward the
    /// later (higher) set.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &d) in self.degrees.iter().enumerate() {
            if d >= self.degrees[best] {
                best = i;
            }
        }
        best
    }
}

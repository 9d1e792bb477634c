use super::{Fuzzified, FuzzyError};

/// `IF var1 IS label1 AND var2 IS label2 ... THEN output IS consequent`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRule {
    pub antecedents: Vec<(String, String)>,
    pub consequent: String,
    pub note: Option<String>,
}

impl FuzzyRule {
    pub fn new<V, L>(antecedents: impl IntoIterator<Item = (V, L)>, consequent: impl Into<String>) -> Self
    where
        V: Into<String>,
        L: Into<String>,
    {
        Self {
            antecedents: antecedents.into_iter().map(|(v, l)| (v.into(), l.into())).collect(),
            consequent: consequent.into(),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Activation of `rule`: the minimum of its antecedent degrees.
pub fn evaluate_rule(rule: &FuzzyRule, inputs: &[Fuzzified<'_>]) -> Result<f64, FuzzyError> {
    let mut activation = 1.0_f64;
    for (var, label) in &rule.antecedents {
        let f = inputs
            .iter()
            .find(|f| f.variable().name() == var)
            .ok_or_else(|| FuzzyError::MissingInput(var.clone()))?;
        let degree = f.get(label).ok_or_else(|| FuzzyError::UnknownLabel {
            variable: var.clone(),
            label: label.clone(),
        })?;
        activation = activation.min(degree);
    }
    Ok(activation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::defaults::input_variable;

    #[test]
    fn min_t_norm() {
        let audio = input_variable("audio");
        let video = input_variable("video");

        // Low/High -> High with inputs 12 and 85
        let rule = FuzzyRule::new([("audio", "Low"), ("video", "High")], "High");
        let f = [audio.fuzzify(12.0), video.fuzzify(85.0)];
        assert_eq!(evaluate_rule(&rule, &f).unwrap(), 1.0);

        // Medium at 12 is zero
        let rule = FuzzyRule::new([("audio", "Medium"), ("video", "High")], "Very High");
        assert_eq!(evaluate_rule(&rule, &f).unwrap(), 0.0);

        // Medium 0.4 (x=32) and Medium 0.7 (x=41)
        let rule = FuzzyRule::new([("audio", "Medium"), ("video", "Medium")], "High");
        let f = [audio.fuzzify(32.0), video.fuzzify(41.0)];
        assert!((f[0].get("Medium").unwrap() - 0.4).abs() < 1e-12);
        assert!((f[1].get("Medium").unwrap() - 0.7).abs() < 1e-12);
        assert!((evaluate_rule(&rule, &f).unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn unknown_references() {
        let audio = input_variable("audio");
        let f = [audio.fuzzify(12.0)];
        let rule = FuzzyRule::new([("audio", "Huge")], "High");
        assert!(matches!(evaluate_rule(&rule, &f), Err(FuzzyError::UnknownLabel { .. })));
        let rule = FuzzyRule::new([("video", "Low")], "High");
        assert!(matches!(evaluate_rule(&rule, &f), Err(FuzzyError::MissingInput(_))));
    }
}

//! Built-in emotion intensity system: two identical input variables
//! (audio, video), a five-set output variable and a nine-rule base.

use std::str::FromStr;

use super::{FuzzyRule, FuzzySet, FuzzyVariable, InferenceSystem, MembershipFunction};

pub const DEFAULT_GRID_RESOLUTION: usize = 1001;

pub const AUDIO_VARIABLE: &str = "Audio Emotion Intensity";
pub const VIDEO_VARIABLE: &str = "Video Emotion Intensity";
pub const OUTPUT_VARIABLE: &str = "Overall Emotion Intensity";

pub const INPUT_LABELS: [&str; 3] = ["Low", "Medium", "High"];
pub const OUTPUT_LABELS: [&str; 5] = ["Little Bit", "Sometimes", "High", "Very High", "Extremely High"];

/// How to read the eighth rule of the reference rule table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RulesMode {
    /// Row 8 as (High, Medium) -> Very High, filling the 3x3 grid.
    #[default]
    Completed,
    /// Rows exactly as listed: rows 5 and 8 share (Medium, Medium).
    Verbatim,
}

impl FromStr for RulesMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "completed" => Ok(Self::Completed),
            "verbatim" => Ok(Self::Verbatim),
            other => Err(format!("unknown rules mode '{other}' (expected completed|verbatim)")),
        }
    }
}

fn set(label: &str, mf: Result<MembershipFunction, super::FuzzyError>) -> FuzzySet {
    FuzzySet::new(label, mf.expect("built-in breakpoints are valid"))
}

/// Low / Medium / High over [0,100].
pub fn input_variable(name: &str) -> FuzzyVariable {
    FuzzyVariable::new(
        name,
        vec![
            set("Low", MembershipFunction::trapezoidal(0.0, 0.0, 20.0, 50.0)),
            set("Medium", MembershipFunction::triangular(20.0, 50.0, 80.0)),
            set("High", MembershipFunction::trapezoidal(50.0, 80.0, 100.0, 100.0)),
        ],
    )
    .expect("built-in input variable is valid")
}

pub fn output_variable() -> FuzzyVariable {
    FuzzyVariable::new(
        OUTPUT_VARIABLE,
        vec![
            set("Little Bit", MembershipFunction::triangular(0.0, 0.0, 25.0)),
            set("Sometimes", MembershipFunction::triangular(0.0, 25.0, 50.0)),
            set("High", MembershipFunction::triangular(25.0, 50.0, 75.0)),
            set("Very High", MembershipFunction::triangular(50.0, 75.0, 100.0)),
            set("Extremely High", MembershipFunction::triangular(75.0, 100.0, 100.0)),
        ],
    )
    .expect("built-in output variable is valid")
}

pub fn default_rules(mode: RulesMode) -> Vec<FuzzyRule> {
    let rule = |a: &str, v: &str, out: &str| FuzzyRule::new([(AUDIO_VARIABLE, a), (VIDEO_VARIABLE, v)], out);
    let row8 = match mode {
        RulesMode::Completed => rule("High", "Medium", "Very High").with_note(
            "row 8 read as (High, Medium); the literal row repeats the (Medium, Medium) antecedent of row 5",
        ),
        RulesMode::Verbatim => rule("Medium", "Medium", "Very High")
            .with_note("verbatim: same antecedents as row 5; (High, Medium) has no rule"),
    };
    vec![
        rule("Low", "Low", "Little Bit"),
        rule("Low", "Medium", "Sometimes"),
        rule("Low", "High", "High"),
        rule("Medium", "Low", "Sometimes"),
        rule("Medium", "Medium", "High"),
        rule("Medium", "High", "Very High"),
        rule("High", "Low", "Sometimes"),
        row8,
        rule("High", "High", "Extremely High"),
    ]
}

pub fn default_system(mode: RulesMode) -> InferenceSystem {
    InferenceSystem::new(
        vec![input_variable(AUDIO_VARIABLE), input_variable(VIDEO_VARIABLE)],
        output_variable(),
        default_rules(mode),
        DEFAULT_GRID_RESOLUTION,
    )
    .expect("built-in system is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank(labels: &[&str], l: &str) -> usize {
        labels.iter().position(|x| *x == l).unwrap()
    }

    #[test]
    fn completed_grid_is_total_and_monotone() {
        let rules = default_rules(RulesMode::Completed);
        let mut grid = [[None; 3]; 3];
        for r in &rules {
            let a = rank(&INPUT_LABELS, &r.antecedents[0].1);
            let v = rank(&INPUT_LABELS, &r.antecedents[1].1);
            assert!(grid[a][v].is_none(), "duplicate cell ({a},{v})");
            grid[a][v] = Some(rank(&OUTPUT_LABELS, &r.consequent));
        }
        let grid = grid.map(|row| row.map(|c| c.expect("cell covered")));
        #[allow(clippy::needless_range_loop)]
        for i in 0..3 {
            for j in 0..2 {
                assert!(grid[i][j] <= grid[i][j + 1]);
                assert!(grid[j][i] <= grid[j + 1][i]);
            }
        }
    }

    #[test]
    fn verbatim_keeps_duplicate_antecedents() {
        let rules = default_rules(RulesMode::Verbatim);
        assert_eq!(rules.len(), 9);
        assert_eq!(rules[4].antecedents, rules[7].antecedents);
        assert_eq!(rules[4].consequent, "High");
        assert_eq!(rules[7].consequent, "Very High");
        // asymmetry between rows 3 and 7 is preserved in both modes
        assert_eq!(rules[2].consequent, "High");
        assert_eq!(rules[6].consequent, "Sometimes");
    }

    #[test]
    fn parse_mode() {
        assert_eq!("verbatim".parse::<RulesMode>().unwrap(), RulesMode::Verbatim);
        assert!("loose".parse::<RulesMode>().is_err());
    }
}

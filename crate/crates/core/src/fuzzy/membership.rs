use serde::{Deserialize, Serialize};

use super::FuzzyError;

/// Lower bound of every linguistic variable's universe, in percent.
pub const DOMAIN_MIN: f64 = 0.0;
/// Upper bound of every linguistic variable's universe, in percent.
pub const DOMAIN_MAX: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Triangular,
    Trapezoidal,
}

impl ShapeKind {
    pub fn breakpoint_count(self) -> usize {
        match self {
            ShapeKind::Triangular => 3,
            ShapeKind::Trapezoidal => 4,
        }
    }
}

/// Piecewise-linear membership function over the percent domain.
///
/// A triangle `(a, b, c)` is stored as the trapezoid `(a, b, b, c)`. A shoulder
/// (`a == b` or `c == d`) is only allowed on the domain edge, which keeps the
/// curve continuous inside the domain; beyond such an edge the membership
/// stays at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipFunction {
    kind: ShapeKind,
    points: [f64; 4],
}

impl MembershipFunction {
    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self, FuzzyError> {
        Self::from_breakpoints(ShapeKind::Triangular, &[a, b, c])
    }

    pub fn trapezoidal(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        Self::from_breakpoints(ShapeKind::Trapezoidal, &[a, b, c, d])
    }

    pub fn from_breakpoints(kind: ShapeKind, breakpoints: &[f64]) -> Result<Self, FuzzyError> {
        let invalid = |reason: &str| FuzzyError::InvalidBreakpoints {
            breakpoints: breakpoints.to_vec(),
            reason: reason.to_string(),
        };
        if breakpoints.len() != kind.breakpoint_count() {
            return Err(invalid(match kind {
                ShapeKind::Triangular => "triangular sets take 3 breakpoints",
                ShapeKind::Trapezoidal => "trapezoidal sets take 4 breakpoints",
            }));
        }
        if breakpoints.iter().any(|p| !p.is_finite()) {
            return Err(invalid("breakpoints must be finite"));
        }
        if breakpoints.iter().any(|&p| !(DOMAIN_MIN..=DOMAIN_MAX).contains(&p)) {
            return Err(invalid("breakpoints must lie within [0,100]"));
        }
        if breakpoints.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("breakpoints must be non-decreasing"));
        }
        let points = match *breakpoints {
            [a, b, c] => [a, b, b, c],
            [a, b, c, d] => [a, b, c, d],
            _ => unreachable!(),
        };
        let [a, b, c, d] = points;
        if a == b && a != DOMAIN_MIN {
            return Err(invalid("vertical left edge is only allowed at the domain minimum"));
        }
        if c == d && d != DOMAIN_MAX {
            return Err(invalid("vertical right edge is only allowed at the domain maximum"));
        }
        Ok(Self { kind, points })
    }

    pub fn kind(&self) -> ShapeKind {
        self.kind
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let [a, b, c, d] = self.points;
        match self.kind {
            ShapeKind::Triangular => vec![a, b, d],
            ShapeKind::Trapezoidal => vec![a, b, c, d],
        }
    }

    /// Midpoint of the plateau where membership is 1.
    pub fn core_center(&self) -> f64 {
        0.5 * (self.points[1] + self.points[2])
    }

    pub fn degree(&self, x: f64) -> f64 {
        let [a, b, c, d] = self.points;
        if x < a {
            if a == b {
                1.0
            } else {
                0.0
            }
        } else if x < b {
            (x - a) / (b - a)
        } else if x <= c {
            1.0
        } else if x <= d {
            (d - x) / (d - c)
        } else if c == d {
            1.0
        } else {
            0.0
        }
    }
}

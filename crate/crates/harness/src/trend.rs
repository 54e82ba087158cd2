//! Finite-window checks standing in for limit statements.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrendKind {
    /// Tail mean within `tol` of `target`.
    ApproachesValue {
        target: f64,
        tol: f64,
    },
    /// Tail mean of the pointwise sum within `tol` of `target`.
    SumApproaches {
        target: f64,
        tol: f64,
    },
    /// Tail mean of the pointwise difference within `tol` of zero.
    DifferenceApproaches {
        tol: f64,
    },
    NonincreasingTail {
        slack: f64,
    },
    NondecreasingTail {
        slack: f64,
    },
    /// Tail max minus tail min at most `tol`.
    TailSpread {
        tol: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendAssertion {
    pub name: String,
    pub kind: TrendKind,
    pub sequences: Vec<String>,
    /// Number of final points checked.
    pub window: usize,
}

/// One point of a combined series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub n: u64,
    pub value: f64,
    pub ci: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    /// The checked quantity (tail mean, worst step, or spread).
    pub statistic: f64,
    pub detail: String,
    /// The series the check ran on, over the whole schedule.
    pub series: Vec<Point>,
}

impl TrendAssertion {
    /// Target line to draw on plots, if the check has one.
    pub fn target(&self) -> Option<f64> {
        match self.kind {
            TrendKind::ApproachesValue { target, .. } | TrendKind::SumApproaches { target, .. } => Some(target),
            TrendKind::DifferenceApproaches { .. } => Some(0.0),
            _ => None,
        }
    }

    /// Combines the member trajectories (aligned on the same stages) into the
    /// checked series. Confidence half-widths add.
    pub fn combine(&self, members: &[Vec<Point>]) -> Vec<Point> {
        let Some(first) = members.first() else {
            return Vec::new();
        };
        match self.kind {
            TrendKind::SumApproaches { .. } => (0..first.len())
                .map(|i| Point {
                    n: first[i].n,
                    value: members.iter().map(|m| m[i].value).sum(),
                    ci: members.iter().map(|m| m[i].ci).sum(),
                })
                .collect(),
            TrendKind::DifferenceApproaches { .. } => {
                first.iter().zip(&members[1]).map(|(a, b)| Point { n: a.n, value: a.value - b.value, ci: a.ci + b.ci }).collect()
            }
            _ => first.clone(),
        }
    }

    pub fn evaluate(&self, members: &[Vec<Point>]) -> Outcome {
        let series = self.combine(members);
        let tail: Vec<f64> = series.iter().rev().take(self.window).rev().map(|p| p.value).collect();
        let mean = if tail.is_empty() { f64::NAN } else { tail.iter().sum::<f64>() / tail.len() as f64 };
        let steps = || tail.windows(2).map(|w| w[1] - w[0]);
        let finite_or_zero = |x: f64| if x.is_finite() { x + 0.0 } else { 0.0 };
        let (passed, statistic, detail) = match self.kind {
            TrendKind::ApproachesValue { target, tol } | TrendKind::SumApproaches { target, tol } => {
                let dev = (mean - target).abs();
                (dev <= tol, mean, format!("tail mean {mean:.4}, |mean - {target}| = {dev:.4}, tol {tol}"))
            }
            TrendKind::DifferenceApproaches { tol } => {
                (mean.abs() <= tol, mean, format!("tail mean difference {mean:.4}, tol {tol}"))
            }
            TrendKind::NonincreasingTail { slack } => {
                let worst = finite_or_zero(steps().fold(f64::NEG_INFINITY, f64::max));
                (tail.len() == self.window && worst <= slack, worst, format!("largest rise {worst:.4}, slack {slack}"))
            }
            TrendKind::NondecreasingTail { slack } => {
                let worst = finite_or_zero(steps().map(|d| -d).fold(f64::NEG_INFINITY, f64::max));
                (tail.len() == self.window && worst <= slack, worst, format!("largest drop {worst:.4}, slack {slack}"))
            }
            TrendKind::TailSpread { tol } => {
                let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
                let spread = hi - lo;
                (tail.len() == self.window && spread <= tol, spread, format!("tail spread {spread:.4}, tol {tol}"))
            }
        };
        let passed = passed && !tail.is_empty();
        Outcome { name: self.name.clone(), passed, statistic, detail, series }
    }
}

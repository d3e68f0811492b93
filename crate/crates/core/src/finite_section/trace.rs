use std::fmt::Write as _;

use serde_json::{json, Value as Json};

/// Residuals at or below this are round-off and count as converged.
pub const FLOOR: f64 = 1e-11;
/// A log₂-log₂ slope at or below this counts as decay.
pub const SLOPE: f64 = -0.5;
/// Last three values within this relative spread count as stagnation.
pub const STAGNATION: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceVerdict {
    Decaying,
    Stagnant,
}

impl TraceVerdict {
    pub fn name(self) -> &'static str {
        match self {
            TraceVerdict::Decaying => "Decaying",
            TraceVerdict::Stagnant => "Stagnant",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualTrace {
    pub name: String,
    pub points: Vec<(usize, f64)>,
    pub verdict: TraceVerdict,
    /// Least-squares slope of `log₂ residual` against `log₂ N`.
    pub slope: f64,
}

fn fitted_slope(points: &[(usize, f64)]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).log2()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, r)| r.max(1e-300).log2()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

fn last_three_flat(points: &[(usize, f64)]) -> bool {
    if points.len() < 3 {
        return false;
    }
    let tail = &points[points.len() - 3..];
    let hi = tail.iter().map(|p| p.1).fold(f64::MIN, f64::max);
    let lo = tail.iter().map(|p| p.1).fold(f64::MAX, f64::min);
    hi > 0.0 && (hi - lo) / hi < STAGNATION
}

impl ResidualTrace {
    pub fn new(name: impl Into<String>, points: Vec<(usize, f64)>) -> Self {
        let slope = fitted_slope(&points);
        let last = points.last().map(|p| p.1).unwrap_or(f64::INFINITY);
        let decaying = last <= FLOOR || (slope <= SLOPE && !last_three_flat(&points));
        let verdict = if decaying { TraceVerdict::Decaying } else { TraceVerdict::Stagnant };
        ResidualTrace { name: name.into(), points, verdict, slope }
    }

    pub fn last(&self) -> Option<f64> {
        self.points.last().map(|p| p.1)
    }

    pub fn at(&self, n: usize) -> Option<f64> {
        self.points.iter().find(|p| p.0 == n).map(|p| p.1)
    }

    pub fn is_decaying(&self) -> bool {
        self.verdict == TraceVerdict::Decaying
    }

    pub fn to_json(&self) -> Json {
        json!({
            "name": self.name,
            "points": self.points.iter().map(|&(n, r)| json!({"N": n, "residual": r})).collect::<Vec<_>>(),
            "verdict": self.verdict.name(),
            "slope": self.slope,
        })
    }

    /// `N,residual` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,residual\n");
        for &(n, r) in &self.points {
            let _ = writeln!(out, "{n},{r:e}");
        }
        out
    }
}

//! Log-log least squares for empirical rate estimation.

use serde::{Deserialize, Serialize};

/// Outcome of fitting `log y = slope * log x + intercept`.
///
/// Samples with `y` at or below [`ERROR_FLOOR`] are excluded before taking
/// logs; if nothing (or a single point) survives, a sentinel is returned
/// instead of a fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SlopeFit {
    Fit { slope: f64, intercept: f64, r2: f64 },
    /// All samples sat at the error floor: the quantity is exactly resolved.
    Exact,
    /// Too few samples above the floor to fit a line.
    Degenerate,
}

/// Values at or below this are treated as exactly zero for fitting purposes.
pub const ERROR_FLOOR: f64 = 1e-15;

impl SlopeFit {
    pub fn slope(&self) -> Option<f64> {
        match self {
            SlopeFit::Fit { slope, .. } => Some(*slope),
            _ => None,
        }
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> SlopeFit {
    assert_eq!(xs.len(), ys.len());
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, &y)| y > ERROR_FLOOR)
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    if pts.is_empty() {
        return SlopeFit::Exact;
    }
    if pts.len() < 2 {
        return SlopeFit::Degenerate;
    }
    linear_fit(&pts)
}

fn linear_fit(pts: &[(f64, f64)]) -> SlopeFit {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return SlopeFit::Degenerate;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    SlopeFit::Fit { slope, intercept, r2 }
}

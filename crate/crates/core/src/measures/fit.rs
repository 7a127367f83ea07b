use alloc::format;

use crate::error::{invalid, Result};

/// Power-law fit `Δ ≈ e^{intercept} N^{slope}`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares `y ≈ intercept + slope·x`; returns
/// `(slope, intercept, r²)`. A constant `y` has `r² = 1`.
pub(crate) fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    (slope, intercept, r2)
}

/// Fits `log Δ` against `log N`.
pub fn rate_fit(ns: &[f64], deltas: &[f64]) -> Result<RateFit> {
    if ns.len() != deltas.len() || ns.len() < 3 {
        return Err(invalid(format!("rate fit needs at least 3 paired points, got {}", ns.len().min(deltas.len()))));
    }
    if ns.iter().chain(deltas).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(invalid("rate fit needs positive finite data"));
    }
    let x: alloc::vec::Vec<f64> = ns.iter().map(|v| libm::log(*v)).collect();
    let y: alloc::vec::Vec<f64> = deltas.iter().map(|v| libm::log(*v)).collect();
    if x.iter().all(|v| *v == x[0]) {
        return Err(invalid("rate fit needs at least two distinct N"));
    }
    let (slope, intercept, r2) = least_squares(&x, &y);
    Ok(RateFit { slope, intercept, r2 })
}

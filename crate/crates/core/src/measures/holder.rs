use alloc::format;
use alloc::vec::Vec;

use super::fit::least_squares;
use super::Measure;
use crate::error::{Error, Result};

/// Empirical Hölder modulus of a distribution function and its power-law fit.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HolderReport {
    /// Fitted slope of `log ω` against `log δ`, clamped to `[0, 1]`.
    pub exponent_estimate: f64,
    /// Smallest `C` with `ω(δ) ≤ C δ^β` on the whole grid, for the clamped `β`.
    pub constant_estimate: f64,
    /// `exp` of the fitted intercept.
    pub fitted_constant: f64,
    pub raw_slope: f64,
    pub delta_grid: Vec<f64>,
    pub modulus: Vec<f64>,
    /// Root mean square residual of the log-log fit.
    pub fit_residual: f64,
}

const DEFAULT_POINTS: usize = 20;
const DENSE_GRID: usize = 20_001;

/// Twenty log-spaced `δ` in `[max(10h, 10⁻³ span), 0.05 span]`, where `h` is
/// the median positive knot spacing.
pub fn default_delta_grid(f: &Measure) -> Result<Vec<f64>> {
    let (lo, hi) = f.support_bounds();
    let span = hi - lo;
    if !(span > 0.0) {
        return Err(Error::DegenerateGrid("measure has a single support point; supply a delta grid".into()));
    }
    let h = match f.knots() {
        Some(k) => {
            let mut gaps: Vec<f64> = k.windows(2).map(|w| w[1] - w[0]).filter(|g| *g > 0.0).collect();
            gaps.sort_by(f64::total_cmp);
            gaps[gaps.len() / 2]
        }
        None => span / (DENSE_GRID - 1) as f64,
    };
    let d0 = (10.0 * h).max(1e-3 * span);
    let d1 = 0.05 * span;
    if !(d1 > d0) {
        return Err(Error::DegenerateGrid(format!("grid too coarse for a modulus fit (h = {h}, span = {span})")));
    }
    let (l0, l1) = (libm::log(d0), libm::log(d1));
    Ok((0..DEFAULT_POINTS)
        .map(|k| libm::exp(l0 + (l1 - l0) * k as f64 / (DEFAULT_POINTS - 1) as f64))
        .collect())
}

/// `ω(δ) = sup_t F(t+δ) − F(t)`.
///
/// For piecewise linear `F` the difference is linear between the points of
/// `knots ∪ (knots − δ)`, so one-sided evaluations there are exact.
fn modulus(f: &Measure, delta: f64) -> f64 {
    let mut pts: Vec<f64> = match f.knots() {
        Some(k) => k.iter().flat_map(|&x| [x, x - delta]).collect(),
        None => {
            let (lo, hi) = f.support_bounds();
            let (lo, hi) = (lo - delta, hi);
            let h = (hi - lo) / (DENSE_GRID - 1) as f64;
            (0..DENSE_GRID).map(|k| lo + h * k as f64).collect()
        }
    };
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.into_iter()
        .map(|t| (f.cdf(t + delta) - f.cdf(t)).max(f.cdf_left(t + delta) - f.cdf_left(t)))
        .fold(0.0, f64::max)
}

/// Measures the modulus of continuity of `F` on `delta_grid` (or the
/// default grid) and fits `ω(δ) ≈ C δ^β` by least squares in log-log scale.
pub fn holder_estimate(f: &Measure, delta_grid: Option<&[f64]>) -> Result<HolderReport> {
    if let Measure::Table(t) = f {
        if t.grid().len() < 10 {
            return Err(Error::DegenerateGrid("a Hölder fit needs at least 10 table points".into()));
        }
    }
    let delta_grid = match delta_grid {
        Some(g) => g.to_vec(),
        None => default_delta_grid(f)?,
    };
    if delta_grid.len() < 2 || delta_grid.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(Error::DegenerateGrid("delta grid needs at least two positive values".into()));
    }
    let modulus: Vec<f64> = delta_grid.iter().map(|&d| modulus(f, d)).collect();
    if modulus.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::DegenerateGrid("modulus vanishes on the delta grid".into()));
    }
    let x: Vec<f64> = delta_grid.iter().map(|d| libm::log(*d)).collect();
    let y: Vec<f64> = modulus.iter().map(|w| libm::log(*w)).collect();
    let (slope, intercept, _r2) = least_squares(&x, &y);
    let rms = libm::sqrt(
        x.iter()
            .zip(&y)
            .map(|(a, b)| {
                let r = b - intercept - slope * a;
                r * r
            })
            .sum::<f64>()
            / x.len() as f64,
    );
    let beta = slope.clamp(0.0, 1.0);
    let constant = delta_grid
        .iter()
        .zip(&modulus)
        .map(|(d, w)| w / libm::pow(*d, beta))
        .fold(0.0, f64::max);
    Ok(HolderReport {
        exponent_estimate: beta,
        constant_estimate: constant,
        fitted_constant: libm::exp(intercept),
        raw_slope: slope,
        delta_grid,
        modulus,
        fit_residual: rms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{CdfTable, EmpiricalMeasure, Law};

    #[test]
    fn uniform_is_lipschitz() {
        let grid: Vec<f64> = (0..=1000).map(|k| k as f64 / 1000.0).collect();
        let t = CdfTable::new(grid.clone(), grid).unwrap();
        let r = holder_estimate(&t.into(), None).unwrap();
        assert!((r.exponent_estimate - 1.0).abs() < 0.05);
        assert!((r.constant_estimate - 1.0).abs() < 1e-9);
        assert!(r.modulus.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn atom_has_exponent_zero() {
        let d: Measure = EmpiricalMeasure::dirac(0.0).into();
        assert!(holder_estimate(&d, None).is_err());
        let grid = [1e-3, 1e-2, 1e-1];
        let r = holder_estimate(&d, Some(&grid)).unwrap();
        assert!(r.modulus.iter().all(|w| *w == 1.0));
        assert!(r.exponent_estimate.abs() < 1e-12);
    }

    #[test]
    fn closed_form_laws() {
        let r = holder_estimate(&Law::FreePoisson.into(), None).unwrap();
        assert!((r.exponent_estimate - 0.5).abs() < 0.1, "{}", r.exponent_estimate);
        let r = holder_estimate(&Law::Semicircle.into(), None).unwrap();
        assert!((r.exponent_estimate - 1.0).abs() < 0.1, "{}", r.exponent_estimate);
    }

    #[test]
    fn rejects_tiny_tables() {
        let t = CdfTable::new(alloc::vec![0.0, 1.0], alloc::vec![0.0, 1.0]).unwrap();
        assert!(holder_estimate(&t.into(), None).is_err());
    }
}

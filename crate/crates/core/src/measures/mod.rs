//! Probability measures on the real line and the analytics built on them.
//!
//! A [`Measure`] is one of
//!
//! * an [`EmpiricalMeasure`] (finitely many weighted atoms),
//! * a [`CdfTable`] (piecewise linear distribution function, jumps allowed),
//! * a closed-form [`Law`].
//!
//! Distances, Hölder moduli and energies are exact on the first two kinds
//! wherever the piecewise structure permits; for laws they fall back to a
//! dense evaluation grid.

mod bai;
mod distance;
mod energy;
mod fit;
mod holder;
mod law;

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

pub use bai::{
    bai_bound, mean_var_c, tail_integral, tail_integral_bound, w_y, BaiConfig, BaiReport, MeanVarC,
};
pub use distance::{kolmogorov, levy};
pub use energy::{entropy_from_energy, jam_bound, log_energy};
pub use fit::{rate_fit, RateFit};
pub use holder::{default_delta_grid, holder_estimate, HolderReport};
pub use law::Law;

/// Finitely many atoms with positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmpiricalMeasure {
    support: Vec<f64>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
}

impl EmpiricalMeasure {
    /// Weighted atoms; weights are normalized, coinciding atoms merged.
    pub fn new(points: &[f64], weights: &[f64]) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(invalid("empirical measure needs matching, non-empty points and weights"));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(invalid("empirical support must be finite"));
        }
        if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(invalid("empirical weights must be positive"));
        }
        let mut pairs: Vec<(f64, f64)> = points.iter().copied().zip(weights.iter().copied()).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        let mut support = Vec::with_capacity(pairs.len());
        let mut merged: Vec<f64> = Vec::with_capacity(pairs.len());
        for (x, w) in pairs {
            if support.last() == Some(&x) {
                *merged.last_mut().unwrap() += w;
            } else {
                support.push(x);
                merged.push(w);
            }
        }
        let weights: Vec<f64> = merged.iter().map(|w| w / total).collect();
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for w in &weights {
            acc += w;
            cumulative.push(acc);
        }
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(EmpiricalMeasure { support, weights, cumulative })
    }

    /// Equal weights `1/len` on the given points.
    pub fn uniform(points: &[f64]) -> Result<Self> {
        let w = alloc::vec![1.0; points.len()];
        Self::new(points, &w)
    }

    pub fn dirac(x: f64) -> Self {
        Self::new(&[x], &[1.0]).expect("finite atom")
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn cdf(&self, t: f64) -> f64 {
        let k = self.support.partition_point(|&x| x <= t);
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }

    pub fn cdf_left(&self, t: f64) -> f64 {
        let k = self.support.partition_point(|&x| x < t);
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }
}

/// A distribution function tabulated on a grid and interpolated linearly.
///
/// Repeated grid points encode jumps. Outside the grid `F` is 0 to the left
/// and 1 to the right.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CdfTable {
    grid: Vec<f64>,
    f: Vec<f64>,
}

/// Slack allowed on the end values and on monotonicity of a supplied table.
const TABLE_TOL: f64 = 1e-9;

impl CdfTable {
    /// Validates a table; end values within 1e-9 of 0 and 1 are snapped and
    /// rounding-level decreases are removed.
    pub fn new(grid: Vec<f64>, mut f: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != f.len() {
            return Err(Error::DegenerateGrid(format!(
                "a CDF table needs at least two points and matching columns (got {} and {})",
                grid.len(),
                f.len()
            )));
        }
        if grid.iter().chain(f.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("CDF table entries must be finite"));
        }
        if grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::DegenerateGrid("CDF grid must be non-decreasing".into()));
        }
        if grid[grid.len() - 1] <= grid[0] {
            return Err(Error::DegenerateGrid("CDF grid has zero span".into()));
        }
        let last = f.len() - 1;
        if f[0].abs() > TABLE_TOL || (f[last] - 1.0).abs() > TABLE_TOL {
            return Err(invalid(format!("CDF table must run from 0 to 1 (got {} to {})", f[0], f[last])));
        }
        f[0] = 0.0;
        f[last] = 1.0;
        for k in 1..f.len() {
            if f[k] < f[k - 1] - TABLE_TOL {
                return Err(invalid(format!("CDF table decreases at index {k}")));
            }
            f[k] = f[k].max(f[k - 1]).min(1.0);
        }
        Ok(CdfTable { grid, f })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn cdf(&self, t: f64) -> f64 {
        let k = self.grid.partition_point(|&x| x <= t);
        self.interp(k, t)
    }

    pub fn cdf_left(&self, t: f64) -> f64 {
        let k = self.grid.partition_point(|&x| x < t);
        self.interp(k, t)
    }

    // `k` grid points lie before `t`; interpolate on the cell that follows.
    fn interp(&self, k: usize, t: f64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        if k == self.grid.len() {
            return 1.0;
        }
        let (x0, x1) = (self.grid[k - 1], self.grid[k]);
        let (f0, f1) = (self.f[k - 1], self.f[k]);
        if x1 == x0 {
            return f1;
        }
        f0 + (f1 - f0) * (t - x0) / (x1 - x0)
    }

    /// Cells `(left, right, mass)` with positive mass; `left == right` is an atom.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.grid
            .windows(2)
            .zip(self.f.windows(2))
            .map(|(x, f)| (x[0], x[1], f[1] - f[0]))
            .filter(|c| c.2 > 0.0)
    }

    pub fn has_atoms(&self) -> bool {
        self.cells().any(|(a, b, _)| a == b)
    }
}

/// A probability measure in one of the supported representations.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Measure {
    Empirical(EmpiricalMeasure),
    Table(CdfTable),
    Law(Law),
}

impl From<EmpiricalMeasure> for Measure {
    fn from(m: EmpiricalMeasure) -> Self {
        Measure::Empirical(m)
    }
}

impl From<CdfTable> for Measure {
    fn from(m: CdfTable) -> Self {
        Measure::Table(m)
    }
}

impl From<Law> for Measure {
    fn from(m: Law) -> Self {
        Measure::Law(m)
    }
}

impl Measure {
    /// Right-continuous distribution function `μ((−∞, t])`.
    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            Measure::Empirical(m) => m.cdf(t),
            Measure::Table(m) => m.cdf(t),
            Measure::Law(m) => m.cdf(t),
        }
    }

    /// Left limit `μ((−∞, t))`.
    pub fn cdf_left(&self, t: f64) -> f64 {
        match self {
            Measure::Empirical(m) => m.cdf_left(t),
            Measure::Table(m) => m.cdf_left(t),
            Measure::Law(m) => m.cdf(t),
        }
    }

    /// Breakpoints of a piecewise linear `F`, or `None` for a smooth law.
    pub fn knots(&self) -> Option<&[f64]> {
        match self {
            Measure::Empirical(m) => Some(m.support()),
            Measure::Table(m) => Some(m.grid()),
            Measure::Law(_) => None,
        }
    }

    /// Smallest closed interval carrying all the mass.
    pub fn support_bounds(&self) -> (f64, f64) {
        match self {
            Measure::Empirical(m) => (m.support[0], m.support[m.support.len() - 1]),
            Measure::Table(m) => (m.grid[0], m.grid[m.grid.len() - 1]),
            Measure::Law(m) => m.support(),
        }
    }

    /// `∫ t^k dμ`.
    pub fn moment(&self, k: u32) -> f64 {
        match self {
            Measure::Empirical(m) => {
                m.support.iter().zip(&m.weights).map(|(x, w)| w * libm::pow(*x, k as f64)).sum()
            }
            Measure::Table(m) => m
                .cells()
                .map(|(a, b, mass)| {
                    if a == b {
                        mass * libm::pow(a, k as f64)
                    } else {
                        let p = (k + 1) as f64;
                        mass * (libm::pow(b, p) - libm::pow(a, p)) / (p * (b - a))
                    }
                })
                .sum(),
            Measure::Law(m) => m.moment(k),
        }
    }

    /// `∫ |t| dμ`.
    pub fn abs_moment(&self) -> f64 {
        match self {
            Measure::Empirical(m) => m.support.iter().zip(&m.weights).map(|(x, w)| w * x.abs()).sum(),
            Measure::Table(m) => m
                .cells()
                .map(|(a, b, mass)| {
                    if a < 0.0 && b > 0.0 {
                        mass * (a * a + b * b) / (2.0 * (b - a))
                    } else {
                        mass * (0.5 * (a + b)).abs()
                    }
                })
                .sum(),
            Measure::Law(m) => m.abs_moment(),
        }
    }

    /// Cauchy transform `G_μ(z) = ∫ (z − t)^{-1} dμ(t)` for `Im z > 0`.
    ///
    /// Table cells carry uniform mass, so each contributes a difference of
    /// logarithms.
    pub fn cauchy(&self, z: Complex64) -> Result<Complex64> {
        if !(z.im > 0.0) {
            return Err(invalid(format!("Cauchy transform needs Im z > 0, got {z}")));
        }
        Ok(match self {
            Measure::Empirical(m) => m.support.iter().zip(&m.weights).map(|(x, w)| *w / (z - *x)).sum(),
            Measure::Table(m) => m
                .cells()
                .map(|(a, b, mass)| {
                    if a == b {
                        mass / (z - a)
                    } else {
                        ((z - a).ln() - (z - b).ln()) * (mass / (b - a))
                    }
                })
                .sum(),
            Measure::Law(m) => m.cauchy(z),
        })
    }
}

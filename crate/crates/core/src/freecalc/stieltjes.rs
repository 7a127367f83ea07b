use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::measures::CdfTable;

/// Most negative raw density accepted before the transform is declared bad.
const NEGATIVE_DENSITY_TOL: f64 = 1e-9;

/// Density and distribution function recovered from a Cauchy transform.
#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesTable {
    pub grid: Vec<f64>,
    /// Clipped density, before renormalization.
    pub density: Vec<f64>,
    /// Trapezoidal distribution function normalized to total mass one.
    pub cdf: CdfTable,
    /// Mass captured on the grid before renormalization.
    pub raw_mass: f64,
}

fn densities<G>(g: &mut G, grid: &[f64], eps: f64) -> Result<Vec<f64>>
where
    G: FnMut(Complex64) -> Result<Complex64>,
{
    grid.iter()
        .map(|&x| {
            let d = -g(Complex64::new(x, eps))?.im / PI;
            if d < -NEGATIVE_DENSITY_TOL {
                return Err(Error::NegativeDensity { x, value: d });
            }
            Ok(d)
        })
        .collect()
}

/// Recovers a distribution from its Cauchy transform `g` through
/// `density(x) = −Im g(x + iε)/π`.
///
/// With `richardson` the density is extrapolated as `2ρ(ε) − ρ(2ε)`, which
/// removes the first-order smoothing bias. Densities are clipped at zero,
/// integrated by the trapezoid rule and normalized to mass one. Points are
/// evaluated in grid order (first all at `ε`, then all at `2ε`), so `g` may
/// warm-start from its previous call.
pub fn stieltjes_invert<G>(mut g: G, grid: &[f64], eps: f64, richardson: bool) -> Result<StieltjesTable>
where
    G: FnMut(Complex64) -> Result<Complex64>,
{
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid("Stieltjes inversion needs ε > 0"));
    }
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::DegenerateGrid("inversion grid must be strictly increasing".into()));
    }
    let mut density = densities(&mut g, grid, eps)?;
    if richardson {
        let coarse = densities(&mut g, grid, 2.0 * eps)?;
        for (d, c) in density.iter_mut().zip(coarse) {
            *d = 2.0 * *d - c;
        }
    }
    for d in density.iter_mut() {
        *d = d.max(0.0);
    }
    let mut cum = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    cum.push(0.0);
    for k in 1..grid.len() {
        acc += 0.5 * (density[k] + density[k - 1]) * (grid[k] - grid[k - 1]);
        cum.push(acc);
    }
    if !(acc > 0.0) {
        return Err(Error::DegenerateGrid("no mass recovered on the grid".into()));
    }
    let f = cum.iter().map(|c| c / acc).collect();
    Ok(StieltjesTable { grid: grid.to_vec(), density, cdf: CdfTable::new(grid.to_vec(), f)?, raw_mass: acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{kolmogorov, Law, Measure};

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn semicircle_density_at_zero() {
        let t = stieltjes_invert(|z| Ok(Law::Semicircle.cauchy(z)), &[-0.1, 0.0, 0.1], 1e-8, false).unwrap();
        assert!((t.density[1] - 1.0 / PI).abs() < 1e-7);
    }

    #[test]
    fn dirac_gives_cauchy_kernel() {
        let eps = 0.05;
        let g = grid(-1.0, 1.0, 201);
        let t = stieltjes_invert(|z| Ok(1.0 / z), &g, eps, false).unwrap();
        for (x, d) in g.iter().zip(&t.density) {
            assert!((d - eps / (PI * (x * x + eps * eps))).abs() < 1e-12);
        }
        assert_eq!(*t.cdf.values().last().unwrap(), 1.0);
    }

    #[test]
    fn richardson_sharpens_the_semicircle() {
        let g = grid(-2.5, 2.5, 5001);
        let sc: Measure = Law::Semicircle.into();
        let plain = stieltjes_invert(|z| Ok(Law::Semicircle.cauchy(z)), &g, 1e-2, false).unwrap();
        let rich = stieltjes_invert(|z| Ok(Law::Semicircle.cauchy(z)), &g, 1e-2, true).unwrap();
        let dp = kolmogorov(&plain.cdf.into(), &sc);
        let dr = kolmogorov(&rich.cdf.into(), &sc);
        assert!(dr < dp, "{dr} vs {dp}");
    }

    #[test]
    fn rejects_wrong_sign() {
        let g = grid(-1.0, 1.0, 11);
        assert!(matches!(
            stieltjes_invert(|z| Ok(-1.0 / z), &g, 0.1, false),
            Err(Error::NegativeDensity { .. })
        ));
        assert!(stieltjes_invert(|z| Ok(1.0 / z), &g, 0.0, false).is_err());
        assert!(stieltjes_invert(|z| Ok(1.0 / z), &[1.0, 1.0], 0.1, false).is_err());
    }
}

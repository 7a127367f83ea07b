use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{CdfTable, Measure};
use crate::error::{invalid, Result};

/// Cells used to discretize a closed-form law before integrating.
const LAW_CELLS: usize = 16_000;

/// `Ψ(u) = u²/2 · log|u| − 3u²/4`, the second antiderivative of `log|u|`.
fn psi(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        0.5 * u * u * libm::log(u.abs()) - 0.75 * u * u
    }
}

/// Second difference `Ψ(k+1) − 2Ψ(k) + Ψ(k−1)` at an integer `k ≥ 0`,
/// rearranged through `log1p` to avoid cancellation at large `k`.
fn psi_second_difference(k: usize) -> f64 {
    match k {
        0 => 2.0 * psi(1.0),
        1 => psi(2.0) - 2.0 * psi(1.0),
        _ => {
            let k = k as f64;
            libm::log(k) + 0.5 * (k + 1.0) * (k + 1.0) * libm::log1p(1.0 / k)
                + 0.5 * (k - 1.0) * (k - 1.0) * libm::log1p(-1.0 / k)
                - 1.5
        }
    }
}

/// `∫_a^b ∫_c^d log|s − t| dt ds`.
fn cell_pair(a: f64, b: f64, c: f64, d: f64) -> f64 {
    psi(b - c) - psi(a - c) - psi(b - d) + psi(a - d)
}

fn table_energy(t: &CdfTable) -> f64 {
    let cells: Vec<(f64, f64, f64)> = t.cells().collect();
    let total: f64 = cells.iter().map(|c| c.2).sum();
    let h0 = cells[0].1 - cells[0].0;
    let uniform = t.grid().windows(2).all(|w| ((w[1] - w[0]) - h0).abs() <= 1e-9 * h0);
    if uniform {
        // Density is constant on equal cells: the pair integral depends on
        // the index offset only.
        let x0 = t.grid()[0];
        let last = cells.iter().map(|c| libm::round((c.0 - x0) / h0) as usize).max().unwrap_or(0);
        let mut mass = alloc::vec![0.0; last + 1];
        for (a, _, m) in &cells {
            mass[libm::round((a - x0) / h0) as usize] += m;
        }
        let mut acc = 0.0;
        for k in 0..mass.len() {
            let corr: f64 = mass[k..].iter().zip(&mass).map(|(p, q)| p * q).sum();
            let weight = if k == 0 { 1.0 } else { 2.0 };
            acc += weight * corr * psi_second_difference(k);
        }
        -total * total * libm::log(h0) - acc
    } else {
        let mut acc = 0.0;
        for (i, &(a, b, mi)) in cells.iter().enumerate() {
            for &(c, d, mj) in &cells[..i] {
                acc += 2.0 * mi * mj * cell_pair(a, b, c, d) / ((b - a) * (d - c));
            }
            acc += mi * mi * cell_pair(a, b, a, b) / ((b - a) * (b - a));
        }
        -acc
    }
}

/// Logarithmic energy `I(μ) = ∬ log(1/|s−t|) dμ(s) dμ(t)`.
///
/// Tables are integrated exactly for the piecewise constant density implied
/// by their cell masses; closed-form laws are tabulated on a fine grid first.
/// Measures with atoms have infinite energy and yield `+∞`, unless an
/// empirical measure is given a Cauchy smoothing bandwidth `ε`, in which case
/// the smoothed energy `−Σ w_i w_j log|x_i − x_j + 2iε|` is returned exactly.
pub fn log_energy(mu: &Measure, smoothing: Option<f64>) -> Result<f64> {
    if let Some(eps) = smoothing {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(invalid(format!("smoothing bandwidth must be positive, got {eps}")));
        }
    }
    match mu {
        Measure::Empirical(m) => match smoothing {
            None => Ok(f64::INFINITY),
            Some(eps) => {
                let (x, w) = (m.support(), m.weights());
                let mut acc = 0.0;
                for i in 0..x.len() {
                    for j in 0..x.len() {
                        let d = x[i] - x[j];
                        acc += w[i] * w[j] * 0.5 * libm::log(d * d + 4.0 * eps * eps);
                    }
                }
                Ok(-acc)
            }
        },
        Measure::Table(t) => {
            if t.has_atoms() {
                if smoothing.is_some() {
                    return Err(invalid("smoothing is only supported for empirical measures"));
                }
                return Ok(f64::INFINITY);
            }
            Ok(table_energy(t))
        }
        Measure::Law(law) => Ok(table_energy(&law.to_table(LAW_CELLS)?)),
    }
}

/// Free entropy of a single variable from its logarithmic energy,
/// `χ = −I + 3/4 + ½ log 2π` (`−∞` for infinite energy).
pub fn entropy_from_energy(energy: f64) -> f64 {
    if energy == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    -energy + 0.75 + 0.5 * libm::log(2.0 * PI)
}

/// Energy bound `2C/β` for a distribution function that is Hölder
/// continuous with constant `C` and exponent `β`.
pub fn jam_bound(c: f64, beta: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid(format!("Hölder constant must be positive, got {c}")));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(invalid(format!("Hölder exponent must lie in (0, 1], got {beta}")));
    }
    Ok(2.0 * c / beta)
}

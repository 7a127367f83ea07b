use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::CdfTable;
use crate::error::{invalid, Result};

/// Closed-form laws used as limits and references.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Law {
    /// Standard semicircle on `[−2, 2]` (variance 1).
    Semicircle,
    /// Free Poisson with rate 1 on `[0, 4]`: the law of `S²`.
    FreePoisson,
    Uniform { a: f64, b: f64 },
}

pub(crate) fn catalan(k: u32) -> f64 {
    let mut c = 1.0;
    for j in 0..k {
        c = c * 2.0 * (2 * j + 1) as f64 / (j + 2) as f64;
    }
    c
}

impl Law {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a < b && a.is_finite() && b.is_finite()) {
            return Err(invalid("uniform law needs finite a < b"));
        }
        Ok(Law::Uniform { a, b })
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            Law::Semicircle => (-2.0, 2.0),
            Law::FreePoisson => (0.0, 4.0),
            Law::Uniform { a, b } => (a, b),
        }
    }

    pub fn density(&self, t: f64) -> f64 {
        match *self {
            Law::Semicircle => {
                if t.abs() >= 2.0 {
                    0.0
                } else {
                    libm::sqrt(4.0 - t * t) / (2.0 * PI)
                }
            }
            Law::FreePoisson => {
                if t <= 0.0 || t >= 4.0 {
                    0.0
                } else {
                    libm::sqrt((4.0 - t) / t) / (2.0 * PI)
                }
            }
            Law::Uniform { a, b } => {
                if t < a || t > b {
                    0.0
                } else {
                    1.0 / (b - a)
                }
            }
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        match *self {
            Law::Semicircle => {
                if t <= -2.0 {
                    0.0
                } else if t >= 2.0 {
                    1.0
                } else {
                    0.5 + t * libm::sqrt(4.0 - t * t) / (4.0 * PI) + libm::asin(t / 2.0) / PI
                }
            }
            Law::FreePoisson => {
                if t <= 0.0 {
                    0.0
                } else if t >= 4.0 {
                    1.0
                } else {
                    // t = 4 sin²φ turns the density into (4/π) cos²φ dφ.
                    let phi = libm::asin(libm::sqrt(t) / 2.0);
                    (2.0 / PI) * (phi + 0.5 * libm::sin(2.0 * phi))
                }
            }
            Law::Uniform { a, b } => ((t - a) / (b - a)).clamp(0.0, 1.0),
        }
    }

    pub fn moment(&self, k: u32) -> f64 {
        match *self {
            Law::Semicircle => {
                if k % 2 == 1 {
                    0.0
                } else {
                    catalan(k / 2)
                }
            }
            Law::FreePoisson => catalan(k),
            Law::Uniform { a, b } => {
                let p = (k + 1) as f64;
                (libm::pow(b, p) - libm::pow(a, p)) / (p * (b - a))
            }
        }
    }

    pub fn abs_moment(&self) -> f64 {
        match *self {
            Law::Semicircle => 8.0 / (3.0 * PI),
            Law::FreePoisson => 1.0,
            Law::Uniform { a, b } => {
                if a < 0.0 && b > 0.0 {
                    (a * a + b * b) / (2.0 * (b - a))
                } else {
                    (0.5 * (a + b)).abs()
                }
            }
        }
    }

    /// Closed-form Cauchy transform (principal square roots and logarithms,
    /// valid for `Im z > 0`). The square-root laws use the rationalized form
    /// `2/(z + s)`, which does not cancel for large `|z|`.
    pub fn cauchy(&self, z: Complex64) -> Complex64 {
        match *self {
            Law::Semicircle => 2.0 / (z + (z - 2.0).sqrt() * (z + 2.0).sqrt()),
            Law::FreePoisson => 2.0 / (z + z.sqrt() * (z - 4.0).sqrt()),
            Law::Uniform { a, b } => ((z - a).ln() - (z - b).ln()) / (b - a),
        }
    }

    /// The law's CDF sampled on `cells + 1` equispaced points of its support.
    pub fn to_table(&self, cells: usize) -> Result<CdfTable> {
        if cells == 0 {
            return Err(invalid("need at least one cell"));
        }
        let (lo, hi) = self.support();
        let h = (hi - lo) / cells as f64;
        let grid: Vec<f64> = (0..=cells).map(|k| if k == cells { hi } else { lo + h * k as f64 }).collect();
        let f = grid.iter().map(|&t| self.cdf(t)).collect();
        CdfTable::new(grid, f)
    }
}

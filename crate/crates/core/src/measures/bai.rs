use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::distance::golden_max;
use super::Measure;
use crate::error::{invalid, Result};
use crate::quad::{integrate, integrate_to_infinity};

/// Means, variances and `c(μ,ν) = (σ²(μ) + σ²(ν) + (m(μ) − m(ν))²)^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeanVarC {
    pub mean_mu: f64,
    pub var_mu: f64,
    pub mean_nu: f64,
    pub var_nu: f64,
    pub c: f64,
}

pub fn mean_var_c(mu: &Measure, nu: &Measure) -> Result<MeanVarC> {
    let stats = |m: &Measure| -> Result<(f64, f64)> {
        let mean = m.moment(1);
        let var = (m.moment(2) - mean * mean).max(0.0);
        if !(mean.is_finite() && var.is_finite()) {
            return Err(invalid("measure has infinite second moment"));
        }
        Ok((mean, var))
    };
    let (mean_mu, var_mu) = stats(mu)?;
    let (mean_nu, var_nu) = stats(nu)?;
    let dm = mean_mu - mean_nu;
    Ok(MeanVarC { mean_mu, var_mu, mean_nu, var_nu, c: libm::sqrt(var_mu + var_nu + dm * dm) })
}

/// `W_y(μ) = (1 + ∫|t| dμ / (2y) + ∫t² dμ / (2y²))^{1/2}`.
pub fn w_y(mu: &Measure, y: f64) -> Result<f64> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(invalid(format!("y must be positive, got {y}")));
    }
    let v = 1.0 + mu.abs_moment() / (2.0 * y) + mu.moment(2) / (2.0 * y * y);
    if !v.is_finite() {
        return Err(invalid("measure has infinite second moment"));
    }
    Ok(libm::sqrt(v))
}

/// `∫_{|x|≥A} dx / (x² + y²)`.
fn tail_kernel_integral(y: f64, a: f64) -> f64 {
    (2.0 / y) * (PI / 2.0 - libm::atan(a / y))
}

/// Upper bound `c(μ,ν) W_y(μ) W_y(ν) ∫_{|x|≥A} dx/(x²+y²)` on the tail
/// integral of `|G_μ − G_ν|` along `Im z = y`.
pub fn tail_integral_bound(mu: &Measure, nu: &Measure, y: f64, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(invalid(format!("A must be positive, got {a}")));
    }
    let c = mean_var_c(mu, nu)?.c;
    Ok(c * w_y(mu, y)? * w_y(nu, y)? * tail_kernel_integral(y, a))
}

fn cauchy_gap(mu: &Measure, nu: &Measure, x: f64, y: f64) -> f64 {
    let z = Complex64::new(x, y);
    match (mu.cauchy(z), nu.cauchy(z)) {
        (Ok(g), Ok(h)) => (g - h).norm(),
        _ => f64::NAN,
    }
}

/// The tail integral `∫_{|x|≥A} |G_μ(x+iy) − G_ν(x+iy)| dx` by quadrature.
pub fn tail_integral(mu: &Measure, nu: &Measure, y: f64, a: f64) -> Result<f64> {
    if !(y > 0.0 && a > 0.0) {
        return Err(invalid("tail integral needs y > 0 and A > 0"));
    }
    let right = integrate_to_infinity(|x| cauchy_gap(mu, nu, x, y), a, 1e-12, 1e-9, 20_000)?;
    let left = integrate_to_infinity(|x| cauchy_gap(mu, nu, -x, y), a, 1e-12, 1e-9, 20_000)?;
    Ok(right.value + left.value)
}

/// Constants of the Kolmogorov-distance inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BaiConfig {
    pub a: f64,
    /// `γ = (1/π) ∫_{|x|<a} dx/(x²+1) = (2/π) arctan a`.
    pub gamma: f64,
    pub big_a: f64,
    pub big_b: f64,
    /// `κ = 4B / (π (A − B)(2γ − 1))`.
    pub kappa: f64,
    pub y: f64,
}

impl BaiConfig {
    /// Derives `γ` and `κ`, rejecting `γ ≤ 1/2`, `A ≤ B` and `κ ≥ 1`.
    pub fn new(a: f64, big_a: f64, big_b: f64, y: f64) -> Result<Self> {
        if !(a > 0.0 && big_b > 0.0 && y > 0.0 && big_a.is_finite() && y.is_finite()) {
            return Err(invalid("a, B and y must be positive and finite"));
        }
        let gamma = (2.0 / PI) * libm::atan(a);
        if !(gamma > 0.5) {
            return Err(invalid(format!("gamma = {gamma} must exceed 1/2 (need a > 1)")));
        }
        if !(big_a > big_b) {
            return Err(invalid(format!("need A > B, got A = {big_a}, B = {big_b}")));
        }
        let kappa = 4.0 * big_b / (PI * (big_a - big_b) * (2.0 * gamma - 1.0));
        if !(kappa < 1.0) {
            return Err(invalid(format!("kappa = {kappa} must be below 1; enlarge A")));
        }
        Ok(BaiConfig { a, gamma, big_a, big_b, kappa, y })
    }
}

/// The three terms of the bound and the resulting bound on `Δ(μ,ν)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BaiReport {
    pub cauchy_term: f64,
    pub tail_term: f64,
    pub smoothness_term: f64,
    pub bound: f64,
}

/// `∫_lo^hi |f|` for a function known through right values `fr` and left
/// limits `fl`. On pieces between `knots` it is linear when `linear` holds
/// (integrated exactly), otherwise it is integrated adaptively.
fn abs_integral<F, G>(fr: F, fl: G, lo: f64, hi: f64, knots: &[f64], linear: bool) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if hi <= lo {
        return Ok(0.0);
    }
    let mut pts: Vec<f64> = Vec::with_capacity(knots.len() + 2);
    pts.push(lo);
    let start = knots.partition_point(|&k| k <= lo);
    pts.extend(knots[start..].iter().copied().take_while(|&k| k < hi));
    pts.push(hi);
    pts.dedup();
    let mut total = 0.0;
    for w in pts.windows(2) {
        let (p, q) = (w[0], w[1]);
        if linear {
            let (d0, d1) = (fr(p), fl(q));
            let len = q - p;
            total += if d0 * d1 >= 0.0 {
                0.5 * (d0.abs() + d1.abs()) * len
            } else {
                0.5 * (d0 * d0 + d1 * d1) / (d0.abs() + d1.abs()) * len
            };
        } else {
            total += integrate(|t| fr(t).abs(), p, q, 1e-13, 1e-10, 4000)?.value;
        }
    }
    Ok(total)
}

/// Merged breakpoints of both measures, including the support ends of laws.
fn merged_knots(mu: &Measure, nu: &Measure) -> Vec<f64> {
    let mut k = Vec::new();
    for m in [mu, nu] {
        match m.knots() {
            Some(kn) => k.extend_from_slice(kn),
            None => {
                let (lo, hi) = m.support_bounds();
                k.extend([lo, hi]);
                if let Measure::Law(super::Law::FreePoisson) = m {
                    k.push(0.0);
                }
            }
        }
    }
    k.sort_by(f64::total_cmp);
    k.dedup();
    k
}

/// Evaluates the right-hand side of the Kolmogorov-distance inequality:
///
/// `[∫_{−A}^{A} |G_μ − G_ν|(x+iy) dx + (2π/y) ∫_{|t|>B} |F_μ − F_ν| dt
///   + (1/y) sup_t ∫_{|s|≤2ya} |F_ν(t+s) − F_ν(t)| ds] / (π(1−κ)(2γ−1))`.
///
/// The supremum is taken over the knots of `ν` and a regular scan with step
/// `2ya/10`, polished locally; it can only underestimate the true supremum by
/// the variation of the inner integral across one scan step.
pub fn bai_bound(mu: &Measure, nu: &Measure, cfg: &BaiConfig) -> Result<BaiReport> {
    let y = cfg.y;
    let cauchy_term =
        integrate(|x| cauchy_gap(mu, nu, x, y), -cfg.big_a, cfg.big_a, 1e-11, 1e-9, 100_000)?.value;

    let linear = mu.knots().is_some() && nu.knots().is_some();
    let knots = merged_knots(mu, nu);
    let (a0, b0) = mu.support_bounds();
    let (a1, b1) = nu.support_bounds();
    let (lo, hi) = (a0.min(a1), b0.max(b1));
    let diff = |t: f64| mu.cdf(t) - nu.cdf(t);
    let diff_left = |t: f64| mu.cdf_left(t) - nu.cdf_left(t);
    let b = cfg.big_b;
    let tail = abs_integral(diff, diff_left, b, hi, &knots, linear)?
        + abs_integral(diff, diff_left, lo, -b, &knots, linear)?;
    let tail_term = (2.0 * PI / y) * tail;

    let w = 2.0 * y * cfg.a;
    let nu_knots = merged_knots(nu, nu);
    let nu_linear = nu.knots().is_some();
    let window = |t: f64| -> f64 {
        let ft = nu.cdf(t);
        abs_integral(|u| nu.cdf(u) - ft, |u| nu.cdf_left(u) - ft, t - w, t + w, &nu_knots, nu_linear)
            .unwrap_or(f64::NAN)
    };
    let step = w / 10.0;
    let mut ts: Vec<f64> = nu.knots().map(|k| k.to_vec()).unwrap_or_default();
    let count = libm::ceil((b1 - a1 + 2.0 * w) / step) as usize;
    ts.extend((0..=count).map(|k| a1 - w + step * k as f64));
    let (mut best, mut arg) = (0.0_f64, a1);
    for t in ts {
        let v = window(t);
        if !v.is_finite() {
            return Err(crate::error::Error::Oracle("smoothness integral failed".into()));
        }
        if v > best {
            best = v;
            arg = t;
        }
    }
    best = best.max(golden_max(window, arg - step, arg + step, 30));
    let smoothness_term = best / y;

    let prefactor = PI * (1.0 - cfg.kappa) * (2.0 * cfg.gamma - 1.0);
    Ok(BaiReport {
        cauchy_term,
        tail_term,
        smoothness_term,
        bound: (cauchy_term + tail_term + smoothness_term) / prefactor,
    })
}

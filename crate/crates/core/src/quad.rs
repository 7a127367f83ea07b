//! Adaptive one-dimensional quadrature (Gauss–Kronrod 7/15).

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate and the Gauss–Kronrod difference on `[a, b]`.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Globally adaptive GK15 on `[a, b]`, bisecting the worst segment until the
/// summed error estimate is below `max(abs_tol, rel_tol·|I|)`.
///
/// Fails with `NoConvergence` once `max_segments` is exhausted.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(crate::error::invalid("integration limits must be finite"));
    }
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0 });
    }
    if a > b {
        let r = integrate(f, b, a, abs_tol, rel_tol, max_segments)?;
        return Ok(Integral { value: -r.value, error: r.error });
    }
    let mut heap = BinaryHeap::new();
    let (value, error) = gk15(&mut f, a, b);
    heap.push(Segment { a, b, value, error });
    let (mut total, mut total_err) = (value, error);
    let mut segments = 1;
    loop {
        if !total.is_finite() {
            return Err(Error::Oracle("integrand produced a non-finite value".into()));
        }
        if total_err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(Integral { value: total, error: total_err });
        }
        if segments >= max_segments {
            return Err(Error::NoConvergence { iterations: segments, residual: total_err });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Segment can no longer be split in floating point.
            return Ok(Integral { value: total, error: total_err });
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
        segments += 1;
        if segments % 64 == 0 {
            // Re-sum to keep incremental drift out of the stopping test.
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// `∫_a^∞ f` via the substitution `x = a + t/(1−t)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Result<Integral> {
    integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - t;
            f(a + t / s) / (s * s)
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
        max_segments,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| x * x * x - 2.0 * x + 1.0, -1.0, 2.0, 1e-14, 0.0, 10).unwrap();
        assert!((r.value - (15.0 / 4.0 - 3.0 + 3.0)).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let r = integrate(libm::exp, 1.0, 0.0, 1e-13, 0.0, 50).unwrap();
        assert!((r.value + (core::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x| 1.0 / libm::sqrt(x), 0.0, 1.0, 1e-9, 0.0, 2000).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn semi_infinite() {
        let r = integrate_to_infinity(|x| 1.0 / (1.0 + x * x), 0.0, 1e-12, 0.0, 200).unwrap();
        assert!((r.value - core::f64::consts::FRAC_PI_2).abs() < 1e-11);
    }
}

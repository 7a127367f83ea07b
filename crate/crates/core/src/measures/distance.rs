use alloc::vec::Vec;

use super::Measure;

/// Points in the dense grid used whenever a closed-form law is involved.
const LAW_GRID: usize = 20_001;

/// Sorted, deduplicated breakpoints of both measures, plus a dense grid over
/// the joint support when one of them is a smooth law.
fn candidates(mu: &Measure, nu: &Measure, shifts: &[f64]) -> Vec<f64> {
    let mut pts = Vec::new();
    for m in [mu, nu] {
        if let Some(k) = m.knots() {
            for s in shifts {
                pts.extend(k.iter().map(|x| x + s));
            }
        }
    }
    if let Some(g) = law_grid(mu, nu) {
        pts.extend(g);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn law_grid(mu: &Measure, nu: &Measure) -> Option<Vec<f64>> {
    if mu.knots().is_some() && nu.knots().is_some() {
        return None;
    }
    let (a0, b0) = mu.support_bounds();
    let (a1, b1) = nu.support_bounds();
    let (lo, hi) = (a0.min(a1), b0.max(b1));
    let pad = 1e-3 * (hi - lo).max(1e-9);
    let (lo, hi) = (lo - pad, hi + pad);
    let h = (hi - lo) / (LAW_GRID - 1) as f64;
    Some((0..LAW_GRID).map(|k| lo + h * k as f64).collect())
}

fn grid_step(mu: &Measure, nu: &Measure) -> f64 {
    let (a0, b0) = mu.support_bounds();
    let (a1, b1) = nu.support_bounds();
    (b0.max(b1) - a0.min(a1)).max(1e-9) * 1.001 / (LAW_GRID - 1) as f64
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
pub(crate) fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, iters: usize) -> f64 {
    const R: f64 = 0.618_033_988_749_894_8;
    let mut c = b - R * (b - a);
    let mut d = a + R * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = fc.max(fd);
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - R * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + R * (b - a);
            fd = f(d);
        }
        best = best.max(fc).max(fd);
    }
    best
}

/// Kolmogorov distance `sup_t |F_μ(t) − F_ν(t)|`.
///
/// Exact when neither argument is a closed-form law: between merged
/// breakpoints both distribution functions are linear, so the supremum is
/// attained at a breakpoint as a one-sided limit. With a law involved the
/// dense-grid maximum is polished by a local golden-section search.
pub fn kolmogorov(mu: &Measure, nu: &Measure) -> f64 {
    let diff = |t: f64| (mu.cdf(t) - nu.cdf(t)).abs();
    let diff_left = |t: f64| (mu.cdf_left(t) - nu.cdf_left(t)).abs();
    let mut best = 0.0_f64;
    let mut arg = 0.0;
    for t in candidates(mu, nu, &[0.0]) {
        let v = diff(t).max(diff_left(t));
        if v > best {
            best = v;
            arg = t;
        }
    }
    if mu.knots().is_none() || nu.knots().is_none() {
        let h = grid_step(mu, nu);
        best = best.max(golden_max(diff, arg - h, arg + h, 60));
    }
    best.min(1.0)
}

/// Tolerance on the sandwich inequalities in the Lévy bisection.
const LEVY_SLACK: f64 = 1e-12;

fn sandwich_holds(mu: &Measure, nu: &Measure, eps: f64) -> bool {
    let ok = |lower: f64, mid: f64, upper: f64| lower - eps <= mid + LEVY_SLACK && mid <= upper + eps + LEVY_SLACK;
    candidates(mu, nu, &[-eps, 0.0, eps]).into_iter().all(|t| {
        ok(mu.cdf(t - eps), nu.cdf(t), mu.cdf(t + eps))
            && ok(mu.cdf_left(t - eps), nu.cdf_left(t), mu.cdf_left(t + eps))
    })
}

/// Lévy distance: the smallest `ε` with
/// `F_μ(t−ε) − ε ≤ F_ν(t) ≤ F_μ(t+ε) + ε` for all `t`, found by bisection
/// to 1e-6 (the returned value is the upper end of the final bracket).
pub fn levy(mu: &Measure, nu: &Measure) -> f64 {
    if sandwich_holds(mu, nu, 0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if sandwich_holds(mu, nu, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

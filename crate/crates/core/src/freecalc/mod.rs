//! Free-probability calculus for free semicircular families.
//!
//! Exact traces come from counting non-crossing pairings; operator-valued
//! Cauchy transforms come from a fixed-point solver ([`matrix_cauchy`]);
//! distributions come from Stieltjes inversion of those transforms.

mod cauchy;
mod pipeline;
mod semiflat;
mod stieltjes;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::Measure;
use crate::ncpoly::{BiPoly, NcPoly, Word};

pub use cauchy::{matrix_cauchy, CauchySolver, MatrixCauchy, QuantumOperator};
pub use pipeline::{spectral_distribution, PipelineOptions, SpectralDistribution};
pub use semiflat::semiflat_constant;
pub use stieltjes::{stieltjes_invert, StieltjesTable};

/// `n` free standard semicircular elements `S_1, …, S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemicircularFamily {
    pub n: usize,
}

impl SemicircularFamily {
    pub fn new(n: usize) -> Self {
        SemicircularFamily { n }
    }

    fn check(&self, p_n: usize) -> Result<()> {
        if p_n > self.n {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {p_n} variables traced against {} semicirculars",
                self.n
            )));
        }
        Ok(())
    }
}

/// `τ(S_{i1} ⋯ S_{ik})`: the number of non-crossing pair partitions of the
/// positions whose blocks join equal letters.
///
/// Interval recursion: the first position pairs with some later position at
/// odd distance carrying the same letter, which splits the word into an
/// inside and an outside part. Memoized per call.
pub fn semicircular_word_moment(word: &Word) -> u64 {
    let w = word.letters();
    let k = w.len();
    if k % 2 == 1 {
        return 0;
    }
    // memo[l][r] counts pairings of w[l..r]; only even lengths are reachable.
    let mut memo = vec![vec![0u64; k + 1]; k + 1];
    for l in 0..=k {
        memo[l][l] = 1;
    }
    for len in (2..=k).step_by(2) {
        for l in 0..=k - len {
            let r = l + len;
            let mut total = 0u64;
            for j in (l + 1..r).step_by(2) {
                if w[j] == w[l] {
                    total += memo[l + 1][j] * memo[j + 1][r];
                }
            }
            memo[l][r] = total;
        }
    }
    memo[0][k]
}

/// `τ(p(S_1, …, S_n))`.
pub fn trace_poly(p: &NcPoly, family: &SemicircularFamily) -> Result<Complex64> {
    family.check(p.n())?;
    Ok(p.terms().map(|(w, c)| c * semicircular_word_moment(w) as f64).sum())
}

/// `(τ ⊗ τ)(q)` for a bi-polynomial in the family.
pub fn trace_bipoly(q: &BiPoly, family: &SemicircularFamily) -> Result<Complex64> {
    family.check(q.n())?;
    Ok(q.terms()
        .map(|((a, b), c)| c * (semicircular_word_moment(a) * semicircular_word_moment(b)) as f64)
        .sum())
}

/// `‖p(S)‖₂ = τ(p* p)^{1/2}`.
pub fn l2_norm(p: &NcPoly, family: &SemicircularFamily) -> Result<f64> {
    let t = trace_poly(&(&p.adjoint() * p), family)?;
    Ok(libm::sqrt(t.re.max(0.0)))
}

/// Lower bound `τ((p* p)^m)^{1/(2m)} ≤ ‖p(S)‖` on the operator norm; it
/// increases to the norm as `m → ∞`.
pub fn op_norm_lower(p: &NcPoly, family: &SemicircularFamily, m: u32) -> Result<f64> {
    if m == 0 {
        return Err(crate::error::invalid("power must be positive"));
    }
    let pp = &p.adjoint() * p;
    let mut power = pp.clone();
    for _ in 1..m {
        power = &power * &pp;
    }
    let t = trace_poly(&power, family)?.re.max(0.0);
    Ok(libm::pow(t, 1.0 / (2.0 * m as f64)))
}

/// `Δ_{v,i} p = (φ_v ⊗ id)(∂_i p)` with `φ_v(a) = τ(v* a)`.
pub fn delta_reduce(p: &NcPoly, v: &NcPoly, i: usize, family: &SemicircularFamily) -> Result<NcPoly> {
    family.check(p.n().max(v.n()))?;
    let dp = p.nc_derivative(i)?;
    let v_star = v.adjoint();
    dp.contract_left(|a| {
        let a = NcPoly::monomial(p.n().max(v.n()), a.clone(), Complex64::new(1.0, 0.0));
        trace_poly(&(&v_star * &a), family)
    })
}

/// Both sides of the Schwinger–Dyson relation `(τ⊗τ)(∂_j P) = τ(P x_j)`
/// for the quadratic potential, whose cyclic gradient is `x_j`.
pub fn schwinger_dyson_sides(p: &NcPoly, j: usize, family: &SemicircularFamily) -> Result<(Complex64, Complex64)> {
    let lhs = trace_bipoly(&p.nc_derivative(j)?, family)?;
    let xj = NcPoly::var(p.n(), j);
    let rhs = trace_poly(&(p * &xj), family)?;
    Ok((lhs, rhs))
}

/// Moment power used for operator-norm lower bounds in [`trace_inequality`].
pub const NORM_POWER: u32 = 5;

/// Both sides of `|τ((Δ_{v,i}P) u)| ≤ 4(‖P u‖₂ ‖v‖ + ‖u‖ ‖P* v‖₂)` for
/// semicirculars (whose conjugate variables have unit `L²` norm).
///
/// Operator norms are replaced by the moment lower bounds of
/// [`op_norm_lower`], so the returned right-hand side never exceeds the
/// true one.
pub fn trace_inequality(
    p: &NcPoly,
    u: &NcPoly,
    v: &NcPoly,
    i: usize,
    family: &SemicircularFamily,
) -> Result<(f64, f64)> {
    let lhs = trace_poly(&(&delta_reduce(p, v, i, family)? * u), family)?.norm();
    let pu = l2_norm(&(p * u), family)?;
    let pv = l2_norm(&(&p.adjoint() * v), family)?;
    let nu = op_norm_lower(u, family, NORM_POWER)?;
    let nv = op_norm_lower(v, family, NORM_POWER)?;
    Ok((lhs, 4.0 * (pu * nv + nu * pv)))
}

/// Cauchy transform `G_μ(z)` of an empirical measure or closed-form law.
pub fn scalar_cauchy(measure: &Measure, z: Complex64) -> Result<Complex64> {
    measure.cauchy(z)
}

/// The moments `τ(p^k)`, `k = 0..=kmax`.
pub fn poly_moments(p: &NcPoly, family: &SemicircularFamily, kmax: u32) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(kmax as usize + 1);
    let mut power = NcPoly::one(p.n());
    for _ in 0..=kmax {
        out.push(trace_poly(&power, family)?);
        power = &power * p;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{EmpiricalMeasure, Law};

    fn p(s: &str) -> NcPoly {
        s.parse().unwrap()
    }

    #[test]
    fn word_moments() {
        assert_eq!(semicircular_word_moment(&Word::unit()), 1);
        assert_eq!(semicircular_word_moment(&Word::new([1, 1])), 1);
        assert_eq!(semicircular_word_moment(&Word::new([1; 4])), 2);
        assert_eq!(semicircular_word_moment(&Word::new([1; 6])), 5);
        assert_eq!(semicircular_word_moment(&Word::new([1; 3])), 0);
        assert_eq!(semicircular_word_moment(&Word::new([1, 2, 1, 2])), 0);
        assert_eq!(semicircular_word_moment(&Word::new([1, 2, 2, 1])), 1);
        assert_eq!(semicircular_word_moment(&Word::new([1, 1, 2, 2])), 1);
        assert_eq!(semicircular_word_moment(&Word::new([1; 20])), 16796);
    }

    #[test]
    fn traces() {
        let f = SemicircularFamily::new(2);
        assert_eq!(trace_poly(&p("x1x1"), &f).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(trace_poly(&NcPoly::one(1), &f).unwrap(), Complex64::new(1.0, 0.0));
        let s = p("x1 + x2");
        assert_eq!(trace_poly(&(&s * &s), &f).unwrap(), Complex64::new(2.0, 0.0));
        assert!(trace_poly(&p("x3"), &f).is_err());
        let m = poly_moments(&p("x1x2 + x2x1"), &f, 4).unwrap();
        assert_eq!(m[2], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn delta_reduce_examples() {
        let f = SemicircularFamily::new(1);
        let one = NcPoly::one(1);
        assert_eq!(delta_reduce(&p("x1"), &one, 1, &f).unwrap(), one);
        assert_eq!(delta_reduce(&p("x1x1"), &one, 1, &f).unwrap(), p("x1"));
        assert!(delta_reduce(&p("x1"), &one, 2, &f).is_err());
    }

    #[test]
    fn schwinger_dyson_on_small_words() {
        let f = SemicircularFamily::new(2);
        for s in ["x1", "x1x2x2", "x2x1x1x2x1", "3", "x1x1x1"] {
            let q: NcPoly = NcPoly::parse_with_vars(s, 2).unwrap();
            for j in 1..=2 {
                let (l, r) = schwinger_dyson_sides(&q, j, &f).unwrap();
                assert_eq!(l, r, "{s} j={j}");
            }
        }
    }

    #[test]
    fn norms() {
        let f = SemicircularFamily::new(1);
        assert!((l2_norm(&p("x1"), &f).unwrap() - 1.0).abs() < 1e-15);
        let lower = op_norm_lower(&p("x1"), &f, 10).unwrap();
        assert!(lower < 2.0 && lower > 1.6);
        let (l, r) = trace_inequality(&p("x1x1x1"), &p("x1"), &p("x1x1"), 1, &f).unwrap();
        assert!(l <= r);
    }

    #[test]
    fn scalar_cauchy_examples() {
        let z = Complex64::new(0.0, 1.0);
        let g = scalar_cauchy(&Law::Semicircle.into(), z).unwrap();
        assert!((g - Complex64::new(0.0, (1.0 - libm::sqrt(5.0)) / 2.0)).norm() < 1e-15);
        let d = scalar_cauchy(&EmpiricalMeasure::dirac(0.0).into(), z).unwrap();
        assert!((d - 1.0 / z).norm() < 1e-15);
        assert!(scalar_cauchy(&Law::Semicircle.into(), Complex64::new(1.0, 0.0)).is_err());
    }
}

//! Explicit regularity constants, exponents and convergence rates.
//!
//! Exponents are exact rationals; constants with huge powers of two are
//! evaluated through their logarithms.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, CMatrix};

pub type Rational = Ratio<i64>;

/// Largest supported degree; `13·2^(d+3)` must fit in an `i64`.
pub const MAX_DEGREE: u32 = 50;

fn check_degree(d: u32) -> Result<()> {
    if d == 0 || d > MAX_DEGREE {
        return Err(invalid(format!("degree must lie in 1..={MAX_DEGREE}, got {d}")));
    }
    Ok(())
}

/// `2^(d+2) − 5`, the denominator shared by all degree-`d` exponents.
fn denom(d: u32) -> i64 {
    (1i64 << (d + 2)) - 5
}

/// `β = 2/(2^(d+2) − 5)`.
pub fn holder_exponent(d: u32) -> Result<Rational> {
    check_degree(d)?;
    Ok(Rational::new(2, denom(d)))
}

/// `α = 2^(d+2) − 4`, so that `β = 2/(α − 1)`.
pub fn alpha_exponent(d: u32) -> Result<i64> {
    check_degree(d)?;
    Ok((1i64 << (d + 2)) - 4)
}

/// `log C_d` with `C_d = (Π_{k<d} (d!/(d−k)!)^(2^(k−1)))^β`.
pub fn log_cd_constant(d: u32) -> Result<f64> {
    check_degree(d)?;
    let mut acc = 0.0;
    for k in 1..d {
        let falling: f64 = (d - k + 1..=d).map(|l| libm::log(l as f64)).sum();
        acc += libm::ldexp(falling, k as i32 - 1);
    }
    Ok(2.0 * acc / denom(d) as f64)
}

pub fn cd_constant(d: u32) -> Result<f64> {
    Ok(libm::exp(log_cd_constant(d)?))
}

/// `log d!`.
pub fn log_factorial(d: u32) -> f64 {
    (2..=d).map(|l| libm::log(l as f64)).sum()
}

/// Inputs of the Hölder constant: degree, radius `R`, free Fisher
/// information `Φ*`, `‖P‖_R`, leading weight `ρ_R(P)` and the number of
/// variables `n` (only used to decide whether the simplified bound applies).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HolderInputs {
    pub d: u32,
    pub r: f64,
    pub fisher: f64,
    pub norm_r: f64,
    pub leading_weight: f64,
    pub n: usize,
}

impl HolderInputs {
    /// Free semicirculars have `Φ* = n`.
    pub fn semicircular(d: u32, n: usize, r: f64, norm_r: f64, leading_weight: f64) -> Self {
        HolderInputs { d, r, fisher: n as f64, norm_r, leading_weight, n }
    }

    fn validate(&self) -> Result<()> {
        check_degree(self.d)?;
        for (name, v) in [("R", self.r), ("Φ*", self.fisher), ("‖P‖_R", self.norm_r)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(self.leading_weight > 0.0 && self.leading_weight <= 1.0) {
            return Err(invalid(format!("leading weight must lie in (0, 1], got {}", self.leading_weight)));
        }
        if self.n == 0 {
            return Err(invalid("n must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HolderConstant {
    pub value: f64,
    pub log_value: f64,
    /// `4 (d!)^(1/4) ρ^(−2/3) R^(2/3) Φ*^(1/3) ‖P‖_R^(−β)`.
    pub simplified: f64,
    /// Whether `R Φ*^(1/2) ≥ √n`, under which `value ≤ simplified` must hold.
    pub simplified_applies: bool,
}

/// `C = C_d ρ^(−2^d β/2) (8 R Φ*^(1/2))^((2^d − 1) β) ‖P‖_R^(−β)`.
pub fn holder_constant(inp: &HolderInputs) -> Result<HolderConstant> {
    inp.validate()?;
    let d = inp.d;
    let den = denom(d) as f64;
    let two_d = libm::ldexp(1.0, d as i32);
    let log_norm = libm::log(inp.norm_r);
    let log_rho = libm::log(inp.leading_weight);
    let log_base = libm::log(8.0 * inp.r * libm::sqrt(inp.fisher));
    let log_value = log_cd_constant(d)? - two_d / den * log_rho + 2.0 * (two_d - 1.0) / den * log_base
        - 2.0 / den * log_norm;
    let log_simplified = libm::log(4.0) + 0.25 * log_factorial(d) - 2.0 / 3.0 * log_rho
        + 2.0 / 3.0 * libm::log(inp.r)
        + libm::log(inp.fisher) / 3.0
        - 2.0 / den * log_norm;
    let simplified_applies = inp.r * libm::sqrt(inp.fisher) >= libm::sqrt(inp.n as f64);
    if simplified_applies && log_value > log_simplified + 1e-12 {
        return Err(Error::Oracle(format!(
            "Hölder constant {} exceeds its simplified bound {}",
            libm::exp(log_value),
            libm::exp(log_simplified)
        )));
    }
    Ok(HolderConstant {
        value: libm::exp(log_value),
        log_value,
        simplified: libm::exp(log_simplified),
        simplified_applies,
    })
}

/// `I(μ) ≤ 2C/β = (2^(d+2) − 5) C`.
pub fn energy_bound(inp: &HolderInputs) -> Result<f64> {
    let c = holder_constant(inp)?.value;
    Ok(c * denom(inp.d) as f64)
}

fn check_beta(beta: Rational) -> Result<()> {
    if !(beta > Rational::from_integer(0) && beta <= Rational::from_integer(1)) {
        return Err(invalid(format!("β must lie in (0, 1], got {beta}")));
    }
    Ok(())
}

/// `β / (2 + k + (2 − β) l)`.
pub fn rate_exponent(beta: Rational, k: u32, l: u32) -> Result<Rational> {
    check_beta(beta)?;
    let two = Rational::from_integer(2);
    Ok(beta / (two + Rational::from_integer(k as i64) + (two - beta) * Rational::from_integer(l as i64)))
}

/// `β / (k + β)`.
pub fn rate_exponent_compact(beta: Rational, k: u32) -> Result<Rational> {
    check_beta(beta)?;
    Ok(beta / (Rational::from_integer(k as i64) + beta))
}

/// `1 / (13·2^(d+3) − 138)`.
pub fn pgue_rate(d: u32) -> Result<Rational> {
    check_degree(d)?;
    Ok(Rational::new(1, 13 * (1i64 << (d + 3)) - 138))
}

/// Master inequality for `‖E G_{X_N}(b) − G_S(b)‖` with
/// `X_N = a_0 ⊗ 1 + Σ a_j ⊗ X_j^(N)`:
/// `4C/N² (K + ‖b‖)² ‖Im(b)^(−1)‖^7` where `C = d³ ‖Σ a_j²‖²` and
/// `K = ‖a_0‖ + 4 Σ ‖a_j‖`.
pub fn ht_master_bound(a0: &CMatrix, a: &[CMatrix], b: &CMatrix, big_n: usize) -> Result<f64> {
    let d = a0.nrows();
    if big_n == 0 {
        return Err(invalid("N must be positive"));
    }
    if b.nrows() != d || b.ncols() != d || a.iter().any(|m| m.nrows() != d || m.ncols() != d) {
        return Err(Error::DimensionMismatch(format!("expected {d}×{d} matrices")));
    }
    let im_b = linalg::im_part(b);
    let eig = linalg::eigvalsh(&im_b);
    if !(eig[0] > 0.0) {
        return Err(invalid("Im(b) must be positive definite"));
    }
    let inv_norm = 1.0 / eig[0];
    let mut sq = CMatrix::zeros(d, d);
    for aj in a {
        sq += aj * aj;
    }
    let c = libm::pow(d as f64, 3.0) * libm::pow(linalg::op_norm(&sq), 2.0);
    let k = linalg::op_norm(a0) + 4.0 * a.iter().map(linalg::op_norm).sum::<f64>();
    let nn = big_n as f64;
    Ok(4.0 * c / (nn * nn) * libm::pow(k + linalg::op_norm(b), 2.0) * libm::pow(inv_norm, 7.0))
}

/// [`ht_master_bound`] at `b = z·1`.
pub fn ht_scalar_bound(a0: &CMatrix, a: &[CMatrix], z: Complex64, big_n: usize) -> Result<f64> {
    let d = a0.nrows();
    ht_master_bound(a0, a, &(CMatrix::identity(d, d) * z), big_n)
}

/// A named evaluation with its inputs echoed back.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundReport {
    pub name: String,
    pub inputs: Vec<(String, f64)>,
    pub value: f64,
    /// Exact value for rational quantities, as `p/q`.
    pub exact: Option<String>,
    pub formula: String,
}

/// Parameters for [`evaluate`]; fields not used by a formula are ignored.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundQuery {
    pub holder: HolderInputs,
    /// `β` for the rate formulas; defaults to the Hölder exponent of `d`.
    pub beta: Option<(i64, i64)>,
    pub k: u32,
    pub l: u32,
    /// Scalar master-inequality inputs: `a_0`, `a_1..a_n` and `z`.
    pub ht_a0: f64,
    pub ht_a: Vec<f64>,
    pub ht_z: (f64, f64),
    pub ht_n: usize,
}

impl Default for BoundQuery {
    fn default() -> Self {
        BoundQuery {
            holder: HolderInputs::semicircular(1, 1, 2.0, 2.0, 1.0),
            beta: None,
            k: 7,
            l: 2,
            ht_a0: 0.0,
            ht_a: vec![1.0],
            ht_z: (0.0, 2.0),
            ht_n: 10,
        }
    }
}

/// Every name accepted by [`evaluate`].
pub const BOUND_NAMES: [&str; 10] = [
    "holder_exponent",
    "alpha_exponent",
    "cd_constant",
    "holder_constant",
    "holder_constant_simplified",
    "energy_bound",
    "rate_exponent",
    "rate_exponent_compact",
    "pgue_rate",
    "ht_master_bound",
];

fn rational_report(name: &str, inputs: Vec<(String, f64)>, r: Rational, formula: &str) -> BoundReport {
    BoundReport {
        name: name.into(),
        inputs,
        value: *r.numer() as f64 / *r.denom() as f64,
        exact: Some(format!("{}/{}", r.numer(), r.denom())),
        formula: formula.into(),
    }
}

/// Evaluates the formula called `name` on `q`.
pub fn evaluate(name: &str, q: &BoundQuery) -> Result<BoundReport> {
    let h = &q.holder;
    let d_in = || vec![(String::from("d"), h.d as f64)];
    let holder_in = || {
        vec![
            (String::from("d"), h.d as f64),
            (String::from("R"), h.r),
            (String::from("fisher"), h.fisher),
            (String::from("norm_R"), h.norm_r),
            (String::from("leading_weight"), h.leading_weight),
            (String::from("n"), h.n as f64),
        ]
    };
    let beta = || -> Result<Rational> {
        match q.beta {
            Some((p, r)) if r != 0 => Ok(Rational::new(p, r)),
            Some(_) => Err(invalid("β has a zero denominator")),
            None => holder_exponent(h.d),
        }
    };
    let rate_in = |b: Rational, with_l: bool| {
        let mut v = vec![
            (String::from("beta"), *b.numer() as f64 / *b.denom() as f64),
            (String::from("k"), q.k as f64),
        ];
        if with_l {
            v.push((String::from("l"), q.l as f64));
        }
        v
    };
    Ok(match name {
        "holder_exponent" => rational_report(name, d_in(), holder_exponent(h.d)?, "2/(2^(d+2)-5)"),
        "alpha_exponent" => {
            rational_report(name, d_in(), Rational::from_integer(alpha_exponent(h.d)?), "2^(d+2)-4")
        }
        "cd_constant" => BoundReport {
            name: name.into(),
            inputs: d_in(),
            value: cd_constant(h.d)?,
            exact: None,
            formula: "(prod_{k<d} (d!/(d-k)!)^(2^(k-1)))^(2/(2^(d+2)-5))".into(),
        },
        "holder_constant" => BoundReport {
            name: name.into(),
            inputs: holder_in(),
            value: holder_constant(h)?.value,
            exact: None,
            formula: "C_d rho^(-2^d/(2^(d+2)-5)) (8 R fisher^(1/2))^(2(2^d-1)/(2^(d+2)-5)) norm_R^(-2/(2^(d+2)-5))"
                .into(),
        },
        "holder_constant_simplified" => BoundReport {
            name: name.into(),
            inputs: holder_in(),
            value: holder_constant(h)?.simplified,
            exact: None,
            formula: "4 (d!)^(1/4) rho^(-2/3) R^(2/3) fisher^(1/3) norm_R^(-2/(2^(d+2)-5))".into(),
        },
        "energy_bound" => BoundReport {
            name: name.into(),
            inputs: holder_in(),
            value: energy_bound(h)?,
            exact: None,
            formula: "2 C / beta = (2^(d+2)-5) C".into(),
        },
        "rate_exponent" => {
            let b = beta()?;
            rational_report(name, rate_in(b, true), rate_exponent(b, q.k, q.l)?, "beta/(2+k+(2-beta) l)")
        }
        "rate_exponent_compact" => {
            let b = beta()?;
            rational_report(name, rate_in(b, false), rate_exponent_compact(b, q.k)?, "beta/(k+beta)")
        }
        "pgue_rate" => rational_report(name, d_in(), pgue_rate(h.d)?, "1/(13 2^(d+3)-138)"),
        "ht_master_bound" => {
            let scalar = |x: f64| CMatrix::from_element(1, 1, Complex64::new(x, 0.0));
            let a: Vec<CMatrix> = q.ht_a.iter().map(|&x| scalar(x)).collect();
            let z = Complex64::new(q.ht_z.0, q.ht_z.1);
            let mut inputs = vec![(String::from("a0"), q.ht_a0)];
            inputs.extend(q.ht_a.iter().enumerate().map(|(j, &x)| (format!("a{}", j + 1), x)));
            inputs.push((String::from("re_z"), z.re));
            inputs.push((String::from("im_z"), z.im));
            inputs.push((String::from("N"), q.ht_n as f64));
            BoundReport {
                name: name.into(),
                inputs,
                value: ht_scalar_bound(&scalar(q.ht_a0), &a, z, q.ht_n)?,
                exact: None,
                formula: "4 C/N^2 (K + |b|)^2 |Im(b)^(-1)|^7, C = d^3 |sum a_j^2|^2, K = |a0| + 4 sum |a_j|".into(),
            }
        }
        other => return Err(invalid(format!("unknown bound '{other}'"))),
    })
}

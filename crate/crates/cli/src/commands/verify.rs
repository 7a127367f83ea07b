//! Named inequality suites. Each check compares a left-hand side with a
//! right-hand side; `rhs_scale` multiplies every right-hand side, so a scale
//! below one must make tight suites fail.

use freeholder_core::bounds::{cd_constant, log_factorial};
use freeholder_core::freecalc::{schwinger_dyson_sides, trace_inequality, SemicircularFamily};
use freeholder_core::linalg::{self, CMatrix};
use freeholder_core::linearize::{approximation_bound, build_representation, MatrixSampleOracle};
use freeholder_core::measures::{bai_bound, kolmogorov, tail_integral, tail_integral_bound, BaiConfig, Law, Measure};
use freeholder_core::ncpoly::{NcPoly, Word};
use freeholder_core::randmat::{default_tail_grid, sample_gue, tail_decay_check, BlockModel, GueSpec};
use freeholder_core::Complex64;
use serde::Serialize;
use serde_json::json;

use super::Outcome;
use crate::config::Config;
use crate::error::CliError;
use crate::output::write_json;

pub const SUITES: [&str; 8] = [
    "derivative_norm",
    "trace_inequality",
    "schwinger_dyson",
    "cd_constant_range",
    "tail_integral",
    "smoothing_inequality",
    "linearization_error",
    "edge_tail",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Inequality,
    /// Exact identity: the left side is `|lhs − rhs|` and must vanish.
    Identity,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub kind: Kind,
    pub checks: usize,
    /// Smallest `scale·rhs − lhs` over the suite.
    pub margin: f64,
    pub worst_lhs: f64,
    pub worst_rhs: f64,
    pub failures: usize,
    pub passed: bool,
}

/// Relative slack for rounding in inequalities that can hold with equality.
const ROUNDING: f64 = 1e-12;

fn summarize(name: &str, kind: Kind, pairs: &[(f64, f64)], scale: f64) -> SuiteResult {
    let mut r = SuiteResult {
        name: name.into(),
        kind,
        checks: pairs.len(),
        margin: f64::INFINITY,
        worst_lhs: f64::NAN,
        worst_rhs: f64::NAN,
        failures: 0,
        passed: true,
    };
    for &(lhs, rhs) in pairs {
        let rhs = match kind {
            Kind::Inequality => rhs * scale,
            Kind::Identity => 0.0,
        };
        let m = rhs - lhs;
        let ok = match kind {
            Kind::Inequality => lhs <= rhs + ROUNDING * rhs.abs().max(lhs.abs()) + 1e-300,
            Kind::Identity => lhs == 0.0,
        };
        if !ok {
            r.failures += 1;
        }
        if m < r.margin {
            r.margin = m;
            r.worst_lhs = lhs;
            r.worst_rhs = rhs;
        }
    }
    r.passed = r.failures == 0;
    r
}

fn poly(s: &str, n: usize) -> NcPoly {
    NcPoly::parse_with_vars(s, n).expect("built-in polynomial")
}

fn derivative_norm() -> Result<Vec<(f64, f64)>, CliError> {
    let polys = [
        poly("x1", 1),
        poly("x1x2 - 2*x2x1x1", 2),
        poly("(1+1i)*x1x1x1 + x2 - 3", 2),
        poly("x1x2x3x1 + 0.5*x3x3 - 2i*x2", 3),
        poly("x1x1x1x1x1", 1),
    ];
    let mut out = Vec::new();
    for p in &polys {
        let d = p.degree().unwrap_or(0) as f64;
        for r in [0.5, 1.0, 2.0, 4.0] {
            for j in 1..=p.n() {
                let lhs = p.nc_derivative(j)?.projective_norm_r(r)?;
                out.push((lhs, d / r * p.norm_r(r)?));
            }
        }
    }
    Ok(out)
}

fn monomials(n: u32, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::unit()];
    let mut layer = vec![Vec::<u32>::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (1..=n).map(move |j| {
                    let mut v = w.clone();
                    v.push(j);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned().map(Word::new));
    }
    out
}

fn trace_inequality_checks() -> Result<Vec<(f64, f64)>, CliError> {
    let fam = SemicircularFamily::new(2);
    let polys = [poly("x1x1x1", 2), poly("x1x2 + x2x1", 2), poly("x1x2x2 - 2*x2 + 1", 2), poly("(2-1i)*x2x1x2 + x1x1", 2)];
    let words: Vec<NcPoly> =
        monomials(2, 2).into_iter().map(|w| NcPoly::monomial(2, w, Complex64::new(1.0, 0.0))).collect();
    let mut out = Vec::new();
    for p in &polys {
        for i in 1..=2 {
            for u in &words {
                for v in &words {
                    out.push(trace_inequality(p, u, v, i, &fam)?);
                }
            }
        }
    }
    Ok(out)
}

fn schwinger_dyson() -> Result<Vec<(f64, f64)>, CliError> {
    let fam = SemicircularFamily::new(2);
    let mut out = Vec::new();
    for w in monomials(2, 6) {
        let p = NcPoly::monomial(2, w, Complex64::new(1.0, 0.0));
        for j in 1..=2 {
            let (l, r) = schwinger_dyson_sides(&p, j, &fam)?;
            out.push(((l - r).norm(), 0.0));
        }
    }
    Ok(out)
}

fn cd_constant_range() -> Result<Vec<(f64, f64)>, CliError> {
    let mut out = Vec::new();
    for d in 1..=12 {
        let c = cd_constant(d)?;
        let lf = log_factorial(d);
        out.push(((lf / 8.0).exp(), c));
        out.push((c, (lf / 4.0).exp()));
    }
    Ok(out)
}

fn law_pair() -> (Measure, Measure) {
    (Law::Semicircle.into(), Law::FreePoisson.into())
}

fn tail_integral_checks() -> Result<Vec<(f64, f64)>, CliError> {
    let (mu, nu) = law_pair();
    let mut out = Vec::new();
    for y in [0.1, 0.3, 1.0] {
        for big_a in [25.0, 40.0, 60.0] {
            out.push((tail_integral(&mu, &nu, y, big_a)?, tail_integral_bound(&mu, &nu, y, big_a)?));
        }
    }
    Ok(out)
}

fn smoothing_checks() -> Result<Vec<(f64, f64)>, CliError> {
    let (mu, nu) = law_pair();
    let dist = kolmogorov(&mu, &nu);
    let mut out = Vec::new();
    for y in [0.1, 0.3, 1.0] {
        for big_a in [25.0, 40.0, 60.0] {
            let cfg = BaiConfig::new(2.0, big_a, 4.5, y)?;
            out.push((dist, bai_bound(&mu, &nu, &cfg)?.bound));
        }
    }
    Ok(out)
}

fn linearization_error(seed: u64) -> Result<Vec<(f64, f64)>, CliError> {
    let p = poly("x1x2 + x2x1", 2);
    let rep = build_representation(&p)?;
    let size = 40;
    let id = CMatrix::identity(size, size);
    let mut out = Vec::new();
    for r in 0..4 {
        let x = sample_gue(&GueSpec::new(size, 2, seed)?, r);
        let samples = [x.clone()];
        // The bound is linear in ε/Im(z)²; evaluate the sum once.
        let total = approximation_bound(&rep, Complex64::new(0.0, 1.0), 0.5, &MatrixSampleOracle { samples: &samples })?;
        let px = p.evaluate(&x)?;
        for im in [0.5, 1.0, 2.0] {
            for re in [-2.0, 0.0, 2.0] {
                let z = Complex64::new(re, im);
                let exact = linalg::normalized_trace(&linalg::inverse(&(&id * z - &px))?);
                for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
                    let k = rep.compressed_resolvent(&x, eps)?;
                    let rec = linalg::normalized_trace(&linalg::inverse(&(&id * z - k))?);
                    out.push(((exact - rec).norm(), 2.0 * eps / (im * im) * total));
                }
            }
        }
    }
    Ok(out)
}

fn edge_tail(seed: u64) -> Result<Vec<(f64, f64)>, CliError> {
    let rep = tail_decay_check(&BlockModel::gue(), 100, 200, seed, &default_tail_grid())?;
    Ok(rep
        .upper
        .iter()
        .zip(&rep.lower)
        .zip(&rep.bound)
        .map(|((u, l), b)| (u.max(*l), *b))
        .collect())
}

pub fn run_suite(name: &str, c: &Config) -> Result<SuiteResult, CliError> {
    let (kind, pairs) = match name {
        "derivative_norm" => (Kind::Inequality, derivative_norm()?),
        "trace_inequality" => (Kind::Inequality, trace_inequality_checks()?),
        "schwinger_dyson" => (Kind::Identity, schwinger_dyson()?),
        "cd_constant_range" => (Kind::Inequality, cd_constant_range()?),
        "tail_integral" => (Kind::Inequality, tail_integral_checks()?),
        "smoothing_inequality" => (Kind::Inequality, smoothing_checks()?),
        "linearization_error" => (Kind::Inequality, linearization_error(c.seed)?),
        "edge_tail" => (Kind::Inequality, edge_tail(c.seed)?),
        other => {
            return Err(CliError::Config(format!("suite: unknown suite '{other}'; known: {}", SUITES.join(", "))))
        }
    };
    Ok(summarize(name, kind, &pairs, c.rhs_scale))
}

pub fn cmd_verify(c: &Config) -> Result<Outcome, CliError> {
    let names: Vec<&str> = if c.suite.is_empty() { SUITES.to_vec() } else { c.suite.iter().map(String::as_str).collect() };
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(n)) {
        return Err(CliError::Config(format!("suite: unknown suite '{bad}'; known: {}", SUITES.join(", "))));
    }
    let results = names.iter().map(|n| run_suite(n, c)).collect::<Result<Vec<_>, _>>()?;
    let passed = results.iter().all(|r| r.passed);
    let report = json!({
        "command": "verify",
        "rhs_scale": c.rhs_scale,
        "passed": passed,
        "suites": results,
        "config_sha256": c.hash(),
    });
    let files = vec![write_json(&c.out_dir, "verify.json", &report)?];
    Ok(Outcome { passed, report, files })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_tracks_the_worst_check() {
        let r = summarize("t", Kind::Inequality, &[(1.0, 2.0), (1.0, 1.5)], 1.0);
        assert!(r.passed && r.margin == 0.5 && r.worst_rhs == 1.5);
        let r = summarize("t", Kind::Inequality, &[(1.0, 2.0), (1.0, 1.5)], 0.5);
        assert_eq!(r.failures, 1);
        let r = summarize("t", Kind::Identity, &[(0.0, 0.0)], 0.5);
        assert!(r.passed);
    }
}

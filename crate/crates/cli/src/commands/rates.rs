use freeholder_core::bounds::{holder_exponent, pgue_rate, rate_exponent, Rational};
use freeholder_core::freecalc::{spectral_distribution, PipelineOptions};
use freeholder_core::measures::{kolmogorov, rate_fit, Law, Measure};
use freeholder_core::ncpoly::NcPoly;
use freeholder_core::randmat::{mean_eed, Model};
use serde_json::json;

use super::Outcome;
use crate::config::Config;
use crate::error::CliError;
use crate::output::{num, write_csv, write_json};

/// Closed-form law when one is known, otherwise the pipeline's table.
pub fn reference_measure(p: &NcPoly, c: &Config) -> Result<Measure, CliError> {
    let x1: NcPoly = "x1".parse().expect("literal");
    let x1sq: NcPoly = "x1x1".parse().expect("literal");
    if *p == x1 {
        return Ok(Law::Semicircle.into());
    }
    if *p == x1sq {
        return Ok(Law::FreePoisson.into());
    }
    let opts = PipelineOptions { richardson: true, ..super::pipeline_options(c) };
    Ok(spectral_distribution(p, &opts)?.measure())
}

fn frac(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Kolmogorov distance between mean spectra and the limit law along the
/// size ladder, with a log-log rate fit.
pub fn cmd_rates(c: &Config) -> Result<Outcome, CliError> {
    if c.ladder.len() < 3 {
        return Err(CliError::Config(format!("ladder: need at least 3 sizes, got {}", c.ladder.len())));
    }
    let mut sorted = c.ladder.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != c.ladder.len() {
        return Err(CliError::Config("ladder: sizes must be distinct".into()));
    }
    let p = c.polynomial()?;
    let d = p.degree().unwrap_or(0) as u32;
    let reference = reference_measure(&p, c)?;
    let model = Model::Poly(p.clone());
    let hash = c.hash();
    let mut dists = Vec::with_capacity(c.ladder.len());
    for &n in &c.ladder {
        let mu = mean_eed(&model, n, c.replicates, c.seed)?;
        dists.push(kolmogorov(&mu.into(), &reference));
    }
    let ns: Vec<f64> = c.ladder.iter().map(|&n| n as f64).collect();
    let fit = rate_fit(&ns, &dists)?;
    let rows: Vec<Vec<String>> = c
        .ladder
        .iter()
        .zip(&dists)
        .map(|(n, k)| vec![n.to_string(), c.replicates.to_string(), num(*k)])
        .collect();
    let mut files = vec![write_csv(&c.out_dir, "rates.csv", &hash, &["N", "replicates", "kolmogorov"], &rows)?];
    // Guaranteed exponents: ε_N = N^{-2} on the block-model rate β/(2+k+(2−β)l)
    // with β = 2/3, k = 7, l = 2, and the polynomial-model rate for degree d.
    let block = rate_exponent(Rational::new(2, 3), 7, 2)? * 2;
    let report = json!({
        "command": "rates",
        "poly": p.to_string(),
        "ladder": c.ladder,
        "replicates": c.replicates,
        "seed": c.seed,
        "kolmogorov": dists,
        "fit": { "slope": fit.slope, "intercept": fit.intercept, "r2": fit.r2 },
        "guaranteed_block_exponent": frac(block),
        "guaranteed_poly_exponent": if d >= 1 { json!(frac(pgue_rate(d)?)) } else { json!(null) },
        "holder_exponent": if d >= 1 { json!(frac(holder_exponent(d)?)) } else { json!(null) },
        "config_sha256": hash,
    });
    files.push(write_json(&c.out_dir, "rates.json", &report)?);
    Ok(Outcome { passed: true, report, files })
}

use freeholder_core::freecalc::{spectral_distribution, PipelineOptions};
use freeholder_core::measures::kolmogorov;
use freeholder_core::randmat::{pool, sample_spectra, Model};
use serde_json::json;

use super::Outcome;
use crate::config::Config;
use crate::error::CliError;
use crate::output::{num, write_csv, write_json};

pub fn pipeline_options(c: &Config) -> PipelineOptions {
    PipelineOptions {
        eps: c.eps,
        pencil_eps: c.pencil_eps,
        step: c.step,
        span: c.span.map(|[lo, hi]| (lo, hi)),
        richardson: c.richardson,
        ..PipelineOptions::default()
    }
}

/// Limiting density and distribution function of `p(S)`; with `simulate`,
/// also the spectra of the matching matrix model.
pub fn cmd_spectrum(c: &Config) -> Result<Outcome, CliError> {
    let p = c.polynomial()?;
    let hash = c.hash();
    let sd = spectral_distribution(&p, &pipeline_options(c))?;
    let t = &sd.table;
    let rows: Vec<Vec<String>> = t
        .grid
        .iter()
        .zip(&t.density)
        .zip(t.cdf.values())
        .map(|((x, d), f)| vec![num(*x), num(*d), num(*f)])
        .collect();
    let mut files = vec![write_csv(&c.out_dir, "spectrum.csv", &hash, &["x", "density", "cdf"], &rows)?];
    let mut report = json!({
        "command": "spectrum",
        "poly": p.to_string(),
        "pencil_size": sd.pencil_size,
        "grid_points": t.grid.len(),
        "raw_mass": t.raw_mass,
        "max_residual": sd.max_residual,
        "config_sha256": hash,
    });
    if c.simulate {
        let spectra = sample_spectra(&Model::Poly(p.clone()), c.size, c.replicates, c.seed)?;
        let rows: Vec<Vec<String>> = spectra
            .iter()
            .flat_map(|s| s.eigenvalues.iter().enumerate().map(move |(i, e)| vec![s.replicate.to_string(), i.to_string(), num(*e)]))
            .collect();
        files.push(write_csv(&c.out_dir, "simulation.csv", &hash, &["replicate", "index", "eigenvalue"], &rows)?);
        let dist = kolmogorov(&pool(&spectra)?.into(), &sd.measure());
        let manifest = json!({
            "model": p.to_string(),
            "N": c.size,
            "replicates": c.replicates,
            "seed": c.seed,
            "config_sha256": hash,
        });
        files.push(write_json(&c.out_dir, "manifest.json", &manifest)?);
        report["simulation_kolmogorov"] = json!(dist);
    }
    Ok(Outcome { passed: true, report, files })
}

use freeholder_core::bounds::energy_bound;
use freeholder_core::freecalc::spectral_distribution;
use freeholder_core::measures::{entropy_from_energy, holder_estimate, jam_bound, log_energy};
use serde_json::json;

use super::{bounds::query, Outcome};
use crate::config::Config;
use crate::error::CliError;
use crate::output::write_json;

/// Logarithmic energy and entropy of the computed law of `p(S)`, checked
/// against `2C/β` for the fitted Hölder pair and for the explicit constant.
pub fn cmd_energy(c: &Config) -> Result<Outcome, CliError> {
    let p = c.polynomial()?;
    let sd = spectral_distribution(&p, &super::pipeline_options(c))?;
    let mu = sd.measure();
    let energy = log_energy(&mu, None)?;
    let holder = holder_estimate(&mu, None)?;
    let fitted = jam_bound(holder.constant_estimate, holder.exponent_estimate)?;
    let explicit = energy_bound(&query(c)?.holder)?;
    let passed = energy <= fitted && energy <= explicit;
    let report = json!({
        "command": "energy",
        "poly": p.to_string(),
        "log_energy": energy,
        "entropy": entropy_from_energy(energy),
        "holder_exponent": holder.exponent_estimate,
        "holder_constant": holder.constant_estimate,
        "fitted_energy_bound": fitted,
        "explicit_energy_bound": explicit,
        "passed": passed,
        "config_sha256": c.hash(),
    });
    let files = vec![write_json(&c.out_dir, "energy.json", &report)?];
    Ok(Outcome { passed, report, files })
}

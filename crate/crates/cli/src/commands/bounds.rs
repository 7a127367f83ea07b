use freeholder_core::bounds::{evaluate, BoundQuery, HolderInputs, BOUND_NAMES};
use serde_json::json;

use super::Outcome;
use crate::config::Config;
use crate::error::CliError;
use crate::output::write_json;

/// Query built from the configured polynomial: degree, variable count,
/// `‖p‖_R` and leading weight come from `p`; `Φ*` defaults to `n`.
pub fn query(c: &Config) -> Result<BoundQuery, CliError> {
    let p = c.polynomial()?;
    let b = &c.bounds;
    let d = p.degree().unwrap_or(0) as u32;
    let holder = HolderInputs {
        d,
        r: b.radius,
        fisher: b.fisher.unwrap_or(p.n() as f64),
        norm_r: p.norm_r(b.radius)?,
        leading_weight: p.leading_weight(b.radius)?,
        n: p.n(),
    };
    Ok(BoundQuery {
        holder,
        beta: b.beta.map(|[x, y]| (x, y)),
        k: b.k,
        l: b.l,
        ht_a0: b.ht_a0,
        ht_a: b.ht_a.clone(),
        ht_z: (b.ht_z[0], b.ht_z[1]),
        ht_n: b.ht_n,
    })
}

pub fn cmd_bounds(c: &Config) -> Result<Outcome, CliError> {
    let names: Vec<String> = if c.bounds.names.is_empty() {
        BOUND_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        c.bounds.names.clone()
    };
    if let Some(bad) = names.iter().find(|n| !BOUND_NAMES.contains(&n.as_str())) {
        return Err(CliError::Config(format!("bounds.names: unknown formula '{bad}'; known: {}", BOUND_NAMES.join(", "))));
    }
    let q = query(c)?;
    let reports = names.iter().map(|n| evaluate(n, &q)).collect::<Result<Vec<_>, _>>()?;
    let report = json!({ "command": "bounds", "poly": c.poly, "reports": reports, "config_sha256": c.hash() });
    let files = vec![write_json(&c.out_dir, "bounds.json", &report)?];
    Ok(Outcome { passed: true, report, files })
}

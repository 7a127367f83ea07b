//! Run configuration: one JSON document, overridable field by field from
//! the command line. Precedence is flag, then file, then default.

use std::path::{Path, PathBuf};

use clap::Args;
use freeholder_core::ncpoly::NcPoly;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Selfadjoint polynomial, e.g. `1*x1x2 + 1*x2x1`.
    pub poly: String,
    pub seed: u64,
    /// Matrix size for single-size simulations.
    pub size: usize,
    pub replicates: usize,
    /// Matrix sizes for rate experiments.
    pub ladder: Vec<usize>,
    /// Inversion distance from the real axis.
    pub eps: f64,
    pub pencil_eps: f64,
    pub richardson: bool,
    pub span: Option<[f64; 2]>,
    pub step: Option<f64>,
    /// Also simulate the matrix model in `spectrum`.
    pub simulate: bool,
    pub out_dir: PathBuf,
    /// Verification suites to run; empty means all.
    pub suite: Vec<String>,
    /// Multiplies every right-hand side in `verify`.
    pub rhs_scale: f64,
    pub bounds: BoundsConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsConfig {
    /// Formulas to evaluate; empty means all.
    pub names: Vec<String>,
    pub radius: f64,
    /// Free Fisher information; defaults to the number of variables.
    pub fisher: Option<f64>,
    pub k: u32,
    pub l: u32,
    pub beta: Option<[i64; 2]>,
    pub ht_a0: f64,
    pub ht_a: Vec<f64>,
    pub ht_z: [f64; 2],
    pub ht_n: usize,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            names: Vec::new(),
            radius: 2.0,
            fisher: None,
            k: 7,
            l: 2,
            beta: None,
            ht_a0: 0.0,
            ht_a: vec![1.0],
            ht_z: [0.0, 2.0],
            ht_n: 10,
        }
    }
}

impl Default for Config {
    fn default() -> Self {
        Config {
            poly: "1*x1".into(),
            seed: 1,
            size: 100,
            replicates: 20,
            ladder: vec![50, 100, 200, 400, 800],
            eps: 1e-3,
            pencil_eps: 1e-12,
            richardson: false,
            span: None,
            step: None,
            simulate: false,
            out_dir: PathBuf::from("out"),
            suite: Vec::new(),
            rhs_scale: 1.0,
            bounds: BoundsConfig::default(),
        }
    }
}

/// Command-line overrides shared by all subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Comma-separated matrix sizes.
    #[arg(long, value_delimiter = ',')]
    pub ladder: Option<Vec<usize>>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub richardson: Option<bool>,
    #[arg(long)]
    pub simulate: Option<bool>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Comma-separated suite names for `verify`.
    #[arg(long, value_delimiter = ',')]
    pub suite: Option<Vec<String>>,
    #[arg(long)]
    pub rhs_scale: Option<f64>,
    /// Comma-separated formula names for `bounds`.
    #[arg(long, value_delimiter = ',')]
    pub name: Option<Vec<String>>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Default, then the file named by `--config`, then individual flags.
    pub fn resolve(o: &Overrides) -> Result<Self, CliError> {
        let mut c = match &o.config {
            Some(p) => Self::load(p)?,
            None => Config::default(),
        };
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = &o.$f { c.$f = v.clone(); } )* };
        }
        take!(poly, seed, size, replicates, ladder, eps, richardson, simulate, out_dir, suite, rhs_scale);
        if let Some(names) = &o.name {
            c.bounds.names = names.clone();
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &str, why: &str| Err(CliError::Config(format!("{field}: {why}")));
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad("eps", "must be positive");
        }
        if !(self.pencil_eps > 0.0 && self.pencil_eps.is_finite()) {
            return bad("pencil_eps", "must be positive");
        }
        if self.size == 0 {
            return bad("size", "must be at least 1");
        }
        if self.replicates == 0 {
            return bad("replicates", "must be at least 1");
        }
        if self.ladder.contains(&0) {
            return bad("ladder", "sizes must be at least 1");
        }
        if let Some([lo, hi]) = self.span {
            if !(hi > lo) {
                return bad("span", "needs lo < hi");
            }
        }
        if matches!(self.step, Some(s) if !(s > 0.0)) {
            return bad("step", "must be positive");
        }
        if !(self.rhs_scale > 0.0 && self.rhs_scale.is_finite()) {
            return bad("rhs_scale", "must be positive");
        }
        self.polynomial()?;
        Ok(())
    }

    pub fn polynomial(&self) -> Result<NcPoly, CliError> {
        self.poly.parse().map_err(|e| CliError::Config(format!("poly: {e}")))
    }

    /// SHA-256 of the canonical JSON form, ignoring the output directory.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out_dir = PathBuf::new();
        let text = serde_json::to_string(&c).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

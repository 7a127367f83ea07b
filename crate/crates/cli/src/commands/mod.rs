pub mod bounds;
mod energy;
mod rates;
mod spectrum;
pub mod verify;

use std::path::PathBuf;

use serde_json::Value;

pub use bounds::cmd_bounds;
pub use energy::cmd_energy;
pub use rates::{cmd_rates, reference_measure};
pub use spectrum::{cmd_spectrum, pipeline_options};
pub use verify::cmd_verify;

/// Result of a command that ran to completion.
#[derive(Debug, Clone)]
pub struct Outcome {
    /// `false` when a checked inequality failed (exit code 1).
    pub passed: bool,
    /// JSON summary printed on stdout.
    pub report: Value,
    pub files: Vec<PathBuf>,
}

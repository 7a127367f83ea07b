use alloc::vec::Vec;

use num_complex::Complex64;

use super::{stieltjes_invert, CauchySolver, StieltjesTable};
use crate::error::{invalid, Error, Result};
use crate::linalg::CMatrix;
use crate::linearize::{build_representation, lambda_eps, linearization, schur_recover};
use crate::measures::Measure;
use crate::ncpoly::NcPoly;

/// Settings for [`spectral_distribution`].
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOptions {
    /// Distance from the real axis for the scalar inversion.
    pub eps: f64,
    /// Regularization `ε` on the pencil block of `Λ_ε(z)`.
    pub pencil_eps: f64,
    /// Grid spacing; defaults to `eps`.
    pub step: Option<f64>,
    /// Grid span; defaults to `±‖p‖_R` with `R = 2`, which contains the spectrum.
    pub span: Option<(f64, f64)>,
    pub richardson: bool,
    pub tol: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { eps: 1e-3, pencil_eps: 1e-12, step: None, span: None, richardson: false, tol: 1e-12 }
    }
}

/// Law of `p(S_1, …, S_n)` recovered on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDistribution {
    pub table: StieltjesTable,
    /// Size `d + 1` of the linearization.
    pub pencil_size: usize,
    pub max_residual: f64,
    pub iterations: usize,
}

impl SpectralDistribution {
    pub fn measure(&self) -> Measure {
        self.table.cdf.clone().into()
    }

    /// `∫ t^k dμ` of the tabulated law (piecewise-uniform cells).
    pub fn moment(&self, k: u32) -> f64 {
        self.measure().moment(k)
    }
}

/// Distribution of a selfadjoint `p` evaluated in free semicirculars.
///
/// `p` is linearized, `G_{p̂}(Λ_ε(z))` is solved at each grid point with a
/// warm start from the previous point, and the `(1,1)` entry is inverted.
pub fn spectral_distribution(p: &NcPoly, opts: &PipelineOptions) -> Result<SpectralDistribution> {
    if !(opts.eps > 0.0) || !(opts.pencil_eps > 0.0) {
        return Err(invalid("pipeline needs positive ε values"));
    }
    let rep = build_representation(p)?;
    if !rep.is_selfadjoint() {
        return Err(Error::NotSelfadjoint);
    }
    let pencil = linearization(&rep);
    let op = pencil.quantum_operator()?;
    let mut solver = CauchySolver::new(&op);
    solver.tol = opts.tol;

    let (lo, hi) = match opts.span {
        Some(s) => s,
        None => {
            let r = p.norm_r(2.0)?;
            (-r, r)
        }
    };
    let step = opts.step.unwrap_or(opts.eps);
    if !(hi > lo) || !(step > 0.0) {
        return Err(Error::DegenerateGrid("empty pipeline grid".into()));
    }
    let cells = libm::ceil((hi - lo) / step) as usize;
    let grid: Vec<f64> = (0..=cells).map(|k| lo + (hi - lo) * k as f64 / cells as f64).collect();

    let d = rep.d();
    let mut warm: Option<CMatrix> = None;
    let mut max_residual: f64 = 0.0;
    let mut iterations = 0;
    let g = |z: Complex64| -> Result<Complex64> {
        let b = lambda_eps(z, opts.pencil_eps, d)?;
        let sol = match &warm {
            Some(g0) => solver.solve_from(&b, g0)?,
            None => solver.solve(&b)?,
        };
        max_residual = max_residual.max(sol.residual);
        iterations += sol.iterations;
        let value = schur_recover(&sol.g);
        warm = Some(sol.g);
        Ok(value)
    };
    let table = stieltjes_invert(g, &grid, opts.eps, opts.richardson)?;
    Ok(SpectralDistribution { table, pencil_size: d + 1, max_residual, iterations })
}

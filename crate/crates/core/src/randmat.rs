//! Deterministic GUE sampling, block and polynomial matrix models, spectra
//! and Monte Carlo averages.
//!
//! Every matrix is drawn from its own ChaCha8 stream keyed by
//! `(seed, replicate, matrix)`, so any replicate can be regenerated alone
//! and results do not depend on execution order.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, CMatrix};
use crate::measures::EmpiricalMeasure;
use crate::ncpoly::{MatrixTuple, NcPoly};

/// Hermiticity defect (relative Frobenius) tolerated before eigensolves.
pub const SPECTRUM_TOL: f64 = 1e-10;

/// `n` independent `N×N` GUE matrices with `E|X_kl|² = 1/N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GueSpec {
    pub size: usize,
    pub n: usize,
    pub seed: u64,
}

impl GueSpec {
    pub fn new(size: usize, n: usize, seed: u64) -> Result<Self> {
        if size == 0 || n == 0 {
            return Err(invalid("GUE needs N ≥ 1 and n ≥ 1"));
        }
        Ok(GueSpec { size, n, seed })
    }
}

fn stream(seed: u64, replicate: u64, matrix: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&replicate.to_le_bytes());
    key[16..24].copy_from_slice(&matrix.to_le_bytes());
    key[24..].copy_from_slice(b"GUE-v1\0\0");
    ChaCha8Rng::from_seed(key)
}

/// One GUE matrix: real diagonal `N(0, 1/N)`, off-diagonal real and
/// imaginary parts `N(0, 1/(2N))`, filled row by row above the diagonal.
pub fn gue_matrix(size: usize, seed: u64, replicate: u64, matrix: u64) -> CMatrix {
    let mut rng = stream(seed, replicate, matrix);
    let nn = size as f64;
    let sd_diag = libm::sqrt(1.0 / nn);
    let sd_off = libm::sqrt(0.5 / nn);
    let mut m = CMatrix::zeros(size, size);
    for i in 0..size {
        let x: f64 = rng.sample(StandardNormal);
        m[(i, i)] = Complex64::new(sd_diag * x, 0.0);
        for j in i + 1..size {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = Complex64::new(sd_off * re, sd_off * im);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

pub fn sample_gue(spec: &GueSpec, replicate: u64) -> MatrixTuple {
    let mats = (0..spec.n).map(|j| gue_matrix(spec.size, spec.seed, replicate, j as u64)).collect();
    MatrixTuple::hermitian(mats).expect("GUE matrices are Hermitian by construction")
}

/// `a_0 ⊗ 1 + Σ_j a_j ⊗ X_j` with Hermitian `d×d` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockModel {
    a0: CMatrix,
    a: Vec<CMatrix>,
}

impl BlockModel {
    pub fn new(a0: CMatrix, a: Vec<CMatrix>) -> Result<Self> {
        let d = a0.nrows();
        if d == 0 || a.is_empty() {
            return Err(invalid("block model needs d ≥ 1 and at least one coefficient"));
        }
        for m in core::iter::once(&a0).chain(&a) {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch(format!("expected {d}×{d} coefficients")));
            }
            let defect = linalg::hermitian_defect(m);
            if defect > SPECTRUM_TOL {
                return Err(Error::NotHermitian { defect });
            }
        }
        Ok(BlockModel { a0, a })
    }

    /// `d = 1`, `a_0 = 0`, `a_1 = 1`: a single GUE matrix.
    pub fn gue() -> Self {
        BlockModel { a0: CMatrix::zeros(1, 1), a: alloc::vec![CMatrix::identity(1, 1)] }
    }

    pub fn d(&self) -> usize {
        self.a0.nrows()
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a0(&self) -> &CMatrix {
        &self.a0
    }

    pub fn coefficients(&self) -> &[CMatrix] {
        &self.a
    }

    /// `a_0 = 0` and `Σ a_j² = 1`, the setting of the edge tail bound.
    pub fn is_standard(&self) -> bool {
        let d = self.d();
        let mut sq = CMatrix::zeros(d, d);
        for aj in &self.a {
            sq += aj * aj;
        }
        linalg::frobenius(&self.a0) <= 1e-12 && linalg::frobenius(&(sq - CMatrix::identity(d, d))) <= 1e-10
    }
}

pub fn block_matrix(model: &BlockModel, x: &MatrixTuple) -> Result<CMatrix> {
    if x.n() != model.n() {
        return Err(Error::DimensionMismatch(format!(
            "block model with {} coefficients applied to a {}-tuple",
            model.n(),
            x.n()
        )));
    }
    let nn = x.size();
    let mut out = model.a0.kronecker(&CMatrix::identity(nn, nn));
    for (aj, xj) in model.a.iter().zip(x.mats()) {
        out += aj.kronecker(xj);
    }
    Ok(linalg::hermitize(&out))
}

/// `p(X)`, symmetrized to remove rounding drift.
pub fn poly_model(p: &NcPoly, x: &MatrixTuple) -> Result<CMatrix> {
    let scale = p.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    if !p.is_selfadjoint(1e-12 * scale) {
        return Err(Error::NotSelfadjoint);
    }
    Ok(linalg::hermitize(&p.with_vars(x.n())?.evaluate(x)?))
}

/// Sorted real eigenvalues of one Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumSample {
    pub eigenvalues: Vec<f64>,
    pub replicate: u64,
}

impl SpectrumSample {
    pub fn empirical(&self) -> EmpiricalMeasure {
        EmpiricalMeasure::uniform(&self.eigenvalues).expect("finite spectrum")
    }
}

pub fn spectrum(m: &CMatrix, replicate: u64) -> Result<SpectrumSample> {
    let defect = linalg::hermitian_defect(m);
    if defect > SPECTRUM_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let eigenvalues = linalg::eigvalsh(&linalg::hermitize(m));
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(invalid("matrix has non-finite entries"));
    }
    Ok(SpectrumSample { eigenvalues, replicate })
}

/// A random matrix model driven by GUE matrices.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Block(BlockModel),
    Poly(NcPoly),
}

impl Model {
    pub fn n(&self) -> usize {
        match self {
            Model::Block(b) => b.n(),
            Model::Poly(p) => p.n(),
        }
    }

    /// Matrix of replicate `r` at size `N`.
    pub fn sample(&self, size: usize, seed: u64, replicate: u64) -> Result<CMatrix> {
        let x = sample_gue(&GueSpec::new(size, self.n(), seed)?, replicate);
        match self {
            Model::Block(b) => block_matrix(b, &x),
            Model::Poly(p) => poly_model(p, &x),
        }
    }

    pub fn replicate_spectrum(&self, size: usize, seed: u64, replicate: u64) -> Result<SpectrumSample> {
        spectrum(&self.sample(size, seed, replicate)?, replicate)
    }
}

/// Spectra of replicates `0..replicates`.
pub fn sample_spectra(model: &Model, size: usize, replicates: usize, seed: u64) -> Result<Vec<SpectrumSample>> {
    (0..replicates as u64).map(|r| model.replicate_spectrum(size, seed, r)).collect()
}

/// Pools spectra into one measure with equal weight per eigenvalue.
pub fn pool(spectra: &[SpectrumSample]) -> Result<EmpiricalMeasure> {
    let all: Vec<f64> = spectra.iter().flat_map(|s| s.eigenvalues.iter().copied()).collect();
    EmpiricalMeasure::uniform(&all)
}

/// Mean eigenvalue distribution over `replicates` independent draws.
pub fn mean_eed(model: &Model, size: usize, replicates: usize, seed: u64) -> Result<EmpiricalMeasure> {
    if replicates == 0 {
        return Err(invalid("mean_eed needs at least one replicate"));
    }
    pool(&sample_spectra(model, size, replicates, seed)?)
}

/// `q = u p u*` with `u` the unitary polar factor of `Y`; then `q` is a
/// projection with `tr q = tr p` and `‖Y* q‖_F = ‖Y p‖_F`.
pub fn transport_projection(y: &CMatrix, p: &CMatrix) -> Result<CMatrix> {
    let n = y.nrows();
    if !y.is_square() || p.nrows() != n || p.ncols() != n {
        return Err(Error::DimensionMismatch("Y and p must be square of equal size".into()));
    }
    let scale = linalg::frobenius(p).max(1.0);
    if linalg::frobenius(&(p * p - p)) > 1e-10 * scale || linalg::frobenius(&(p - p.adjoint())) > 1e-10 * scale {
        return Err(invalid("p must be an orthogonal projection"));
    }
    let svd = y.clone().svd(true, true);
    let smin = svd.singular_values.iter().fold(f64::INFINITY, |a, &s| a.min(s));
    if !(smin > 1e-10) {
        return Err(Error::Singular);
    }
    let (w, v_t) = match (svd.u, svd.v_t) {
        (Some(w), Some(v_t)) => (w, v_t),
        _ => return Err(Error::Singular),
    };
    let u = w * v_t;
    Ok(&u * p * u.adjoint())
}

/// Empirical tails of the mean spectrum beyond `±(2 + t)` next to the
/// bound `2N exp(−N t²/2)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TailReport {
    pub t: Vec<f64>,
    /// `1 − F(2 + t)`.
    pub upper: Vec<f64>,
    /// `F(−2 − t)`.
    pub lower: Vec<f64>,
    pub bound: Vec<f64>,
    pub violations: usize,
}

pub fn tail_bound(size: usize, t: f64) -> f64 {
    let nn = size as f64;
    2.0 * nn * libm::exp(-nn * t * t / 2.0)
}

/// `t = 0.1, 0.2, …, 1.0`.
pub fn default_tail_grid() -> Vec<f64> {
    (1..=10).map(|k| k as f64 / 10.0).collect()
}

pub fn tail_decay_check(model: &BlockModel, size: usize, replicates: usize, seed: u64, t_grid: &[f64]) -> Result<TailReport> {
    if !model.is_standard() {
        return Err(invalid("tail check needs a_0 = 0 and Σ a_j² = 1"));
    }
    let mu = mean_eed(&Model::Block(model.clone()), size, replicates, seed)?;
    let mut rep = TailReport { t: t_grid.to_vec(), upper: Vec::new(), lower: Vec::new(), bound: Vec::new(), violations: 0 };
    for &t in t_grid {
        let up = 1.0 - mu.cdf(2.0 + t);
        let lo = mu.cdf(-2.0 - t);
        let b = tail_bound(size, t);
        if up > b || lo > b {
            rep.violations += 1;
        }
        rep.upper.push(up);
        rep.lower.push(lo);
        rep.bound.push(b);
    }
    Ok(rep)
}

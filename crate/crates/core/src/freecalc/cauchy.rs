use alloc::format;
use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, CMatrix};

/// Relative Hermiticity tolerance for quantum operator coefficients.
const HERMITIAN_TOL: f64 = 1e-10;

/// `L(b) = Σ_j a_j b a_j` together with the constant term `a_0` of the
/// operator-valued semicircular element `a_0 ⊗ 1 + Σ_j a_j ⊗ S_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumOperator {
    a0: CMatrix,
    a: Vec<CMatrix>,
}

impl QuantumOperator {
    pub fn new(a0: CMatrix, a: Vec<CMatrix>) -> Result<Self> {
        let d = a0.nrows();
        if d == 0 {
            return Err(invalid("quantum operator needs d ≥ 1"));
        }
        for m in core::iter::once(&a0).chain(&a) {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch(format!("expected {d}×{d} coefficients")));
            }
            let defect = linalg::hermitian_defect(m);
            if defect > HERMITIAN_TOL {
                return Err(Error::NotHermitian { defect });
            }
        }
        Ok(QuantumOperator { a0, a })
    }

    pub fn d(&self) -> usize {
        self.a0.nrows()
    }

    pub fn a0(&self) -> &CMatrix {
        &self.a0
    }

    pub fn coefficients(&self) -> &[CMatrix] {
        &self.a
    }

    pub fn apply(&self, b: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.d(), self.d());
        for aj in &self.a {
            out += aj * b * aj;
        }
        out
    }
}

/// A converged solution of `G = ((b − a_0) − L(G))^{-1}` with `Im G ≺ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCauchy {
    pub b: CMatrix,
    pub g: CMatrix,
    /// `‖G − ((b − a_0) − L(G))^{-1}‖_F` at the returned iterate.
    pub residual: f64,
    pub iterations: usize,
}

/// Fixed-point solver for the operator-valued semicircular Cauchy transform.
///
/// Each step tries a Newton update and keeps it when it lowers the
/// residual; otherwise it falls back to the damped iteration
/// `G ← ½G + ½((b − a_0) − L(G))^{-1}`. When the direct solve fails, `b` is
/// approached along `b + i s 1` with `s` halving from `max(1, ‖b − a_0‖)`.
#[derive(Debug, Clone)]
pub struct CauchySolver<'a> {
    op: &'a QuantumOperator,
    /// Convergence threshold on the residual, relative to `max(1, ‖G‖_F)`.
    pub tol: f64,
    pub max_iter: usize,
}

/// Iterations allowed for a warm-started solve before falling back.
const WARM_BUDGET: usize = 60;
/// Smallest continuation shift before jumping to the target.
const MIN_SHIFT: f64 = 1e-15;

struct Attempt {
    g: CMatrix,
    residual: f64,
    iterations: usize,
    converged: bool,
}

impl<'a> CauchySolver<'a> {
    pub fn new(op: &'a QuantumOperator) -> Self {
        CauchySolver { op, tol: 1e-12, max_iter: 100_000 }
    }

    fn fixed_point_map(&self, bb: &CMatrix, g: &CMatrix) -> Result<CMatrix> {
        linalg::inverse(&(bb - self.op.apply(g)))
    }

    fn newton_step(&self, g: &CMatrix, h_inv: &CMatrix, f: &CMatrix) -> Option<CMatrix> {
        let d = g.nrows();
        let mut jac = CMatrix::identity(d * d, d * d);
        for aj in self.op.coefficients() {
            let left = (aj * h_inv).transpose();
            let right = h_inv * aj;
            jac -= left.kronecker(&right);
        }
        let rhs = -DVector::from_column_slice(f.as_slice());
        let e = jac.lu().solve(&rhs)?;
        if e.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return None;
        }
        Some(g + CMatrix::from_column_slice(d, d, e.as_slice()))
    }

    fn iterate(&self, bb: &CMatrix, mut g: CMatrix, budget: usize) -> Attempt {
        let mut residual = f64::INFINITY;
        for it in 0..budget {
            let h_inv = match self.fixed_point_map(bb, &g) {
                Ok(h) => h,
                Err(_) => return Attempt { g, residual, iterations: it, converged: false },
            };
            let f = &g - &h_inv;
            residual = linalg::frobenius(&f);
            if residual <= self.tol * linalg::frobenius(&g).max(1.0) {
                return Attempt { g, residual, iterations: it, converged: true };
            }
            let damped = (&g + &h_inv) * Complex64::new(0.5, 0.0);
            g = match self.newton_step(&g, &h_inv, &f) {
                Some(cand) => match self.fixed_point_map(bb, &cand) {
                    Ok(hc) if linalg::frobenius(&(&cand - &hc)) < residual => cand,
                    _ => damped,
                },
                None => damped,
            };
        }
        Attempt { g, residual, iterations: budget, converged: false }
    }

    fn in_lower_half_plane(g: &CMatrix) -> bool {
        let top = linalg::eigvalsh(&linalg::im_part(g)).last().copied().unwrap_or(0.0);
        top <= 1e-9 * linalg::frobenius(g).max(1.0)
    }

    fn check_b(&self, b: &CMatrix) -> Result<CMatrix> {
        let d = self.op.d();
        if b.nrows() != d || b.ncols() != d {
            return Err(Error::DimensionMismatch(format!("b must be {d}×{d}")));
        }
        let lowest = linalg::eigvalsh(&linalg::im_part(b))[0];
        if !(lowest > 0.0) {
            return Err(invalid(format!("Im(b) must be positive definite (smallest eigenvalue {lowest})")));
        }
        Ok(b - self.op.a0())
    }

    fn finish(&self, b: &CMatrix, a: Attempt, used: usize) -> MatrixCauchy {
        MatrixCauchy { b: b.clone(), g: a.g, residual: a.residual, iterations: used }
    }

    /// Solves from the standard starting point `(b − a_0 + i)^{-1}`.
    pub fn solve(&self, b: &CMatrix) -> Result<MatrixCauchy> {
        let bb = self.check_b(b)?;
        let d = self.op.d();
        let shift = |s: f64| &bb + CMatrix::identity(d, d) * Complex64::new(0.0, s);
        let g0 = linalg::inverse(&shift(1.0))?;
        let direct = self.iterate(&bb, g0.clone(), self.max_iter.min(2_000));
        if direct.converged && Self::in_lower_half_plane(&direct.g) {
            let used = direct.iterations;
            return Ok(self.finish(b, direct, used));
        }
        let mut used = direct.iterations;
        let mut s = linalg::frobenius(&bb).max(1.0);
        let mut g = g0;
        let mut last_residual = direct.residual;
        loop {
            let target = if s < MIN_SHIFT { bb.clone() } else { shift(s) };
            let budget = self.max_iter.saturating_sub(used);
            if budget == 0 {
                return Err(Error::NoConvergence { iterations: used, residual: last_residual });
            }
            let att = self.iterate(&target, g.clone(), budget);
            used += att.iterations;
            last_residual = att.residual;
            if !att.converged || !Self::in_lower_half_plane(&att.g) {
                return Err(Error::NoConvergence { iterations: used, residual: att.residual });
            }
            if s < MIN_SHIFT {
                return Ok(self.finish(b, att, used));
            }
            g = att.g;
            s *= 0.5;
        }
    }

    /// Solves starting from a nearby solution (typically the previous point
    /// of a sweep); falls back to [`CauchySolver::solve`].
    pub fn solve_from(&self, b: &CMatrix, g0: &CMatrix) -> Result<MatrixCauchy> {
        let bb = self.check_b(b)?;
        let att = self.iterate(&bb, g0.clone(), WARM_BUDGET.min(self.max_iter));
        if att.converged && Self::in_lower_half_plane(&att.g) {
            let used = att.iterations;
            return Ok(self.finish(b, att, used));
        }
        self.solve(b)
    }
}

/// Cauchy transform `G_S(b)` of `S = a_0 ⊗ 1 + Σ a_j ⊗ S_j` at `b` with
/// `Im b ≻ 0`.
pub fn matrix_cauchy(op: &QuantumOperator, b: &CMatrix, tol: f64, max_iter: usize) -> Result<MatrixCauchy> {
    let mut solver = CauchySolver::new(op);
    solver.tol = tol;
    solver.max_iter = max_iter;
    solver.solve(b)
}

//! Linear representations `p = −u Q^{-1} v` of noncommutative polynomials,
//! their selfadjoint linearizations and the Schur-complement recovery of
//! scalar Cauchy transforms.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::freecalc::{self, SemicircularFamily};
use crate::linalg::{self, CMatrix};
use crate::ncpoly::{MatrixTuple, NcPoly, Word};

/// `(u, Q, v)` with `Q = Q_0 + Σ_j Q_j x_j`, a `d×d` linear pencil.
#[derive(Debug, Clone, PartialEq)]
pub struct LinRep {
    /// Row vector, stored as `1×d`.
    pub u: CMatrix,
    /// Column vector, stored as `d×1`.
    pub v: CMatrix,
    /// `Q_0, Q_1, …, Q_n`.
    pub q: Vec<CMatrix>,
}

/// Relative tolerance for the selfadjoint-mode structure checks.
const STRUCTURE_TOL: f64 = 1e-12;

impl LinRep {
    pub fn new(u: CMatrix, v: CMatrix, q: Vec<CMatrix>) -> Result<Self> {
        let d = u.ncols();
        if d == 0 || u.nrows() != 1 || v.nrows() != d || v.ncols() != 1 || q.is_empty() {
            return Err(Error::DimensionMismatch("u must be 1×d, v d×1, and Q_0 present".into()));
        }
        if q.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::DimensionMismatch(format!("pencil coefficients must be {d}×{d}")));
        }
        linalg::inverse(&q[0]).map_err(|_| invalid("Q_0 must be invertible"))?;
        Ok(LinRep { u, v, q })
    }

    pub fn d(&self) -> usize {
        self.u.ncols()
    }

    /// Number of variables `n` (coefficients beyond `Q_0`).
    pub fn n(&self) -> usize {
        self.q.len() - 1
    }

    /// `v = u*` and every `Q_j` Hermitian.
    pub fn is_selfadjoint(&self) -> bool {
        let scale = linalg::frobenius(&self.u).max(1.0);
        linalg::frobenius(&(&self.v - self.u.adjoint())) <= STRUCTURE_TOL * scale
            && self.q.iter().all(|m| linalg::hermitian_defect(m) <= STRUCTURE_TOL)
    }

    /// `Q(X) = Q_0 ⊗ 1 + Σ Q_j ⊗ X_j`.
    pub fn pencil_at(&self, x: &MatrixTuple) -> Result<CMatrix> {
        if x.n() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "representation in {} variables evaluated on a {}-tuple",
                self.n(),
                x.n()
            )));
        }
        let nn = x.size();
        let mut out = self.q[0].kronecker(&CMatrix::identity(nn, nn));
        for (qj, xj) in self.q[1..].iter().zip(x.mats()) {
            out += qj.kronecker(xj);
        }
        Ok(out)
    }

    /// `−(u ⊗ 1) Q(X)^{-1} (v ⊗ 1)`, which equals `p(X)`.
    pub fn reconstruct(&self, x: &MatrixTuple) -> Result<CMatrix> {
        let nn = x.size();
        let id = CMatrix::identity(nn, nn);
        let qx = self.pencil_at(x)?;
        let rhs = self.v.kronecker(&id);
        let sol = qx.lu().solve(&rhs).ok_or(Error::Singular)?;
        Ok(-(self.u.kronecker(&id) * sol))
    }

    /// `K_ε = (u ⊗ 1)(iε − Q(X))^{-1}(v ⊗ 1)`; the (1,1) entry of the
    /// resolvent of the linearization at `Λ_ε(z)` is `(z − K_ε)^{-1}`.
    pub fn compressed_resolvent(&self, x: &MatrixTuple, eps: f64) -> Result<CMatrix> {
        let nn = x.size();
        let id = CMatrix::identity(nn, nn);
        let qx = self.pencil_at(x)?;
        let dim = qx.nrows();
        let m = CMatrix::identity(dim, dim) * Complex64::new(0.0, eps) - qx;
        let sol = m.lu().solve(&self.v.kronecker(&id)).ok_or(Error::Singular)?;
        Ok(self.u.kronecker(&id) * sol)
    }
}

/// Appends a block `Q_b = −I + Σ_l E_{l,l+1} x_{i_l}` of size `k+1` for the
/// monomial `c x_{i_1} ⋯ x_{i_k}`, with border `u_b = c e_1`, `v_b = e_{k+1}`.
fn push_monomial_block(word: &Word, c: Complex64, offset: usize, u: &mut [Complex64], v: &mut [Complex64], q: &mut [CMatrix]) {
    let k = word.len();
    for l in 0..=k {
        q[0][(offset + l, offset + l)] = Complex64::new(-1.0, 0.0);
    }
    for (l, &letter) in word.letters().iter().enumerate() {
        q[letter as usize][(offset + l, offset + l + 1)] += Complex64::new(1.0, 0.0);
    }
    u[offset] = c;
    v[offset + k] = Complex64::new(1.0, 0.0);
}

/// Direct sum of per-monomial blocks; valid for any nonzero `p`.
fn monomial_representation(p: &NcPoly) -> LinRep {
    let n = p.n();
    let d: usize = p.terms().map(|(w, _)| w.len() + 1).sum();
    let mut u = vec![Complex64::new(0.0, 0.0); d];
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    let mut q = vec![CMatrix::zeros(d, d); n + 1];
    let mut offset = 0;
    for (w, c) in p.terms() {
        push_monomial_block(w, *c, offset, &mut u, &mut v, &mut q);
        offset += w.len() + 1;
    }
    LinRep { u: CMatrix::from_row_slice(1, d, &u), v: CMatrix::from_column_slice(d, 1, &v), q }
}

/// Builds a linear representation of `p`.
///
/// Selfadjoint `p` is split as `q + q*` (palindromic words contribute half
/// their coefficient to `q`); the representation `(u, Q, v)` of `q` is
/// doubled to `U = [u, v*]`, `Q_sa = [[0, Q*], [Q, 0]]`, `V = U*`, and then
/// rescaled by `λ = 1/(UU*)` so that `UU* = 1`. Other polynomials get the
/// plain direct-sum representation.
pub fn build_representation(p: &NcPoly) -> Result<LinRep> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let scale = p.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    if !p.is_selfadjoint(1e-12 * scale) {
        return Ok(monomial_representation(p));
    }
    if p.degree() == Some(0) {
        let c = p.coeff(&Word::unit()).re;
        let mut q = vec![CMatrix::zeros(1, 1); p.n() + 1];
        q[0][(0, 0)] = Complex64::new(-1.0 / c, 0.0);
        let one = CMatrix::identity(1, 1);
        return LinRep::new(one.clone(), one, q);
    }
    let half = p
        .terms()
        .filter_map(|(w, c)| {
            let r = w.reversed();
            if r == *w {
                Some((w.clone(), *c * 0.5))
            } else if *w < r {
                Some((w.clone(), *c))
            } else {
                None
            }
        })
        .collect::<Vec<_>>();
    let q_half = NcPoly::from_terms(p.n(), half)?;
    let base = monomial_representation(&q_half);
    let d = base.d();
    let mut big_u = CMatrix::zeros(1, 2 * d);
    big_u.view_mut((0, 0), (1, d)).copy_from(&base.u);
    big_u.view_mut((0, d), (1, d)).copy_from(&base.v.adjoint());
    let s = (&big_u * big_u.adjoint())[(0, 0)].re;
    let big_u = big_u / Complex64::new(libm::sqrt(s), 0.0);
    let q = base
        .q
        .iter()
        .map(|qj| {
            let mut m = CMatrix::zeros(2 * d, 2 * d);
            m.view_mut((0, d), (d, d)).copy_from(&qj.adjoint());
            m.view_mut((d, 0), (d, d)).copy_from(qj);
            m / Complex64::new(s, 0.0)
        })
        .collect();
    LinRep::new(big_u.clone(), big_u.adjoint(), q)
}

/// The linearization `p̂ = [[0, u], [v, Q]]` as coefficient matrices
/// `P_0, P_1, …, P_n` of size `d+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil {
    pub coeffs: Vec<CMatrix>,
}

impl Pencil {
    pub fn size(&self) -> usize {
        self.coeffs[0].nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        self.coeffs.iter().all(|m| linalg::hermitian_defect(m) <= STRUCTURE_TOL)
    }

    /// `p̂(X) = P_0 ⊗ 1 + Σ P_j ⊗ X_j`.
    pub fn evaluate(&self, x: &MatrixTuple) -> Result<CMatrix> {
        if x.n() + 1 != self.coeffs.len() {
            return Err(Error::DimensionMismatch("pencil and tuple disagree on n".into()));
        }
        let nn = x.size();
        let mut out = self.coeffs[0].kronecker(&CMatrix::identity(nn, nn));
        for (pj, xj) in self.coeffs[1..].iter().zip(x.mats()) {
            out += pj.kronecker(xj);
        }
        Ok(out)
    }

    /// `(id ⊗ tr_N)((Λ ⊗ 1 − p̂(X))^{-1})`.
    pub fn resolvent_partial_trace(&self, x: &MatrixTuple, lambda: &CMatrix) -> Result<CMatrix> {
        let nn = x.size();
        let m = lambda.kronecker(&CMatrix::identity(nn, nn)) - self.evaluate(x)?;
        let inv = linalg::inverse(&m)?;
        let s = self.size();
        Ok(CMatrix::from_fn(s, s, |i, j| {
            let block = inv.view((i * nn, j * nn), (nn, nn));
            block.trace() / nn as f64
        }))
    }

    /// The quantum operator of `p̂(S)`: constant term `P_0`, coefficients
    /// `P_j`. Requires Hermitian coefficients.
    pub fn quantum_operator(&self) -> Result<freecalc::QuantumOperator> {
        freecalc::QuantumOperator::new(self.coeffs[0].clone(), self.coeffs[1..].to_vec())
    }
}

pub fn linearization(rep: &LinRep) -> Pencil {
    let d = rep.d();
    let coeffs = rep
        .q
        .iter()
        .enumerate()
        .map(|(j, qj)| {
            let mut m = CMatrix::zeros(d + 1, d + 1);
            if j == 0 {
                m.view_mut((0, 1), (1, d)).copy_from(&rep.u);
                m.view_mut((1, 0), (d, 1)).copy_from(&rep.v);
            }
            m.view_mut((1, 1), (d, d)).copy_from(qj);
            m
        })
        .collect();
    Pencil { coeffs }
}

/// `Λ_ε(z) = diag(z, iε, …, iε)` of size `d+1`.
pub fn lambda_eps(z: Complex64, eps: f64, d: usize) -> Result<CMatrix> {
    if !(z.im > 0.0) {
        return Err(invalid(format!("Λ_ε(z) needs Im z > 0, got {z}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid(format!("Λ_ε(z) needs ε > 0, got {eps}")));
    }
    let mut m = CMatrix::identity(d + 1, d + 1) * Complex64::new(0.0, eps);
    m[(0, 0)] = z;
    Ok(m)
}

/// The `(1,1)` entry of a `(d+1)×(d+1)` matrix-valued Cauchy transform.
pub fn schur_recover(g_hat: &CMatrix) -> Complex64 {
    g_hat[(0, 0)]
}

/// Vector of polynomials `(Q^{-1} v)_r`, from the terminating series
/// `Q_0^{-1} Σ_k T^k v` with `T = −Σ_j Q_j Q_0^{-1} x_j` acting by left
/// multiplication.
fn formal_inverse_times_v(rep: &LinRep) -> Result<Vec<NcPoly>> {
    let d = rep.d();
    let n = rep.n();
    let q0_inv = linalg::inverse(&rep.q[0])?;
    let t: Vec<CMatrix> = rep.q[1..].iter().map(|qj| -(qj * &q0_inv)).collect();
    let scale = t.iter().map(linalg::frobenius).fold(1.0, f64::max);
    let dust = 1e-13 * scale;
    let mut term: Vec<NcPoly> =
        (0..d).map(|r| NcPoly::constant(n, rep.v[(r, 0)]).prune(dust)).collect();
    let mut sum = term.clone();
    for _ in 0..=d {
        if term.iter().all(NcPoly::is_zero) {
            let mut out = Vec::with_capacity(d);
            for r in 0..d {
                let mut acc = NcPoly::zero(n);
                for s in 0..d {
                    let c = q0_inv[(r, s)];
                    if c.norm() > 0.0 {
                        acc = &acc + &sum[s].scale(c);
                    }
                }
                out.push(acc.prune(dust));
            }
            return Ok(out);
        }
        let mut next = vec![NcPoly::zero(n); d];
        for (j, tj) in t.iter().enumerate() {
            let xj = NcPoly::var(n, j + 1);
            for s in 0..d {
                if term[s].is_zero() {
                    continue;
                }
                let shifted = &xj * &term[s];
                for r in 0..d {
                    let c = tj[(r, s)];
                    if c.norm() > dust {
                        next[r] = &next[r] + &shifted.scale(c);
                    }
                }
            }
        }
        term = next.into_iter().map(|p| p.prune(dust)).collect();
        for r in 0..d {
            sum[r] = &sum[r] + &term[r];
        }
    }
    Err(invalid("formal inverse of Q does not terminate; the pencil is not nilpotent"))
}

/// Orthonormal rows `u_1 = u, u_2, …, u_d` from the Householder reflector
/// that maps `u*` to a multiple of `e_1`.
fn householder_completion(u: &CMatrix) -> Vec<CMatrix> {
    let d = u.ncols();
    let x = u.adjoint();
    let norm = linalg::frobenius(&x);
    let x0 = x[(0, 0)];
    let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
    let mut w = x.clone();
    w[(0, 0)] += phase * norm;
    let wn = linalg::frobenius(&w);
    let h = if wn == 0.0 {
        CMatrix::identity(d, d)
    } else {
        let w = w / Complex64::new(wn, 0.0);
        CMatrix::identity(d, d) - (&w * w.adjoint()) * Complex64::new(2.0, 0.0)
    };
    let mut rows = vec![u.clone()];
    for j in 1..d {
        rows.push(CMatrix::from_fn(1, d, |_, k| h[(k, j)].conj()));
    }
    rows
}

/// The polynomials `p_j = −u_j Q^{-1} v` for an orthonormal basis
/// `u_1 = u, …, u_d`; `p_1` is the represented polynomial.
pub fn auxiliary_polys(rep: &LinRep) -> Result<Vec<NcPoly>> {
    if !rep.is_selfadjoint() {
        return Err(Error::NotSelfadjoint);
    }
    let uu = (&rep.u * rep.u.adjoint())[(0, 0)].re;
    if uu == 0.0 {
        return Err(invalid("u = 0"));
    }
    if (uu - 1.0).abs() > 1e-10 {
        return Err(invalid(format!("auxiliary polynomials need uu* = 1, got {uu}")));
    }
    let qv = formal_inverse_times_v(rep)?;
    let rows = householder_completion(&rep.u);
    let n = rep.n();
    Ok(rows
        .iter()
        .map(|uj| {
            let mut acc = NcPoly::zero(n);
            for (r, pr) in qv.iter().enumerate() {
                let c = uj[(0, r)];
                if c.norm() > 0.0 {
                    acc = &acc - &pr.scale(c);
                }
            }
            acc.prune(1e-12)
        })
        .collect())
}

/// Source of `‖p‖₂² = τ(p* p)` for [`approximation_bound`].
pub trait TraceOracle {
    fn l2_norm_sq(&self, p: &NcPoly) -> Result<f64>;
}

/// Exact traces in free semicirculars.
impl TraceOracle for SemicircularFamily {
    fn l2_norm_sq(&self, p: &NcPoly) -> Result<f64> {
        let v = freecalc::l2_norm(p, self)?;
        Ok(v * v)
    }
}

/// Sample mean of `tr_N(p(X)* p(X))` over matrix tuples.
#[derive(Debug, Clone)]
pub struct MatrixSampleOracle<'a> {
    pub samples: &'a [MatrixTuple],
}

impl TraceOracle for MatrixSampleOracle<'_> {
    fn l2_norm_sq(&self, p: &NcPoly) -> Result<f64> {
        if self.samples.is_empty() {
            return Err(Error::Oracle("no matrix samples".into()));
        }
        let mut acc = 0.0;
        for x in self.samples {
            let px = p.with_vars(x.n())?.evaluate(x)?;
            acc += px.iter().map(|z| z.norm_sqr()).sum::<f64>() / x.size() as f64;
        }
        Ok(acc / self.samples.len() as f64)
    }
}

/// `(2ε / Im(z)²) Σ_j ‖p_j‖₂²`, bounding the distance between the scalar
/// Cauchy transform of `p` and the Schur-complement recovery at `Λ_ε(z)`.
pub fn approximation_bound(rep: &LinRep, z: Complex64, eps: f64, oracle: &dyn TraceOracle) -> Result<f64> {
    if !(z.im > 0.0) {
        return Err(invalid("approximation bound needs Im z > 0"));
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(invalid("approximation bound needs ε ≥ 0"));
    }
    let mut total = 0.0;
    for pj in auxiliary_polys(rep)? {
        total += oracle.l2_norm_sq(&pj)?;
    }
    Ok(2.0 * eps / (z.im * z.im) * total)
}

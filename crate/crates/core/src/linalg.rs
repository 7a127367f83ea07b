//! Thin helpers over `nalgebra` for dense complex matrices.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    libm::sqrt(m.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

/// Relative Hermiticity defect `‖M − M*‖_F / ‖M‖_F` (0 for the zero matrix).
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let scale = frobenius(m);
    if scale == 0.0 {
        return 0.0;
    }
    frobenius(&(m - m.adjoint())) / scale
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Imaginary part `(M − M*)/(2i)`, a Hermitian matrix.
pub fn im_part(m: &CMatrix) -> CMatrix {
    (m - m.adjoint()) * c(0.0, -0.5)
}

pub fn re_part(m: &CMatrix) -> CMatrix {
    hermitize(m)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Smallest eigenvalue of a Hermitian matrix and a unit eigenvector for it.
pub fn min_eigenpair(m: &CMatrix) -> (f64, CVector) {
    let eig = m.clone().symmetric_eigen();
    let (k, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty matrix");
    (lambda, eig.eigenvectors.column(k).into_owned())
}

/// Spectral (operator) norm.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    if hermitian_defect(m) < 1e-14 {
        return eigvalsh(m).iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    }
    m.clone().singular_values().iter().fold(0.0_f64, |acc, &x| acc.max(x))
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let inv = m.clone().lu().try_inverse().ok_or(Error::Singular)?;
    if inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Singular);
    }
    Ok(inv)
}

/// Normalized trace `tr_d(M) = Tr(M)/d`.
pub fn normalized_trace(m: &CMatrix) -> Complex64 {
    m.trace() / m.nrows() as f64
}

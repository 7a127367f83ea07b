use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::QuantumOperator;
use crate::linalg::{self, CMatrix, CVector};
use num_complex::Complex64;

/// Alternating sweeps per restart.
const SWEEPS: usize = 200;

/// `Σ_j (a_j x)(a_j x)*`: its smallest eigenvalue is `min_w Σ_j |w* a_j x|²`.
fn gram(op: &QuantumOperator, x: &CVector) -> CMatrix {
    let d = op.d();
    let mut m = CMatrix::zeros(d, d);
    for aj in op.coefficients() {
        let y = aj * x;
        m += &y * y.adjoint();
    }
    m
}

/// Estimates the semi-flatness constant
/// `c* = d · min_{‖v‖=‖w‖=1} Σ_j |w* a_j v|²`, the largest `c` with
/// `L(b) ⪰ c tr_d(b) 1` on positive semidefinite `b` (attained on rank-one
/// `b`).
///
/// Alternating minimization: with `v` fixed, the optimal `w` is a bottom
/// eigenvector of `Σ (a_j v)(a_j v)*`, and symmetrically for `v` since the
/// `a_j` are Hermitian. The smallest value over `restarts` seeded random
/// starts is returned; it is an upper bound on `c*`.
pub fn semiflat_constant(op: &QuantumOperator, restarts: usize, seed: u64) -> f64 {
    let d = op.d();
    if op.coefficients().is_empty() {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..restarts.max(1) {
        let mut v = CVector::from_fn(d, |_, _| {
            Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        });
        v /= Complex64::new(v.norm(), 0.0);
        let mut value = f64::INFINITY;
        for _ in 0..SWEEPS {
            let (_, w) = linalg::min_eigenpair(&gram(op, &v));
            let (lam, v_new) = linalg::min_eigenpair(&gram(op, &w));
            v = v_new;
            let improved = lam < value - 1e-15 * value.abs().max(1.0);
            value = value.min(lam);
            if !improved {
                break;
            }
        }
        best = best.min(value.max(0.0));
    }
    d as f64 * best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn op(a: alloc::vec::Vec<CMatrix>) -> QuantumOperator {
        let d = a[0].nrows();
        QuantumOperator::new(CMatrix::zeros(d, d), a).unwrap()
    }

    #[test]
    fn scalar_identity() {
        let v = semiflat_constant(&op(alloc::vec![CMatrix::identity(1, 1)]), 4, 1);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_is_not_semiflat() {
        let p = CMatrix::from_diagonal(&CVector::from_vec(alloc::vec![c(1.0, 0.0), c(0.0, 0.0)]));
        assert!(semiflat_constant(&op(alloc::vec![p]), 8, 2).abs() < 1e-12);
    }

    #[test]
    fn pauli_matrices() {
        let sx = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let sy = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let sz = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let v = semiflat_constant(&op(alloc::vec![sx, sy, sz]), 32, 3);
        assert!((v - 2.0).abs() < 1e-9, "{v}");
    }
}

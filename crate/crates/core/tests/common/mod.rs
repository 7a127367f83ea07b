#![allow(dead_code)]

use freeholder_core::linalg::{self, CMatrix};
use freeholder_core::ncpoly::{MatrixTuple, NcPoly, Word};
use freeholder_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Small Gaussian-integer coefficients keep algebraic identities exact.
fn coeff() -> impl Strategy<Value = Complex64> {
    (-3i32..=3, -2i32..=2)
        .prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0)
        .prop_map(|(a, b)| Complex64::new(a as f64, b as f64))
}

fn word(n: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=n as u32, 0..=max_len).prop_map(Word::new)
}

pub fn poly(n: usize, max_deg: usize, max_terms: usize) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((word(n, max_deg), coeff()), 1..=max_terms)
        .prop_map(move |terms| NcPoly::from_terms(n, terms).unwrap())
        .prop_filter("nonzero", |p| !p.is_zero())
}

pub fn selfadjoint(p: &NcPoly) -> NcPoly {
    &(p + &p.adjoint()) + &NcPoly::zero(p.n())
}

pub fn random_hermitian(size: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let m = CMatrix::from_fn(size, size, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    linalg::hermitize(&m)
}

pub fn random_tuple(n: usize, size: usize, seed: u64) -> MatrixTuple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MatrixTuple::hermitian((0..n).map(|_| random_hermitian(size, &mut rng)).collect()).unwrap()
}

pub fn rel_err(a: &CMatrix, b: &CMatrix) -> f64 {
    linalg::op_norm(&(a - b)) / (1.0 + linalg::op_norm(a))
}

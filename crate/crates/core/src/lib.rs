//! Numerical free probability for polynomials in free semicircular variables.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It covers
//!
//! * exact algebra of noncommutative polynomials ([`ncpoly`]),
//! * selfadjoint linear representations and linearizations ([`linearize`]),
//! * semicircular moments, operator-valued Cauchy transforms and Stieltjes
//!   inversion ([`freecalc`]),
//! * one-dimensional measure analytics: Kolmogorov/Lévy distances, Hölder
//!   moduli, logarithmic energy and Bai-type bounds ([`measures`]),
//! * closed-form regularity constants and rate exponents ([`bounds`]),
//! * a deterministic GUE random-matrix engine ([`randmat`]).
//!
//! File formats, the command line front-end and experiment drivers live in
//! the `freeholder` crate.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod error;
pub mod freecalc;
pub mod linalg;
pub mod linearize;
pub mod measures;
pub mod ncpoly;
pub mod quad;
pub mod randmat;

pub use error::{Error, Result};
pub use num_complex::Complex64;

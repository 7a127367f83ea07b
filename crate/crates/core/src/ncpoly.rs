//! Noncommutative polynomials over `ℂ` in `n` formal variables.
//!
//! Polynomials are sparse maps from words to complex coefficients. Words are
//! kept in a `BTreeMap`, so iteration order is lexicographic and every
//! derived quantity is deterministic.
//!
//! Variable indices are 1-based throughout, matching the text format
//! (`1*x1x2 + 1*x2x1`).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// A monomial `x_{i1} ⋯ x_{ik}`; the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: impl Into<Vec<u32>>) -> Self {
        Word(letters.into())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    fn max_letter(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "x{l}")?;
        }
        Ok(())
    }
}

fn check_index(j: usize, n: usize) -> Result<()> {
    if j == 0 || j > n {
        Err(Error::IndexOutOfRange { index: j, n })
    } else {
        Ok(())
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(crate::error::invalid(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Complex64>, key: K, coeff: Complex64) {
    if coeff == Complex64::new(0.0, 0.0) {
        return;
    }
    use alloc::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(coeff);
        }
        Entry::Occupied(mut e) => {
            let sum = *e.get() + coeff;
            if sum == Complex64::new(0.0, 0.0) {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// A noncommutative polynomial `Σ a_w w` in `n` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct NcPoly {
    n: usize,
    terms: BTreeMap<Word, Complex64>,
}

impl NcPoly {
    pub fn zero(n: usize) -> Self {
        NcPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        Self::monomial(n, Word::unit(), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Complex64::new(1.0, 0.0))
    }

    /// The variable `x_j`. Panics if `j` is outside `1..=n`.
    pub fn var(n: usize, j: usize) -> Self {
        check_index(j, n).expect("variable index");
        Self::monomial(n, Word(vec![j as u32]), Complex64::new(1.0, 0.0))
    }

    pub fn monomial(n: usize, word: Word, c: Complex64) -> Self {
        assert!(word.max_letter() as usize <= n, "letter exceeds variable count");
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, word, c);
        NcPoly { n, terms }
    }

    /// Builds a polynomial from `(word, coefficient)` pairs, merging repeats.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Word, Complex64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (w, c) in terms {
            if let Some(&bad) = w.letters().iter().find(|&&l| l == 0 || l as usize > n) {
                return Err(Error::IndexOutOfRange { index: bad as usize, n });
            }
            accumulate(&mut map, w, c);
        }
        Ok(NcPoly { n, terms: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Same polynomial viewed in `n ≥ self.n()` variables.
    pub fn with_vars(&self, n: usize) -> Result<Self> {
        if n < self.max_letter() {
            return Err(Error::DimensionMismatch(format!(
                "polynomial uses x{} but only {n} variables requested",
                self.max_letter()
            )));
        }
        Ok(NcPoly { n, terms: self.terms.clone() })
    }

    fn max_letter(&self) -> usize {
        self.terms.keys().map(|w| w.max_letter() as usize).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Complex64 {
        self.terms.get(w).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree, or `None` for the zero polynomial (degree −∞).
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        NcPoly {
            n: self.n,
            terms: self.terms.iter().filter(|(_, c)| c.norm() > tol).map(|(w, c)| (w.clone(), *c)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = NcPoly::zero(self.n);
        for (w, c) in &self.terms {
            accumulate(&mut out.terms, w.clone(), c * s);
        }
        out
    }

    /// The involution: reverse every word and conjugate its coefficient.
    pub fn adjoint(&self) -> Self {
        NcPoly { n: self.n, terms: self.terms.iter().map(|(w, c)| (w.reversed(), c.conj())).collect() }
    }

    /// `max |a_w − conj(a_{w*})| ≤ tol`.
    pub fn is_selfadjoint(&self, tol: f64) -> bool {
        let adj = self.adjoint();
        let diff = self - &adj;
        diff.terms.values().all(|c| c.norm() <= tol)
    }

    /// The noncommutative derivative `∂_j`, with `∂_j x_i = δ_ij 1⊗1`.
    pub fn nc_derivative(&self, j: usize) -> Result<BiPoly> {
        check_index(j, self.n)?;
        let mut out = BiPoly::zero(self.n);
        for (w, c) in &self.terms {
            let letters = w.letters();
            for (pos, &l) in letters.iter().enumerate() {
                if l as usize == j {
                    let left = Word(letters[..pos].to_vec());
                    let right = Word(letters[pos + 1..].to_vec());
                    accumulate(&mut out.terms, (left, right), *c);
                }
            }
        }
        Ok(out)
    }

    /// Cyclic derivative `D_j V = m̃(∂_j V)` with the flipped multiplication
    /// `m̃(a ⊗ b) = b a`.
    pub fn cyclic_derivative(&self, j: usize) -> Result<NcPoly> {
        Ok(self.nc_derivative(j)?.flip_multiply())
    }

    /// `‖P‖_R = Σ |a_w| R^{|w|}`.
    pub fn norm_r(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.terms.iter().map(|(w, c)| c.norm() * libm::pow(r, w.len() as f64)).sum())
    }

    /// Leading weight `ρ_R(P) = max_{|w| = deg P} |a_w| R^{deg P} / ‖P‖_R ∈ (0, 1]`.
    pub fn leading_weight(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        let top = self
            .terms
            .iter()
            .filter(|(w, _)| w.len() == d)
            .map(|(_, c)| c.norm())
            .fold(0.0_f64, f64::max);
        Ok(top * libm::pow(r, d as f64) / self.norm_r(r)?)
    }

    /// Evaluates `P(X_1, …, X_n)` by direct word products.
    ///
    /// Lexicographic term order means consecutive words share prefixes, so
    /// prefix products are cached on a stack.
    pub fn evaluate(&self, x: &MatrixTuple) -> Result<CMatrix> {
        if x.n() < self.max_letter() || x.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {} variables evaluated on a {}-tuple",
                self.n,
                x.n()
            )));
        }
        let size = x.size();
        let mut out = CMatrix::zeros(size, size);
        let mut stack: Vec<CMatrix> = Vec::new();
        let mut prefix: Vec<u32> = Vec::new();
        for (w, c) in &self.terms {
            let letters = w.letters();
            let common = prefix.iter().zip(letters).take_while(|(a, b)| a == b).count();
            stack.truncate(common);
            prefix.truncate(common);
            for &l in &letters[common..] {
                let next = match stack.last() {
                    Some(top) => top * &x.mats[l as usize - 1],
                    None => x.mats[l as usize - 1].clone(),
                };
                stack.push(next);
                prefix.push(l);
            }
            match stack.last() {
                Some(m) => out += m * *c,
                None => {
                    for k in 0..size {
                        out[(k, k)] += *c;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Parses the text format, using exactly `n` variables.
    pub fn parse_with_vars(s: &str, n: usize) -> Result<Self> {
        let terms = Parser::new(s).parse()?;
        NcPoly::from_terms(n, terms).map_err(|e| match e {
            Error::IndexOutOfRange { index, n } => Error::Parse {
                pos: 0,
                msg: format!("variable x{index} exceeds the declared variable count {n}"),
            },
            other => other,
        })
    }
}

impl FromStr for NcPoly {
    type Err = Error;

    /// Parses `1*x1x2 + (0.5-2i)*x2 - 3`; the variable count is the largest
    /// index that appears (at least 1).
    fn from_str(s: &str) -> Result<Self> {
        let terms = Parser::new(s).parse()?;
        let n = terms.iter().map(|(w, _)| w.max_letter() as usize).max().unwrap_or(0).max(1);
        NcPoly::from_terms(n, terms)
    }
}

fn fmt_coeff(c: Complex64, leading: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.im == 0.0 {
        if leading {
            write!(f, "{}", c.re)
        } else if c.re.is_sign_negative() {
            write!(f, " - {}", -c.re)
        } else {
            write!(f, " + {}", c.re)
        }
    } else {
        let sep = if leading { "" } else { " + " };
        if c.re == 0.0 {
            write!(f, "{sep}({}i)", c.im)
        } else if c.im.is_sign_negative() {
            write!(f, "{sep}({}-{}i)", c.re, -c.im)
        } else {
            write!(f, "{sep}({}+{}i)", c.re, c.im)
        }
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            fmt_coeff(*c, k == 0, f)?;
            if !w.is_empty() {
                write!(f, "*{w}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;

    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.n = self.n.max(rhs.n);
        for (w, c) in &rhs.terms {
            accumulate(&mut out.terms, w.clone(), *c);
        }
        out
    }
}

impl<'a> Sub<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;

    fn sub(self, rhs: &NcPoly) -> NcPoly {
        self + &(-rhs)
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;

    fn neg(self) -> NcPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl<'a> Mul<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;

    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero(self.n.max(rhs.n));
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                accumulate(&mut out.terms, w1.concat(w2), c1 * c2);
            }
        }
        out
    }
}

/// An element of the algebraic tensor product `ℂ⟨x⟩ ⊗ ℂ⟨x⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly {
    n: usize,
    terms: BTreeMap<(Word, Word), Complex64>,
}

impl BiPoly {
    pub fn zero(n: usize) -> Self {
        BiPoly { n, terms: BTreeMap::new() }
    }

    /// `p ⊗ q`.
    pub fn tensor(p: &NcPoly, q: &NcPoly) -> Self {
        let mut out = BiPoly::zero(p.n.max(q.n));
        for (w1, c1) in &p.terms {
            for (w2, c2) in &q.terms {
                accumulate(&mut out.terms, (w1.clone(), w2.clone()), c1 * c2);
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Complex64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Product in the tensor algebra: `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    pub fn mul(&self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero(self.n.max(rhs.n));
        for ((a, b), c1) in &self.terms {
            for ((cw, dw), c2) in &rhs.terms {
                accumulate(&mut out.terms, (a.concat(cw), b.concat(dw)), c1 * c2);
            }
        }
        out
    }

    pub fn add(&self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        out.n = self.n.max(rhs.n);
        for (k, c) in &rhs.terms {
            accumulate(&mut out.terms, k.clone(), *c);
        }
        out
    }

    pub fn sub(&self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        out.n = self.n.max(rhs.n);
        for (k, c) in &rhs.terms {
            accumulate(&mut out.terms, k.clone(), -c);
        }
        out
    }

    /// Flipped multiplication `a ⊗ b ↦ b a`.
    pub fn flip_multiply(&self) -> NcPoly {
        let mut out = NcPoly::zero(self.n);
        for ((a, b), c) in &self.terms {
            accumulate(&mut out.terms, b.concat(a), *c);
        }
        out
    }

    /// Canonical upper bound for the projective norm `‖·‖_{R,π}`: the value
    /// `Σ |c| ‖a‖_R ‖b‖_R` of the stored monomial representation.
    ///
    /// The true norm is an infimum over all representations and may be
    /// smaller; nothing downstream needs more than an upper bound.
    pub fn projective_norm_r(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self
            .terms
            .iter()
            .map(|((a, b), c)| c.norm() * libm::pow(r, (a.len() + b.len()) as f64))
            .sum())
    }

    /// Applies a linear functional to the left legs: `(φ ⊗ id)(Q)`.
    pub fn contract_left<F>(&self, mut phi: F) -> Result<NcPoly>
    where
        F: FnMut(&Word) -> Result<Complex64>,
    {
        let mut out = NcPoly::zero(self.n);
        for ((a, b), c) in &self.terms {
            let s = phi(a)?;
            accumulate(&mut out.terms, b.clone(), c * s);
        }
        Ok(out)
    }
}

/// An `n`-tuple of square complex matrices of a common size.
#[derive(Debug, Clone)]
pub struct MatrixTuple {
    mats: Vec<CMatrix>,
    hermitian: Vec<bool>,
}

/// Relative Hermiticity tolerance enforced on matrices flagged Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

impl MatrixTuple {
    /// Builds a tuple of general (not necessarily Hermitian) matrices.
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        let flags = vec![false; mats.len()];
        Self::build(mats, flags)
    }

    /// Builds a tuple of Hermitian matrices, rejecting any with relative
    /// defect above [`HERMITIAN_TOL`].
    pub fn hermitian(mats: Vec<CMatrix>) -> Result<Self> {
        for m in &mats {
            let defect = linalg::hermitian_defect(m);
            if defect > HERMITIAN_TOL {
                return Err(Error::NotHermitian { defect });
            }
        }
        let flags = vec![true; mats.len()];
        Self::build(mats, flags)
    }

    fn build(mats: Vec<CMatrix>, hermitian: Vec<bool>) -> Result<Self> {
        let size = mats.first().map(|m| m.nrows()).unwrap_or(0);
        if mats.iter().any(|m| m.nrows() != size || m.ncols() != size) {
            return Err(Error::DimensionMismatch("tuple matrices must be square of equal size".into()));
        }
        Ok(MatrixTuple { mats, hermitian })
    }

    pub fn n(&self) -> usize {
        self.mats.len()
    }

    pub fn size(&self) -> usize {
        self.mats.first().map(|m| m.nrows()).unwrap_or(0)
    }

    pub fn mats(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn get(&self, j: usize) -> &CMatrix {
        &self.mats[j - 1]
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian.iter().all(|&h| h)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { src: s.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse(mut self) -> Result<Vec<(Word, Complex64)>> {
        let mut terms = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let sign = if self.eat(b'+') {
                1.0
            } else if self.eat(b'-') {
                -1.0
            } else if first {
                1.0
            } else {
                return self.err("expected '+' or '-' between terms");
            };
            first = false;
            self.skip_ws();
            let (w, c) = self.term()?;
            terms.push((w, c * sign));
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(terms);
            }
        }
    }

    fn term(&mut self) -> Result<(Word, Complex64)> {
        match self.peek() {
            Some(b'x') => Ok((self.word()?, Complex64::new(1.0, 0.0))),
            Some(b'(') | Some(b'0'..=b'9') | Some(b'.') | Some(b'i') => {
                let coeff = self.coefficient()?;
                self.skip_ws();
                if self.eat(b'*') {
                    self.skip_ws();
                    let w = if self.peek() == Some(b'x') {
                        self.word()?
                    } else if self.eat(b'1') {
                        Word::unit()
                    } else {
                        return self.err("expected a monomial after '*'");
                    };
                    Ok((w, coeff))
                } else {
                    Ok((Word::unit(), coeff))
                }
            }
            _ => self.err("expected a coefficient or a monomial"),
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut letters = Vec::new();
        loop {
            if !self.eat(b'x') {
                return self.err("expected 'x'");
            }
            let start = self.pos;
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected a variable index after 'x'");
            }
            let idx: u32 = core::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or(Error::Parse { pos: start, msg: "invalid variable index".into() })?;
            if idx == 0 {
                return Err(Error::Parse { pos: start, msg: "variable indices start at 1".into() });
            }
            letters.push(idx);
            // `x1x2` and `x1*x2` are both accepted.
            let save = self.pos;
            if self.eat(b'*') && self.peek() == Some(b'x') {
                continue;
            }
            self.pos = save;
            if self.peek() != Some(b'x') {
                return Ok(Word(letters));
            }
        }
    }

    /// A real number, an imaginary number `bi`/`i`, or a parenthesised
    /// complex number `(a+bi)`.
    fn coefficient(&mut self) -> Result<Complex64> {
        if self.eat(b'(') {
            self.skip_ws();
            let mut total = Complex64::new(0.0, 0.0);
            let mut first = true;
            loop {
                self.skip_ws();
                let sign = if self.eat(b'+') {
                    1.0
                } else if self.eat(b'-') {
                    -1.0
                } else if first {
                    1.0
                } else {
                    break;
                };
                first = false;
                self.skip_ws();
                total += self.scalar()? * sign;
            }
            self.skip_ws();
            if !self.eat(b')') {
                return self.err("expected ')'");
            }
            Ok(total)
        } else {
            self.scalar()
        }
    }

    fn scalar(&mut self) -> Result<Complex64> {
        if self.eat(b'i') {
            return Ok(Complex64::new(0.0, 1.0));
        }
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9') | Some(b'.')) {
            self.pos += 1;
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        let value: f64 = text
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: format!("invalid number '{text}'") })?;
        if self.eat(b'i') {
            Ok(Complex64::new(0.0, value))
        } else {
            Ok(Complex64::new(value, 0.0))
        }
    }
}

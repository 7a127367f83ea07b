mod common;

use common::poly;
use freeholder_core::freecalc::*;
use freeholder_core::linalg::CMatrix;
use freeholder_core::measures::Law;
use freeholder_core::ncpoly::{NcPoly, Word};
use freeholder_core::Complex64;
use proptest::prelude::*;

fn all_words(n: u32, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::unit()];
    let mut layer = vec![Vec::<u32>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for j in 1..=n {
                let mut v = w.clone();
                v.push(j);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word::new));
        layer = next;
    }
    out
}

#[test]
fn catalan_moments() {
    let cat = [1u64, 1, 2, 5, 14, 42, 132, 429, 1430];
    for (k, c) in cat.iter().enumerate() {
        assert_eq!(semicircular_word_moment(&Word::new(vec![1; 2 * k])), *c);
    }
}

#[test]
fn schwinger_dyson_for_all_monomials_up_to_degree_six() {
    let fam = SemicircularFamily::new(2);
    let words = all_words(2, 6);
    assert_eq!(words.len(), 127);
    for w in words {
        let p = NcPoly::monomial(2, w.clone(), Complex64::new(1.0, 0.0));
        for j in 1..=2 {
            let (l, r) = schwinger_dyson_sides(&p, j, &fam).unwrap();
            assert_eq!(l, r, "{w} j={j}");
        }
    }
}

fn small_monomials() -> Vec<NcPoly> {
    all_words(2, 2).into_iter().map(|w| NcPoly::monomial(2, w, Complex64::new(1.0, 0.0))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn trace_inequality_holds(p in poly(2, 3, 4), i in 1usize..=2) {
        let fam = SemicircularFamily::new(2);
        for u in small_monomials() {
            for v in small_monomials() {
                let (lhs, rhs) = trace_inequality(&p, &u, &v, i, &fam).unwrap();
                prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-12, "{p} u={u} v={v}: {lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn delta_lowers_degree(p in poly(2, 5, 5), v in poly(2, 2, 2), i in 1usize..=2) {
        let fam = SemicircularFamily::new(2);
        let r = delta_reduce(&p, &v, i, &fam).unwrap();
        let d = p.degree().unwrap();
        prop_assert!(r.degree().map_or(true, |k| k + 1 <= d));
    }

    #[test]
    fn traces_of_selfadjoint_polynomials_are_real(p in poly(2, 4, 4)) {
        let fam = SemicircularFamily::new(2);
        let t = trace_poly(&(&p + &p.adjoint()), &fam).unwrap();
        prop_assert_eq!(t.im, 0.0);
    }
}

#[test]
fn matrix_cauchy_matches_scalar_semicircle() {
    let op = QuantumOperator::new(CMatrix::zeros(1, 1), vec![CMatrix::identity(1, 1)]).unwrap();
    for k in 0..10 {
        let z = Complex64::new(-3.0 + 0.6 * k as f64, 0.05 + 0.2 * k as f64);
        let g = matrix_cauchy(&op, &CMatrix::from_element(1, 1, z), 1e-12, 100_000).unwrap();
        assert!((g.g[(0, 0)] - Law::Semicircle.cauchy(z)).norm() < 1e-10, "{z}");
    }
}

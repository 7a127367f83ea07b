use freeholder_core::measures::*;
use proptest::prelude::*;

fn empirical() -> impl Strategy<Value = Measure> {
    prop::collection::vec((-3.0f64..3.0, 0.1f64..2.0), 1..30).prop_map(|pts| {
        let (x, w): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        EmpiricalMeasure::new(&x, &w).unwrap().into()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distances_are_metrics(a in empirical(), b in empirical(), c in empirical()) {
        let ab = kolmogorov(&a, &b);
        prop_assert_eq!(kolmogorov(&a, &a), 0.0);
        prop_assert!((ab - kolmogorov(&b, &a)).abs() < 1e-15);
        prop_assert!(ab <= kolmogorov(&a, &c) + kolmogorov(&c, &b) + 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab));
        let l = levy(&a, &b);
        prop_assert!(l <= ab + 1e-6, "levy {l} > kolmogorov {ab}");
        prop_assert!((l - levy(&b, &a)).abs() < 2e-6);
        prop_assert!(l <= levy(&a, &c) + levy(&c, &b) + 4e-6);
    }

    #[test]
    fn bai_bound_dominates(a in empirical(), y in 0.05f64..1.0, big_a in 20.0f64..60.0) {
        let nu: Measure = Law::Semicircle.into();
        let cfg = BaiConfig::new(2.0, big_a, 4.0, y).unwrap();
        let report = bai_bound(&a, &nu, &cfg).unwrap();
        prop_assert!(report.bound >= kolmogorov(&a, &nu) - 1e-12);
    }
}

#[test]
fn laws_have_expected_regularity() {
    let sc = holder_estimate(&Law::Semicircle.into(), None).unwrap();
    assert!((0.9..=1.1).contains(&sc.exponent_estimate), "{}", sc.exponent_estimate);
    let fp = holder_estimate(&Law::FreePoisson.into(), None).unwrap();
    assert!((0.4..=0.6).contains(&fp.exponent_estimate), "{}", fp.exponent_estimate);
}

#[test]
fn rate_fit_recovers_power_laws() {
    let ns = [50.0, 100.0, 200.0, 400.0];
    let d: Vec<f64> = ns.iter().map(|n: &f64| 3.0 * n.powf(-0.5)).collect();
    let fit = rate_fit(&ns, &d).unwrap();
    assert!((fit.slope + 0.5).abs() < 1e-12 && fit.r2 > 1.0 - 1e-12);
    assert!(rate_fit(&ns[..2], &d[..2]).is_err());
}

#[test]
fn uniform_energy() {
    let e = log_energy(&Law::uniform(0.0, 1.0).unwrap().into(), None).unwrap();
    assert!((e - 1.5).abs() < 1e-4, "{e}");
    assert!(entropy_from_energy(e).is_finite());
}

//! Acceptance checks, one line per criterion. Runs as a plain binary
//! (`harness = false`) so the lines always print in order.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use freeholder::commands::cmd_rates;
use freeholder::Config;
use freeholder_core::bounds::{cd_constant, holder_exponent, log_cd_constant, log_factorial, pgue_rate, rate_exponent, Rational};
use freeholder_core::freecalc::{
    poly_moments, schwinger_dyson_sides, spectral_distribution, trace_poly, PipelineOptions, SemicircularFamily,
};
use freeholder_core::linalg::{self, CMatrix};
use freeholder_core::linearize::{approximation_bound, build_representation, MatrixSampleOracle};
use freeholder_core::measures::{
    bai_bound, entropy_from_energy, holder_estimate, jam_bound, kolmogorov, log_energy, rate_fit, tail_integral,
    tail_integral_bound, BaiConfig, Law, Measure,
};
use freeholder_core::ncpoly::{NcPoly, Word};
use freeholder_core::randmat::{default_tail_grid, gue_matrix, mean_eed, sample_gue, tail_decay_check, transport_projection, BlockModel, GueSpec, Model};
use freeholder_core::Complex64;

const SEED: u64 = 1;

// Pinned tolerances.
const MOMENT_TOL: f64 = 1e-3; // relative to max(1, |m_k|)
const PIPELINE_KS_TOL: f64 = 1e-2;
const MC_SIGMAS: f64 = 3.0;
const FP_HOLDER: (f64, f64) = (0.4, 0.6);
const SC_HOLDER: (f64, f64) = (0.9, 1.1);
const UNIFORM_ENERGY_TOL: f64 = 1e-4;
const TRANSPORT_TOL: f64 = 1e-10;
const MIN_R2: f64 = 0.8;

type Outcome = Result<String, String>;

fn p(s: &str) -> NcPoly {
    s.parse().expect("literal polynomial")
}

fn r(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c1_exponents() -> Outcome {
    let h1 = holder_exponent(1).map_err(|e| e.to_string())?;
    let mut bad = Vec::new();
    for d in 1..=10 {
        let lhs = pgue_rate(d).map_err(|e| e.to_string())?;
        let rhs = rate_exponent(holder_exponent(d).unwrap(), 7, 2).unwrap() / 4;
        if lhs != rhs {
            bad.push(d);
        }
    }
    let block = rate_exponent(r(2, 3), 7, 2).map_err(|e| e.to_string())? * 2;
    ensure(
        h1 == r(2, 3) && bad.is_empty() && block == r(4, 35),
        format!("holder_exponent(1) = {h1}, pgue mismatches at d = {bad:?}, block rate = {block}"),
    )
}

fn c2_cd_range() -> Outcome {
    let mut worst = f64::INFINITY;
    for d in 1..=12 {
        let lc = log_cd_constant(d).map_err(|e| e.to_string())?;
        let lf = log_factorial(d);
        worst = worst.min(lc - lf / 8.0).min(lf / 4.0 - lc);
    }
    let c1 = cd_constant(1).map_err(|e| e.to_string())?;
    ensure(worst >= 0.0 && c1 == 1.0, format!("min log-space margin {worst:.3e}, C_1 = {c1}"))
}

fn words(n: u32, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::unit()];
    let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| (1..=n).map(move |j| [w.as_slice(), &[j]].concat())).collect();
        out.extend(layer.iter().cloned().map(Word::new));
    }
    out
}

fn c3_moment_oracle() -> Outcome {
    let fam = SemicircularFamily::new(2);
    let catalan = [1u64, 1, 2, 5, 14, 42, 132, 429, 1430];
    let x1 = p("x1");
    let moments = poly_moments(&x1, &SemicircularFamily::new(1), 16).map_err(|e| e.to_string())?;
    let cat_ok = (0..=8).all(|k| moments[2 * k] == Complex64::new(catalan[k] as f64, 0.0));
    let mut sd_fail = 0;
    let all = words(2, 6);
    for w in &all {
        let m = NcPoly::monomial(2, w.clone(), Complex64::new(1.0, 0.0));
        for j in 1..=2 {
            let (l, rr) = schwinger_dyson_sides(&m, j, &fam).map_err(|e| e.to_string())?;
            if l != rr {
                sd_fail += 1;
            }
        }
    }
    ensure(
        cat_ok && sd_fail == 0,
        format!("Catalan k<=8 exact: {cat_ok}; Schwinger-Dyson failures {sd_fail} of {}", 2 * all.len()),
    )
}

fn c4_pipeline() -> Outcome {
    let opts = PipelineOptions { richardson: true, ..PipelineOptions::default() };
    let mut worst = 0.0f64;
    let mut ks = f64::NAN;
    for s in ["x1", "x1x1", "x1x2 + x2x1"] {
        let q = p(s);
        let fam = SemicircularFamily::new(q.n());
        let sd = spectral_distribution(&q, &opts).map_err(|e| e.to_string())?;
        for k in 1..=6 {
            let exact = trace_poly(&pow(&q, k), &fam).map_err(|e| e.to_string())?.re;
            worst = worst.max((sd.moment(k) - exact).abs() / exact.abs().max(1.0));
        }
        if s == "x1" {
            ks = kolmogorov(&sd.measure(), &Law::Semicircle.into());
        }
    }
    ensure(
        worst <= MOMENT_TOL && ks <= PIPELINE_KS_TOL,
        format!("max relative moment error {worst:.2e} (tol {MOMENT_TOL:.0e}), x1 Kolmogorov {ks:.2e} (tol {PIPELINE_KS_TOL:.0e})"),
    )
}

fn pow(q: &NcPoly, k: u32) -> NcPoly {
    (0..k).fold(NcPoly::one(q.n()), |acc, _| &acc * q)
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, v.sqrt())
}

fn c5_linearization() -> Outcome {
    let (size, reps) = (100, 20);
    let zs: Vec<Complex64> =
        [0.5, 1.0, 2.0].iter().flat_map(|&im| [-2.0, 0.0, 2.0].map(|re| Complex64::new(re, im))).collect();
    let epss = [1e-1, 1e-2, 1e-3, 1e-4];
    let id = CMatrix::identity(size, size);
    let mut violations = 0;
    let mut cells = 0;
    let mut worst_ratio = 0.0f64;
    for s in ["x1", "x1x1", "x1x2 + x2x1"] {
        let q = p(s);
        let rep = build_representation(&q).map_err(|e| e.to_string())?;
        // diffs[cell][rep] = lhs − rhs
        let mut lhs = vec![Vec::with_capacity(reps); zs.len() * epss.len()];
        let mut rhs = vec![Vec::with_capacity(reps); zs.len() * epss.len()];
        for rr in 0..reps as u64 {
            let x = sample_gue(&GueSpec::new(size, q.n(), SEED).unwrap(), rr);
            let samples = [x.clone()];
            let oracle = MatrixSampleOracle { samples: &samples };
            let px = q.evaluate(&x).map_err(|e| e.to_string())?;
            let exact: Vec<Complex64> = zs
                .iter()
                .map(|&z| linalg::normalized_trace(&linalg::inverse(&(&id * z - &px)).unwrap()))
                .collect();
            for (ei, &eps) in epss.iter().enumerate() {
                let k = rep.compressed_resolvent(&x, eps).map_err(|e| e.to_string())?;
                for (zi, &z) in zs.iter().enumerate() {
                    let rec = linalg::normalized_trace(&linalg::inverse(&(&id * z - &k)).map_err(|e| e.to_string())?);
                    let cell = ei * zs.len() + zi;
                    lhs[cell].push((exact[zi] - rec).norm());
                    rhs[cell].push(approximation_bound(&rep, z, eps, &oracle).map_err(|e| e.to_string())?);
                }
            }
        }
        for (l, b) in lhs.iter().zip(&rhs) {
            cells += 1;
            let diff: Vec<f64> = l.iter().zip(b).map(|(a, c)| a - c).collect();
            let (md, sd) = mean_sd(&diff);
            if md > MC_SIGMAS * sd / (reps as f64).sqrt() {
                violations += 1;
            }
            let (ml, _) = mean_sd(l);
            let (mb, _) = mean_sd(b);
            worst_ratio = worst_ratio.max(ml / mb);
        }
    }
    ensure(
        violations == 0,
        format!("{violations} violations over {cells} (poly, z, eps) cells; worst mean lhs/rhs {worst_ratio:.3}"),
    )
}

fn c6_bai() -> Outcome {
    let mut checks = 0;
    let mut violations = 0;
    let mut worst_bai = f64::INFINITY;
    let mut worst_tail = f64::INFINITY;
    let mut run = |mu: &Measure, nu: &Measure, big_b: f64, big_as: [f64; 3]| -> Result<(), String> {
        let dist = kolmogorov(mu, nu);
        for y in [0.1, 0.3, 1.0] {
            for big_a in big_as {
                let cfg = BaiConfig::new(2.0, big_a, big_b, y).map_err(|e| e.to_string())?;
                let bound = bai_bound(mu, nu, &cfg).map_err(|e| e.to_string())?.bound;
                let tail = tail_integral(mu, nu, y, big_a).map_err(|e| e.to_string())?;
                let tail_bound = tail_integral_bound(mu, nu, y, big_a).map_err(|e| e.to_string())?;
                checks += 2;
                violations += usize::from(bound < dist) + usize::from(tail_bound < tail);
                worst_bai = worst_bai.min(bound - dist);
                worst_tail = worst_tail.min(tail_bound - tail);
            }
        }
        Ok(())
    };
    run(&Law::Semicircle.into(), &Law::FreePoisson.into(), 4.5, [25.0, 40.0, 60.0])?;
    let gue = mean_eed(&Model::Block(BlockModel::gue()), 50, 20, SEED).map_err(|e| e.to_string())?;
    run(&gue.into(), &Law::Semicircle.into(), 2.5, [15.0, 25.0, 50.0])?;
    ensure(
        violations == 0,
        format!("{violations} violations of {checks}; min margins bai {worst_bai:.3e}, tail {worst_tail:.3e}"),
    )
}

fn c7_gue_rate() -> Outcome {
    let ladder = [50usize, 100, 200, 400, 800];
    let model = Model::Block(BlockModel::gue());
    let semi: Measure = Law::Semicircle.into();
    let mut ds = Vec::new();
    for &n in &ladder {
        let mu = mean_eed(&model, n, 100, SEED).map_err(|e| e.to_string())?;
        ds.push(kolmogorov(&mu.into(), &semi));
    }
    let ns: Vec<f64> = ladder.iter().map(|&n| n as f64).collect();
    let fit = rate_fit(&ns, &ds).map_err(|e| e.to_string())?;
    let gate = -4.0 / 35.0;
    ensure(
        fit.slope <= gate && fit.r2 >= MIN_R2,
        format!(
            "slope {:.3} (gate <= {gate:.4}), r2 {:.3} (gate >= {MIN_R2}); distances [{}]",
            fit.slope,
            fit.r2,
            ds.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn free_poisson_table() -> Result<Measure, String> {
    let opts = PipelineOptions { richardson: true, ..PipelineOptions::default() };
    Ok(spectral_distribution(&p("x1x1"), &opts).map_err(|e| e.to_string())?.measure())
}

fn c8_holder(fp: &Measure) -> Result<(String, f64, f64), String> {
    let h_fp = holder_estimate(fp, None).map_err(|e| e.to_string())?;
    let h_sc = holder_estimate(&Law::Semicircle.into(), None).map_err(|e| e.to_string())?;
    let guaranteed = *holder_exponent(2).unwrap().numer() as f64 / *holder_exponent(2).unwrap().denom() as f64;
    let (b_fp, b_sc) = (h_fp.exponent_estimate, h_sc.exponent_estimate);
    let ok = (FP_HOLDER.0..=FP_HOLDER.1).contains(&b_fp)
        && b_fp > guaranteed
        && (SC_HOLDER.0..=SC_HOLDER.1).contains(&b_sc);
    let msg = format!("free Poisson exponent {b_fp:.4} (guaranteed {guaranteed:.4}), semicircle exponent {b_sc:.4}");
    if ok {
        Ok((msg, h_fp.constant_estimate, b_fp))
    } else {
        Err(msg)
    }
}

fn c9_energy(fp: &Measure, c: f64, beta: f64) -> Outcome {
    let energy = log_energy(fp, None).map_err(|e| e.to_string())?;
    let bound = jam_bound(c, beta).map_err(|e| e.to_string())?;
    let chi = entropy_from_energy(energy);
    let uniform = log_energy(&Law::uniform(0.0, 1.0).unwrap().into(), None).map_err(|e| e.to_string())?;
    ensure(
        energy <= bound && chi.is_finite() && (uniform - 1.5).abs() <= UNIFORM_ENERGY_TOL,
        format!("I(free Poisson) {energy:.6} <= bound {bound:.4}; entropy {chi:.6}; uniform energy {uniform:.8}"),
    )
}

fn c10_transport() -> Outcome {
    let n = 50;
    let i = Complex64::new(0.0, 1.0);
    let mut worst = 0.0f64;
    for rep in 0..100u64 {
        let y = gue_matrix(n, SEED, rep, 0) + gue_matrix(n, SEED, rep, 1) * i;
        let basis = (gue_matrix(n, SEED, rep, 2) + gue_matrix(n, SEED, rep, 3) * i).qr().q();
        let v = basis.columns(0, 10).into_owned();
        let proj = &v * v.adjoint();
        let q = transport_projection(&y, &proj).map_err(|e| e.to_string())?;
        let dtr = (q.trace() - proj.trace()).norm();
        let dnorm = (linalg::frobenius(&(y.adjoint() * &q)) - linalg::frobenius(&(&y * &proj))).abs();
        worst = worst.max(dtr).max(dnorm);
    }
    ensure(worst <= TRANSPORT_TOL, format!("max deviation {worst:.2e} over 100 instances (tol {TRANSPORT_TOL:.0e})"))
}

fn c11_tail() -> Outcome {
    let rep = tail_decay_check(&BlockModel::gue(), 100, 200, SEED, &default_tail_grid()).map_err(|e| e.to_string())?;
    let max_upper = rep.upper.iter().chain(&rep.lower).cloned().fold(0.0, f64::max);
    ensure(
        rep.violations == 0,
        format!("{} violations on {} t values; largest empirical tail {max_upper:.2e}", rep.violations, rep.t.len()),
    )
}

fn c12_determinism() -> Outcome {
    let dirs = [tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?];
    let mut bytes = Vec::new();
    for d in &dirs {
        let c = Config {
            poly: "x1x2 + x2x1".into(),
            ladder: vec![20, 40, 80],
            replicates: 10,
            out_dir: d.path().to_path_buf(),
            ..Config::default()
        };
        cmd_rates(&c).map_err(|e| e.to_string())?;
        let csv = std::fs::read(d.path().join("rates.csv")).map_err(|e| e.to_string())?;
        let json = std::fs::read(d.path().join("rates.json")).map_err(|e| e.to_string())?;
        bytes.push((csv, json));
    }
    ensure(bytes[0] == bytes[1], format!("rates.csv {} bytes, identical across runs: {}", bytes[0].0.len(), bytes[0] == bytes[1]))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut line = |n: usize, budget: Option<u64>, what: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = f();
        let elapsed = t.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= Duration::from_secs(b));
        let (ok, msg) = match out {
            Ok(m) => (in_time, m),
            Err(m) => (false, m),
        };
        failed += usize::from(!ok);
        println!(
            "{} criterion {n}: {what}: {msg} [{:.2}s{}]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.map(|b| format!(" of {b}s")).unwrap_or_default()
        );
    };
    line(1, Some(1), "exponent arithmetic", &mut c1_exponents);
    line(2, Some(1), "C_d range", &mut c2_cd_range);
    line(3, Some(10), "moment oracle", &mut c3_moment_oracle);
    line(4, Some(120), "pipeline consistency", &mut c4_pipeline);
    line(5, Some(300), "linearization error bound", &mut c5_linearization);
    line(6, Some(120), "smoothing inequality and tail integral", &mut c6_bai);
    line(7, Some(900), "GUE convergence rate", &mut c7_gue_rate);
    let mut fit = None;
    line(8, Some(60), "Holder regularity", &mut || {
        let fp = free_poisson_table()?;
        let (msg, c, b) = c8_holder(&fp)?;
        fit = Some((fp, c, b));
        Ok(msg)
    });
    line(9, Some(60), "energy and entropy", &mut || match &fit {
        Some((m, c, b)) => c9_energy(m, *c, *b),
        _ => Err("needs the Holder fit of criterion 8".into()),
    });
    line(10, Some(30), "projection transport", &mut c10_transport);
    line(11, Some(120), "edge tail decay", &mut c11_tail);
    line(12, None, "determinism", &mut c12_determinism);
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

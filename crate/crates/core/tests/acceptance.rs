use std::io::Write;

use num_complex::Complex64;
use quasifree::asymptotics::{find_symbol_zeros, general_gauge_asymptote};
use quasifree::correlations::{correlation_matrix, gauge_kernel, BlockCache};
use quasifree::entropy::{entropy_scan, entropy_scan_cached, gauge_entropy, majorana_entropy};
use quasifree::finite::{cc_fit, entropy_profile, profile_lengths, saturation_sweep, SaturationOptions};
use quasifree::fit::linear_fit;
use quasifree::oracle::{exact_block_entropy, wick_check};
use quasifree::sampling::{random_gauge_critical, random_model, random_noncritical_nn, random_tuple, Coefficients};
use quasifree::transforms::{
    decouple_direct, direct_entropy, from_majorana, kw_selfdual_reduce, to_majorana, xy_ising_decouple,
};
use quasifree::{classify, Boundary, FiniteChain, ModelSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-12;

fn report(criterion: u32, pass: bool, detail: String) {
    let status = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "acceptance criterion {criterion:>2}: {status}  {detail}").unwrap();
    assert!(pass, "criterion {criterion}: {detail}");
}

fn log_fit(model: &ModelSpec) -> (f64, f64) {
    let ls: Vec<usize> = (64..=512).step_by(32).collect();
    let curve = entropy_scan(model, &ls, TOL).unwrap();
    let x: Vec<f64> = curve.points.iter().map(|p| (p.0 as f64).ln()).collect();
    let y: Vec<f64> = curve.points.iter().map(|p| p.1).collect();
    let f = linear_fit(&x, &y).unwrap();
    (f.slope, f.intercept)
}

#[test]
fn criterion_01_ising_critical_constant() {
    let (a, b) = log_fit(&ModelSpec::nearest_neighbor(1.0, 1.0, 0.0).unwrap());
    let pass = (a - 1.0 / 6.0).abs() < 2e-3 && (b - 0.478558).abs() < 5e-3;
    report(1, pass, format!("a = {a:.6} (1/6 +- 2e-3), b = {b:.6} (0.478558 +- 5e-3)"));
}

#[test]
fn criterion_02_ising_dm_constant() {
    let (a, b) = log_fit(&ModelSpec::nearest_neighbor(1.0, 1.0, 2.0).unwrap());
    let want = (0.75f64).ln() / 12.0 + 0.726067;
    let pass = (a - 1.0 / 3.0).abs() < 3e-3 && (b - want).abs() < 1e-2;
    report(2, pass, format!("a = {a:.6} (1/3 +- 3e-3), b = {b:.6} ({want:.6} +- 1e-2)"));
}

#[test]
fn criterion_03_noncritical_reflection_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut all_gapped = true;
    for _ in 0..20 {
        let (g, h, d) = random_noncritical_nn(&mut rng);
        let m = ModelSpec::nearest_neighbor(g, h, d).unwrap();
        all_gapped &= !classify(&m, 4096).unwrap().critical;
        let real_hop: Vec<Complex64> = m.hop_coeffs().iter().map(|c| Complex64::new(c.re, 0.0)).collect();
        let r = ModelSpec::new(m.range(), real_hop, m.pair_coeffs()[1..].to_vec()).unwrap();
        let c1 = correlation_matrix(&m, 40, TOL).unwrap();
        let c2 = correlation_matrix(&r, 40, TOL).unwrap();
        worst = worst.max((&c1.data - &c2.data).amax());
    }
    report(3, all_gapped && worst < 1e-10, format!("max |C(A) - C(Re A)| = {worst:.3e} (< 1e-10), gapped = {all_gapped}"));
}

#[test]
fn criterion_04_kramers_wannier_halving() {
    let mut worst = 0.0f64;
    for d in [0.5, 2.0] {
        let m = ModelSpec::nearest_neighbor(1.0, 1.0, d).unwrap();
        let red = kw_selfdual_reduce(&m).unwrap();
        for l in [50usize, 100] {
            let diff = (red.entropy(l, TOL).unwrap() - direct_entropy(&m, l, TOL).unwrap()).abs();
            worst = worst.max(diff);
        }
    }
    report(4, worst < 1e-6, format!("max |S_KW - S_direct| = {worst:.3e} (< 1e-6)"));
}

#[test]
fn criterion_05_decoupling_additivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for i in 0..10 {
        let m = random_model(&mut rng, 2 + i % 2, Coefficients::Imaginary);
        let chains = decouple_direct(&m).unwrap();
        let diff = (chains.entropy(20, TOL).unwrap() - direct_entropy(&m, 20, TOL).unwrap()).abs();
        worst = worst.max(diff);
    }
    let xx = ModelSpec::nearest_neighbor(0.0, 0.0, 0.0).unwrap();
    let (t1, t2) = xy_ising_decouple(&to_majorana(&xx)).unwrap();
    let (i1, i2) = (from_majorana(&t1).unwrap(), from_majorana(&t2).unwrap());
    let ising = ModelSpec::nearest_neighbor(1.0, 1.0, 0.0).unwrap();
    let s_xx = direct_entropy(&xx, 200, TOL).unwrap();
    let s_split = direct_entropy(&i1, 100, TOL).unwrap() + direct_entropy(&i2, 100, TOL).unwrap();
    let s_ising = direct_entropy(&ising, 100, TOL).unwrap();
    let xy_dev = (s_xx - s_split).abs().max((s_xx - 2.0 * s_ising).abs());
    report(
        5,
        worst < 1e-9 && xy_dev < 1e-6,
        format!("imaginary models {worst:.3e} (< 1e-9), XY -> 2 x Ising {xy_dev:.3e} (< 1e-6)"),
    );
}

#[test]
fn criterion_06_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut wick = 0.0f64;
    for i in 0..10 {
        let m = random_model(&mut rng, 2 + i % 2, Coefficients::Complex);
        for n in 1..=10usize {
            let bdg = FiniteChain::new(&m, n, Boundary::Open).unwrap().ground_state().unwrap();
            for l in 1..n {
                let exact = exact_block_entropy(&m, n, l, Boundary::Open).unwrap();
                worst = worst.max((exact - bdg.block_entropy(0, l).unwrap()).abs());
            }
        }
        let tuples: Vec<Vec<usize>> = (0..20).map(|_| random_tuple(&mut rng, 8, 4)).collect();
        wick = wick.max(wick_check(&m, 8, Boundary::Open, &tuples).unwrap());
    }
    report(6, worst < 1e-8 && wick < 1e-8, format!("entropy {worst:.3e} (< 1e-8), Wick {wick:.3e} (< 1e-8)"));
}

fn nnn_model() -> ModelSpec {
    ModelSpec::new(
        3,
        vec![Complex64::new(12.0, 0.0), Complex64::new(7.0, 28.0), Complex64::new(4.0, 5.0)],
        vec![Complex64::new(-11.0, 10.0), Complex64::new(-3.0, 4.0)],
    )
    .unwrap()
}

fn profile(n: usize) -> Vec<quasifree::ProfileRow> {
    let chain = FiniteChain::new(&nnn_model(), n, Boundary::Open).unwrap();
    let state = chain.ground_state().unwrap();
    let ls: Vec<usize> = profile_lengths(n, 120)
        .into_iter()
        .filter(|&l| l as f64 >= 0.04 * n as f64 && l as f64 <= 0.96 * n as f64)
        .collect();
    entropy_profile(&state, n, &ls).unwrap()
}

#[test]
fn criterion_07_finite_size_reflection_breaking() {
    let max_ds = |rows: &[quasifree::ProfileRow]| rows.iter().fold(0.0f64, |m, r| m.max(r.delta_s.abs()));
    let p256 = profile(256);
    let p512 = profile(512);
    let p1024 = profile(1024);
    let (d256, d512) = (max_ds(&p256), max_ds(&p512));
    let c256 = cc_fit(&p256, (0.04, 0.96)).unwrap().c;
    let c1024 = cc_fit(&p1024, (0.04, 0.96)).unwrap().c;
    let pass = d256 > 1e-3 && d512 < d256 && (c256 - 1.0).abs() <= 0.06 && (c1024 - 1.0).abs() <= 0.02;
    report(
        7,
        pass,
        format!(
            "max|dS| N=256 {d256:.3e} (> 1e-3), N=512 {d512:.3e}; c_fit N=256 {c256:.4} (+-0.06), N=1024 {c1024:.4} (+-0.02)"
        ),
    );
}

#[test]
fn criterion_08_fisher_hartwig_vs_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let mut decreasing = true;
    for i in 0..5 {
        let r = if i % 2 == 0 { 2 } else { 4 };
        let m = random_gauge_critical(&mut rng, r).unwrap();
        let asym = general_gauge_asymptote(&find_symbol_zeros(&m).unwrap()).unwrap();
        let errs: Vec<f64> = [100usize, 200, 400]
            .iter()
            .map(|&l| {
                let s = gauge_entropy(&gauge_kernel(&m, l, TOL).unwrap()).unwrap().0;
                (s - asym.predict(l as f64)).abs()
            })
            .collect();
        decreasing &= errs.windows(2).all(|w| w[1] < w[0]);
        worst = worst.max(errs[2]);
    }
    report(8, worst < 0.02 && decreasing, format!("max |S(400) - S_FH(400)| = {worst:.3e} (< 0.02), decreasing = {decreasing}"));
}

#[test]
fn criterion_09_saturation_anomaly() {
    let opts = SaturationOptions::default();
    let sat = |d: f64| {
        let m = ModelSpec::nearest_neighbor(1.0, 0.9, d).unwrap();
        quasifree::entropy::saturated_entropy(&m, opts).unwrap().0
    };
    let ddiff = (sat(0.0) - sat(0.5)).abs();
    let hs = [0.98, 0.985, 0.99, 0.995];
    let rows = saturation_sweep(|h| ModelSpec::nearest_neighbor(1.0, h, 0.0), &hs, opts).unwrap();
    let x: Vec<f64> = rows.iter().map(|r| r.xi.ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.s_sat).collect();
    let c = 3.0 * linear_fit(&x, &y).unwrap().slope;
    report(9, ddiff < 1e-10 && (c - 0.5).abs() < 0.05, format!("|S_sat(D=0) - S_sat(D=0.5)| = {ddiff:.3e} (< 1e-10), c = {c:.4} (0.5 +- 0.05)"));
}

#[test]
fn criterion_10_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    let mut dual = 0.0f64;
    let mut ok = true;
    for i in 0..10 {
        let m = random_model(&mut rng, 2 + i % 3, Coefficients::Complex);
        for k in 0..64 {
            let t = -std::f64::consts::PI + k as f64 * std::f64::consts::PI / 32.0;
            let c = m.components(t);
            worst = worst.max((c.delta - (c.a_s * c.a_s + c.b_s * c.b_s + c.b_a * c.b_a)).abs());
            ok &= c.delta >= 0.0;
        }
        if !classify(&m, 4096).unwrap().flat_band {
            let cache = BlockCache::new(&m, TOL).unwrap();
            let c = cache.correlation_matrix(12).unwrap();
            worst = worst.max((&c.data + c.data.transpose()).amax());
            let (s, spec) = majorana_entropy(&c.data).unwrap();
            ok &= spec.values.iter().all(|&v| (0.0..=1.0).contains(&v));
            let again = entropy_scan_cached(&cache, &[12]).unwrap().points[0].1;
            ok &= again == s;
        }
        let gauge = ModelSpec::new(m.range(), m.hop_coeffs().to_vec(), vec![]).unwrap();
        if classify(&gauge, 4096).map(|p| !p.flat_band).unwrap_or(false) {
            let s1 = gauge_entropy(&gauge_kernel(&gauge, 16, TOL).unwrap()).unwrap().0;
            let s2 = direct_entropy(&gauge, 16, TOL).unwrap();
            dual = dual.max((s1 - s2).abs());
        }
    }
    report(
        10,
        ok && worst < 1e-10 && dual < 1e-9,
        format!("symbol and antisymmetry defect {worst:.3e} (< 1e-10), dual-path {dual:.3e} (< 1e-9), invariants ok = {ok}"),
    );
}

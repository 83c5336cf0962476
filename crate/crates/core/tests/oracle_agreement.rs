use num_complex::Complex64;
use quasifree::correlations::{correlation_matrix, finite_correlations, FILL_NEGATIVE_MODES};
use quasifree::oracle::{exact_block_entropy, wick_check, SpinHamiltonian};
use quasifree::sampling::{random_model, random_tuple, Coefficients};
use quasifree::{Boundary, FiniteChain, ModelSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ising(h: f64) -> ModelSpec {
    ModelSpec::nearest_neighbor(1.0, h, 0.0).unwrap()
}

/// `(<b+_j b_l>, <b_j b_l>)` from exact Majorana expectations.
fn exact_fermion_two_point(gs: &quasifree::oracle::ExactGroundState, j: usize, l: usize) -> (Complex64, Complex64) {
    let i = Complex64::new(0.0, 1.0);
    let mm = |a: usize, b: usize| gs.majorana_expectation(&[a, b]);
    // b = (m_{2j} - i m_{2j+1}) / 2, b+ = (m_{2j} + i m_{2j+1}) / 2
    let (x, y, u, v) = (2 * j, 2 * j + 1, 2 * l, 2 * l + 1);
    let hop = (mm(x, u) - i * mm(x, v) + i * mm(y, u) + mm(y, v)) * 0.25;
    let pair = (mm(x, u) - i * mm(x, v) - i * mm(y, u) - mm(y, v)) * 0.25;
    (hop, pair)
}

#[test]
fn filling_convention_matches_exact_periodic_ising() {
    assert!(FILL_NEGATIVE_MODES);
    let m = ising(0.5);
    let n = 8;
    let gs = SpinHamiltonian::new(&m, n, Boundary::Periodic).unwrap().ground_state();
    let f = finite_correlations(&m, n).unwrap();
    for j in 0..n {
        for l in 0..n {
            let (hop, pair) = exact_fermion_two_point(&gs, j, l);
            assert!((hop - f.hop[(j, l)]).norm() < 1e-8, "hop {j} {l}: {hop} vs {}", f.hop[(j, l)]);
            assert!((pair - f.pair[(j, l)]).norm() < 1e-8, "pair {j} {l}: {pair} vs {}", f.pair[(j, l)]);
        }
    }
}

#[test]
fn discrete_sums_match_exact_for_complex_model() {
    let m = ModelSpec::new(
        3,
        vec![Complex64::new(2.2, 0.0), Complex64::new(0.3, 0.4), Complex64::new(-0.2, 0.1)],
        vec![Complex64::new(0.5, -0.3), Complex64::new(0.2, 0.25)],
    )
    .unwrap();
    let n = 7;
    let gs = SpinHamiltonian::new(&m, n, Boundary::Periodic).unwrap().ground_state();
    let f = finite_correlations(&m, n).unwrap();
    for j in 0..n {
        for l in 0..n {
            let (hop, pair) = exact_fermion_two_point(&gs, j, l);
            assert!((hop - f.hop[(j, l)]).norm() < 1e-8);
            assert!((pair - f.pair[(j, l)]).norm() < 1e-8);
        }
    }
}

#[test]
fn ising_four_site_block_matches_finite_chain() {
    let m = ising(0.5);
    let exact = exact_block_entropy(&m, 8, 4, Boundary::Open).unwrap();
    let bdg = FiniteChain::new(&m, 8, Boundary::Open).unwrap().ground_state().unwrap();
    assert!((exact - bdg.block_entropy(0, 4).unwrap()).abs() < 1e-8);
}

#[test]
fn finite_chain_majorana_moments_match_exact() {
    let m = ising(0.5);
    let n = 8;
    let gs = SpinHamiltonian::new(&m, n, Boundary::Open).unwrap().ground_state();
    let bdg = FiniteChain::new(&m, n, Boundary::Open).unwrap().ground_state().unwrap();
    let two = |a: usize, b: usize| {
        let d = if a == b { 1.0 } else { 0.0 };
        Complex64::new(d, bdg.gamma[(a, b)])
    };
    for a in 0..2 * n {
        for b in 0..2 * n {
            assert!((gs.majorana_expectation(&[a, b]) - two(a, b)).norm() < 1e-8);
        }
    }
    for a in 0..2 * n {
        for b in a + 1..2 * n {
            for c in b + 1..2 * n {
                for d in c + 1..2 * n {
                    let t = [a, b, c, d];
                    let w = quasifree::oracle::wick_value(&two, &t);
                    assert!((gs.majorana_expectation(&t) - w).norm() < 1e-8, "{t:?}");
                }
            }
        }
    }
}

#[test]
fn zero_field_ising_pairs_neighbouring_sites() {
    let m = ising(0.0);
    let c = correlation_matrix(&m, 2, 1e-12).unwrap();
    let gs = SpinHamiltonian::new(&m, 8, Boundary::Open).unwrap().ground_state();
    assert!(c.data[(0, 1)].abs() < 1e-12);
    assert!((c.data[(1, 2)].abs() - 1.0).abs() < 1e-10);
    let exact = gs.majorana_expectation(&[7, 8]);
    assert!((exact.im - c.data[(1, 2)]).abs() < 1e-10);
}

#[test]
fn polarized_single_site_block() {
    let m = ModelSpec::real(&[1.0], &[]).unwrap();
    let c = correlation_matrix(&m, 1, 1e-12).unwrap();
    let gs = SpinHamiltonian::new(&m, 8, Boundary::Open).unwrap().ground_state();
    assert!((c.data[(0, 1)].abs() - 1.0).abs() < 1e-12);
    assert!((gs.majorana_expectation(&[4, 5]).im - c.data[(0, 1)]).abs() < 1e-12);
}

#[test]
fn many_body_spectrum_is_free_fermion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [3usize, 5, 8] {
        let m = random_model(&mut rng, 2, Coefficients::Complex);
        for bc in [Boundary::Open, Boundary::Periodic] {
            if bc == Boundary::Periodic && n < 4 {
                continue;
            }
            let Ok(bdg) = FiniteChain::new(&m, n, bc).unwrap().ground_state() else { continue };
            let mut free = vec![bdg.ground_energy];
            for &e in &bdg.energies {
                let shifted: Vec<f64> = free.iter().map(|x| x + e).collect();
                free.extend(shifted);
            }
            free.sort_by(f64::total_cmp);
            let exact = SpinHamiltonian::new(&m, n, bc).unwrap().spectrum();
            assert_eq!(exact.len(), free.len());
            let dev = exact.iter().zip(&free).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(dev < 1e-8, "n = {n} {bc:?}: {dev:e}");
        }
    }
}

#[test]
fn random_wick_tuples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m = random_model(&mut rng, 3, Coefficients::Complex);
    let mut tuples: Vec<Vec<usize>> = (0..20).map(|_| random_tuple(&mut rng, 8, 4)).collect();
    tuples.extend((0..5).map(|_| random_tuple(&mut rng, 8, 6)));
    assert!(wick_check(&m, 8, Boundary::Open, &tuples).unwrap() < 1e-8);
}

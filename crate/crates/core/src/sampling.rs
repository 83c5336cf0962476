//! Random models for property checks and sweeps.

use num_complex::Complex64;
use rand::Rng;

use crate::asymptotics::find_symbol_zeros;
use crate::error::Result;
use crate::model::ModelSpec;
use crate::phase::angle_dist;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    Real,
    Complex,
    /// Purely imaginary `A` and `B` (so `hop[0] = 0`).
    Imaginary,
}

fn coefficient<R: Rng + ?Sized>(rng: &mut R, kind: Coefficients) -> Complex64 {
    let mut u = || rng.random_range(-1.0..1.0);
    match kind {
        Coefficients::Real => Complex64::new(u(), 0.0),
        Coefficients::Complex => Complex64::new(u(), u()),
        Coefficients::Imaginary => Complex64::new(0.0, u()),
    }
}

/// Model with all coefficients drawn from the unit box.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, range: usize, kind: Coefficients) -> ModelSpec {
    let hop0 = match kind {
        Coefficients::Imaginary => 0.0,
        _ => rng.random_range(-1.0..1.0),
    };
    let mut hop = vec![Complex64::new(hop0, 0.0)];
    hop.extend((1..range).map(|_| coefficient(rng, kind)));
    let pair = (1..range).map(|_| coefficient(rng, kind)).collect();
    ModelSpec::new(range, hop, pair).expect("sampled coefficients are valid")
}

/// Nearest-neighbour parameters `(gamma, h, D)` with `D' < 1` and `|h|` away from 1.
pub fn random_noncritical_nn<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64, f64) {
    let gamma = rng.random_range(0.2..1.0);
    let d = rng.random_range(-0.9..0.9) * gamma;
    let h = loop {
        let h: f64 = rng.random_range(-2.0..2.0);
        if (h.abs() - 1.0).abs() > 0.1 {
            break h;
        }
    };
    (gamma, h, d)
}

/// Gauge-invariant model whose symbol has exactly `zeros` simple zeros,
/// pairwise at least `0.3` apart.
pub fn random_gauge_critical<R: Rng + ?Sized>(rng: &mut R, zeros: usize) -> Result<ModelSpec> {
    let range = zeros / 2 + 1;
    loop {
        let model = random_model(rng, range, Coefficients::Complex);
        let model = ModelSpec::new(range, model.hop_coeffs().to_vec(), vec![])?;
        let Ok(jumps) = find_symbol_zeros(&model) else { continue };
        let z = &jumps.zeros;
        if z.len() != zeros {
            continue;
        }
        let separated = (0..z.len()).all(|i| angle_dist(z[i], z[(i + 1) % z.len()]) > 0.3);
        let steep = z.iter().all(|&t| {
            let e = 1e-4;
            ((model.a_symbol(t + e) - model.a_symbol(t - e)) / (2.0 * e)).abs() > 0.2
        });
        if separated && steep {
            return Ok(model);
        }
    }
}

/// Majorana index tuple of length `len` for an `n`-site chain.
pub fn random_tuple<R: Rng + ?Sized>(rng: &mut R, n: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.random_range(0..2 * n)).collect()
}

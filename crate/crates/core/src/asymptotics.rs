//! Large-L entropy asymptotics of gauge-invariant critical chains.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::phase::{angle_dist, bisect};
use crate::transforms::kw_selfdual_reduce;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;
pub const I3: f64 = 0.022_160_3;

const N_MAX: usize = 100_000;

/// Jump points of a piecewise constant symbol `sign A(theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpData {
    /// Sorted zeros in `(0, 2pi]`.
    pub zeros: Vec<f64>,
    /// Whether `A -> -A` was applied to make `A(0) > 0`.
    pub flipped: bool,
}

impl JumpData {
    pub fn r(&self) -> usize {
        self.zeros.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoteResult {
    pub slope: f64,
    pub constant: f64,
    /// Imaginary part left after summing the logarithms.
    pub residue: f64,
}

impl AsymptoteResult {
    pub fn predict(&self, l: f64) -> f64 {
        self.slope * l.ln() + self.constant
    }
}

/// `ln G(1+z)` from the product formula with a zeta-function tail.
pub fn barnes_g_log_complex(z: Complex64) -> Result<Complex64> {
    let w = z + 1.0;
    if w.im == 0.0 && w.re <= 0.0 && w.re.fract() == 0.0 {
        return Err(Error::Domain(format!("G vanishes at {}", w.re)));
    }
    let z2 = z * z;
    let mut s = z * (2.0 * PI).ln() / 2.0 - z * (z + 1.0) / 2.0 - z2 * EULER_GAMMA / 2.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=N_MAX {
        let nf = n as f64;
        let u = z / nf;
        let term = if u.norm() < 1e-2 {
            // n ln(1+u) - z + z^2/(2n) = n sum_{k>=3} (-1)^{k+1} u^k / k
            let mut t = Complex64::new(0.0, 0.0);
            let mut p = u * u * u;
            let mut k = 3.0;
            while p.norm() > 1e-20 * (1.0 + t.norm()) || k < 5.0 {
                let sign = if (k as i64) % 2 == 1 { 1.0 } else { -1.0 };
                t += p * (sign / k);
                p *= u;
                k += 1.0;
            }
            t * nf
        } else {
            (u + 1.0).ln() * nf - z + z2 / (2.0 * nf)
        };
        acc += term;
    }
    // tail: sum_{k>=3} (-1)^{k+1} z^k / k * zeta_N(k-1)
    let nf = N_MAX as f64;
    let zeta_tail = |s: f64| nf.powf(1.0 - s) / (s - 1.0) - 0.5 * nf.powf(-s) + s / 12.0 * nf.powf(-s - 1.0);
    let mut p = z * z * z;
    for k in 3..12 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        acc += p * (sign / k as f64 * zeta_tail(k as f64 - 1.0));
        p *= z;
    }
    s += acc;
    Ok(s)
}

/// `ln |G(1+z)|` for real `z`.
pub fn barnes_g_log(z: f64) -> Result<f64> {
    Ok(barnes_g_log_complex(Complex64::new(z, 0.0))?.re)
}

/// Simple sign changes of `A(theta)` of a gauge-invariant model.
pub fn find_symbol_zeros(model: &ModelSpec) -> Result<JumpData> {
    if !model.is_gauge_invariant() {
        return Err(Error::NotGaugeInvariant);
    }
    let flipped = model.a_symbol(0.0) < 0.0;
    let sgn = if flipped { -1.0 } else { 1.0 };
    let a = |t: f64| sgn * model.a_symbol(t);
    let hop = model.hop_coeffs();
    let mut m = hop.len() - 1;
    while m > 0 && hop[m].norm() == 0.0 {
        m -= 1;
    }
    if m == 0 {
        return if hop[0].re == 0.0 { Err(Error::FlatBand) } else { Ok(JumpData { zeros: vec![], flipped }) };
    }
    // p(w) = sum_{n=-m}^{m} A_{0,n} w^{n+m} with w = exp(-i theta)
    let deg = 2 * m;
    let coeff = |k: usize| model.a(k as i64 - m as i64);
    let lead = coeff(deg);
    let mut comp = DMatrix::from_element(deg, deg, Complex64::new(0.0, 0.0));
    for i in 1..deg {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeff(i) / lead;
    }
    let roots = comp
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("companion matrix eigenvalues failed".into()))?;
    let mut cand: Vec<f64> = roots
        .iter()
        .filter(|w| (w.norm() - 1.0).abs() < 1e-6)
        .map(|w| (-w.arg()).rem_euclid(2.0 * PI))
        .collect();
    cand.sort_by(f64::total_cmp);
    let mut merged: Vec<f64> = Vec::new();
    for c in cand {
        if merged.last().is_some_and(|&p| angle_dist(p, c) < 1e-6) {
            return Err(Error::NonSimpleZero { theta: c });
        }
        merged.push(c);
    }
    if merged.len() >= 2 && angle_dist(merged[0], *merged.last().unwrap()) < 1e-6 {
        return Err(Error::NonSimpleZero { theta: merged[0] });
    }
    let delta = 1e-7;
    let mut zeros = Vec::new();
    for c in merged {
        let (lo, hi) = (c - delta, c + delta);
        if a(lo) * a(hi) >= 0.0 {
            return Err(Error::NonSimpleZero { theta: c });
        }
        let z = bisect(&a, lo, hi).rem_euclid(2.0 * PI);
        zeros.push(if z == 0.0 { 2.0 * PI } else { z });
    }
    zeros.sort_by(f64::total_cmp);
    Ok(JumpData { zeros, flipped })
}

/// Entropy asymptote `S_L = (R/6) ln L + const` for a step symbol with jumps at `zeros`.
pub fn general_gauge_asymptote(jumps: &JumpData) -> Result<AsymptoteResult> {
    let r = jumps.r();
    if r == 0 {
        return Err(Error::NonCritical);
    }
    if r % 2 != 0 {
        return Err(Error::Precondition(format!("odd number of jumps {r}")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let w = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, jumps.zeros[j] - jumps.zeros[i]);
            let sign = if (i + j) % 2 == 0 { -1.0 } else { 1.0 };
            sum += w.ln() * sign;
        }
    }
    let sum = sum / 6.0;
    if sum.im.abs() > 1e-12 {
        return Err(Error::Numerical(format!("imaginary residue {:e}", sum.im)));
    }
    let rf = r as f64;
    Ok(AsymptoteResult {
        slope: rf / 6.0,
        constant: sum.re + rf / 6.0 * (1.0 + EULER_GAMMA) - rf * 2f64.ln() * I3,
        residue: sum.im,
    })
}

/// Reflection-symmetric form, from the zeros in `(0, pi)`.
///
/// The pairing `+-theta_r` is taken with the diagonal `r = s` excluded and
/// the `I_3` term carrying `R ln 2`, which reproduces the general formula.
pub fn keating_mezzadri_asymptote(half_zeros: &[f64]) -> Result<AsymptoteResult> {
    if half_zeros.is_empty() {
        return Err(Error::NonCritical);
    }
    if half_zeros.iter().any(|&t| !(t > 0.0 && t < PI)) {
        return Err(Error::Precondition("zeros must lie strictly inside (0, pi)".into()));
    }
    let mut th = half_zeros.to_vec();
    th.sort_by(f64::total_cmp);
    let r = 2 * th.len();
    let rf = r as f64;
    let mut k = 1.0 + EULER_GAMMA;
    for &t in &th {
        k += 2.0 / rf * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * t)).norm().ln();
    }
    for i in 0..th.len() {
        for j in 0..i {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let num = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, th[i] - th[j])).norm();
            let den = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, th[i] + th[j])).norm();
            k -= 4.0 / rf * sign * (num / den).ln();
        }
    }
    Ok(AsymptoteResult {
        slope: rf / 6.0,
        constant: rf / 6.0 * k - rf * 2f64.ln() * I3,
        residue: 0.0,
    })
}

/// Zeros of a symmetric jump set restricted to `(0, pi)`.
pub fn symmetric_half(jumps: &JumpData) -> Result<Vec<f64>> {
    let half: Vec<f64> = jumps.zeros.iter().copied().filter(|&t| t > 0.0 && t < PI).collect();
    let paired = jumps.zeros.iter().all(|&t| {
        t > 0.0 && t < 2.0 * PI && t != PI && jumps.zeros.iter().any(|&u| angle_dist(u, -t) < 1e-9)
    });
    if !paired || 2 * half.len() != jumps.r() {
        return Err(Error::Precondition("zero set is not reflection symmetric".into()));
    }
    Ok(half)
}

/// Critical Ising-DM line (`gamma = h = 1`).
pub fn ising_dm_entropy(d: f64) -> AsymptoteResult {
    if d.abs() > 1.0 {
        AsymptoteResult {
            slope: 1.0 / 3.0,
            constant: (1.0 - 1.0 / (d * d)).ln() / 12.0 + c_isdm(),
            residue: 0.0,
        }
    } else {
        AsymptoteResult { slope: 1.0 / 6.0, constant: c_is(), residue: 0.0 }
    }
}

/// `C_Is = (1 + gamma_E)/6 + (1/3 - I_3) ln 2`.
pub fn c_is() -> f64 {
    (1.0 + EULER_GAMMA) / 6.0 + (1.0 / 3.0 - I3) * 2f64.ln()
}

/// `C_IsDM = (1 + gamma_E + (1 - 6 I_3) ln 2) / 3`.
pub fn c_isdm() -> f64 {
    (1.0 + EULER_GAMMA + (1.0 - 6.0 * I3) * 2f64.ln()) / 3.0
}

/// Same quantity through the Kramers-Wannier dual of the nearest-neighbour model.
pub fn ising_dm_entropy_dual(d: f64) -> Result<AsymptoteResult> {
    let model = ModelSpec::nearest_neighbor(1.0, 1.0, d)?;
    let red = kw_selfdual_reduce(&model)?;
    let g = general_gauge_asymptote(&find_symbol_zeros(&red.reduced)?)?;
    Ok(AsymptoteResult {
        slope: 0.5 * g.slope,
        constant: 0.5 * (g.constant + g.slope * 2f64.ln()),
        residue: g.residue,
    })
}

/// Fisher-Hartwig value of `ln det T_L[lambda + sign A]` for real `lambda > 1`.
pub fn fisher_hartwig_log_det(jumps: &JumpData, lambda: f64, l: usize) -> Result<Complex64> {
    if lambda <= 1.0 {
        return Err(Error::Precondition("lambda must exceed 1".into()));
    }
    let z = &jumps.zeros;
    let r = z.len();
    let mut plus = 0.0;
    for i in 0..r {
        let a = z[i];
        let b = if i + 1 < r { z[i + 1] } else { z[0] + 2.0 * PI };
        if arc_sign(i) > 0.0 {
            plus += b - a;
        }
    }
    let fp = plus / (2.0 * PI);
    let mean = fp * (lambda + 1.0).ln() + (1.0 - fp) * (lambda - 1.0).ln();
    let beta = Complex64::new(0.0, -((lambda + 1.0) / (lambda - 1.0)).ln() / (2.0 * PI));
    let b2 = beta * beta;
    let mut cross = Complex64::new(0.0, 0.0);
    for i in 0..r {
        for j in 0..r {
            if i != j {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                let w = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, z[i] - z[j]);
                cross += w.ln() * sign;
            }
        }
    }
    let g = barnes_g_log_complex(beta)? + barnes_g_log_complex(-beta)?;
    let lf = l as f64;
    Ok(Complex64::new(lf * mean, 0.0) - b2 * (r as f64) * lf.ln() + b2 * cross + g * r as f64)
}

/// Sign of the normalised symbol on the arc following zero `i`.
fn arc_sign(i: usize) -> f64 {
    if i % 2 == 0 {
        -1.0
    } else {
        1.0
    }
}

/// Direct `ln det T_L[lambda + sign A]` from exact Fourier coefficients of the step symbol.
pub fn step_toeplitz_log_det(jumps: &JumpData, lambda: f64, l: usize) -> Result<Complex64> {
    let z = &jumps.zeros;
    let r = z.len();
    let coef = |k: i64| -> Complex64 {
        let mut c = Complex64::new(0.0, 0.0);
        for i in 0..r {
            let a = z[i];
            let b = if i + 1 < r { z[i + 1] } else { z[0] + 2.0 * PI };
            let s = arc_sign(i);
            if k == 0 {
                c += Complex64::new(s * (b - a) / (2.0 * PI), 0.0);
            } else {
                let kf = k as f64;
                let e = Complex64::from_polar(1.0, -kf * a) - Complex64::from_polar(1.0, -kf * b);
                c += e * s / Complex64::new(0.0, 2.0 * PI * kf);
            }
        }
        if r == 0 {
            c = Complex64::new(1.0, 0.0);
        }
        c
    };
    let t = DMatrix::from_fn(l, l, |i, j| {
        let c = coef(i as i64 - j as i64);
        if i == j { c + lambda } else { c }
    });
    let lu = t.lu();
    let u = lu.u();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..l {
        s += u[(i, i)].ln();
    }
    let p = lu.p();
    if p.determinant::<f64>() < 0.0 {
        s += Complex64::new(0.0, PI);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barnes_special_values() {
        assert!(barnes_g_log(0.0).unwrap().abs() < 1e-12);
        assert!(barnes_g_log(1.0).unwrap().abs() < 1e-10);
        assert!((barnes_g_log(3.0).unwrap() - 2f64.ln()).abs() < 1e-10);
        assert!(barnes_g_log(-1.0).is_err());
        assert!(barnes_g_log(-2.0).is_err());
    }

    #[test]
    fn xx_zeros() {
        for h in [0.0, 1.0, -1.5] {
            let m = ModelSpec::real(&[-h, 1.0], &[]).unwrap();
            let j = find_symbol_zeros(&m).unwrap();
            let t = (h / 2.0f64).acos();
            assert_eq!(j.r(), 2);
            assert!((j.zeros[0] - t).abs() < 1e-13);
            assert!((j.zeros[1] - (2.0 * PI - t)).abs() < 1e-13);
        }
        let gapped = ModelSpec::real(&[-3.0, 1.0], &[]).unwrap();
        assert_eq!(find_symbol_zeros(&gapped).unwrap().r(), 0);
        let touching = ModelSpec::real(&[-2.0, 1.0], &[]).unwrap();
        assert!(find_symbol_zeros(&touching).is_err());
    }

    #[test]
    fn ising_dm_dual_zeros() {
        let red = kw_selfdual_reduce(&ModelSpec::nearest_neighbor(1.0, 1.0, 2.0).unwrap()).unwrap();
        let j = find_symbol_zeros(&red.reduced).unwrap();
        let want = [PI / 3.0, PI, 5.0 * PI / 3.0, 2.0 * PI];
        assert_eq!(j.r(), 4);
        for (a, b) in j.zeros.iter().zip(want.iter()) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn ising_constants() {
        assert!((c_is() - 0.478558).abs() < 1e-6);
        let c = ising_dm_entropy(1e9).constant;
        assert!((c - 0.726067).abs() < 1e-6);
        let c2 = ising_dm_entropy(2.0).constant;
        assert!((c2 - 0.702093).abs() < 1e-6);
        for d in [0.0, 0.5, 2.0, 3.0, -2.5] {
            let a = ising_dm_entropy(d);
            let b = ising_dm_entropy_dual(d).unwrap();
            assert_eq!(a.slope, b.slope);
            assert!((a.constant - b.constant).abs() < 1e-9, "D = {d}");
        }
    }

    #[test]
    fn keating_mezzadri_matches_general() {
        for half in [vec![PI / 2.0], vec![PI / 3.0], vec![0.4, 2.1], vec![0.3, 1.0, 2.5]] {
            let mut zeros: Vec<f64> = half.iter().flat_map(|&t| [t, 2.0 * PI - t]).collect();
            zeros.sort_by(f64::total_cmp);
            let g = general_gauge_asymptote(&JumpData { zeros, flipped: false }).unwrap();
            let k = keating_mezzadri_asymptote(&half).unwrap();
            assert_eq!(g.slope, k.slope);
            assert!((g.constant - k.constant).abs() < 1e-9, "{half:?}");
        }
    }

    #[test]
    fn doubling_adds_log_two() {
        let a = keating_mezzadri_asymptote(&[1.0]).unwrap();
        assert!((a.predict(200.0) - a.predict(100.0) - a.slope * 2f64.ln()).abs() < 1e-14);
    }
}

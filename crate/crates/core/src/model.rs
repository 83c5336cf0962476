//! Translation-invariant quadratic fermion Hamiltonians and their symbols.
//!
//! A model is `H = sum A_ij b+_i b_j + 1/2 B_ij b+_i b+_j - 1/2 conj(B_ij) b_i b_j`
//! with `A_{i,j} = hop[j-i]` and `B_{i,j} = pair[j-i]` for `j >= i`.

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    range: usize,
    hop: Vec<Complex64>,
    pair: Vec<Complex64>,
}

/// Symbol components at one angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolComponents {
    pub theta: f64,
    pub a_s: f64,
    pub a_a: f64,
    pub b_s: f64,
    pub b_a: f64,
    pub delta: f64,
    pub lambda: f64,
    pub lambda_neg: f64,
    pub m: f64,
    pub p: f64,
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl ModelSpec {
    /// `hop[l]` for `l = 0..range`, `pair[l-1]` for `l = 1..range`.
    /// Shorter vectors are padded with zeros.
    pub fn new(range: usize, hop: Vec<Complex64>, pair: Vec<Complex64>) -> Result<Self> {
        if range < 1 {
            return Err(Error::InvalidModel("range must be at least 1".into()));
        }
        if hop.len() > range {
            return Err(Error::InvalidModel(format!(
                "{} hopping coefficients exceed range {range}",
                hop.len()
            )));
        }
        if pair.len() + 1 > range {
            return Err(Error::InvalidModel(format!(
                "{} pairing coefficients exceed range {range}",
                pair.len()
            )));
        }
        let all = hop.iter().chain(pair.iter());
        if all.clone().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidModel("coefficients must be finite".into()));
        }
        let mut h = vec![Complex64::new(0.0, 0.0); range];
        h[..hop.len()].copy_from_slice(&hop);
        if h[0].im != 0.0 {
            return Err(Error::InvalidModel(format!(
                "hop[0] = {} must be real for a hermitian Hamiltonian",
                h[0]
            )));
        }
        let mut p = vec![Complex64::new(0.0, 0.0); range];
        p[1..=pair.len()].copy_from_slice(&pair);
        Ok(Self {
            range,
            hop: h,
            pair: p,
        })
    }

    /// Convenience constructor from real coefficients.
    pub fn real(hop: &[f64], pair: &[f64]) -> Result<Self> {
        let range = hop.len().max(pair.len() + 1).max(1);
        Self::new(
            range,
            hop.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            pair.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Nearest-neighbour XY chain with field and Dzyaloshinskii-Moriya term.
    ///
    /// The dispersion is `Lambda/2 = D sin t + sqrt((cos t - h)^2 + gamma^2 sin^2 t)`,
    /// critical on `|h| = 1` and for `h^2 < D^2 + 1 - gamma^2` once that exceeds one.
    pub fn nearest_neighbor(gamma: f64, h: f64, d: f64) -> Result<Self> {
        Self::new(
            2,
            vec![Complex64::new(-2.0 * h, 0.0), Complex64::new(1.0, -d)],
            vec![Complex64::new(gamma, 0.0)],
        )
    }

    /// Chain with a conserved current: `J (xx + yy) + h (z + xy - yx)` plus a
    /// next-nearest three-spin term of strength `lambda`, at half scale.
    pub fn current_carrying(j: f64, h: f64, lambda: f64) -> Result<Self> {
        Self::new(
            3,
            vec![
                Complex64::new(-h, 0.0),
                Complex64::new(j, -h),
                Complex64::new(0.0, lambda),
            ],
            vec![],
        )
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn hop_coeffs(&self) -> &[Complex64] {
        &self.hop
    }

    /// Pairing coefficients for `l = 1..range` (index 0 is always zero).
    pub fn pair_coeffs(&self) -> &[Complex64] {
        &self.pair
    }

    /// `A_{0,n}` for any integer offset.
    pub fn a(&self, n: i64) -> Complex64 {
        let k = n.unsigned_abs() as usize;
        if k >= self.range {
            return Complex64::new(0.0, 0.0);
        }
        if n >= 0 {
            self.hop[k]
        } else {
            self.hop[k].conj()
        }
    }

    /// `B_{0,n}` for any integer offset.
    pub fn b(&self, n: i64) -> Complex64 {
        let k = n.unsigned_abs() as usize;
        if k >= self.range {
            return Complex64::new(0.0, 0.0);
        }
        if n >= 0 {
            self.pair[k]
        } else {
            -self.pair[k]
        }
    }

    pub fn is_gauge_invariant(&self) -> bool {
        self.pair.iter().all(|c| c.norm() == 0.0)
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.hop
            .iter()
            .chain(self.pair.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Spatially reflected model, `A -> A^T`, `B -> B^T`.
    pub fn reflected(&self) -> Self {
        Self {
            range: self.range,
            hop: self.hop.iter().map(|c| c.conj()).collect(),
            pair: self.pair.iter().map(|c| -c).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            range: self.range,
            hop: self.hop.iter().map(|c| c * s).collect(),
            pair: self.pair.iter().map(|c| c * s).collect(),
        }
    }

    /// `A(theta) = sum_n exp(-i n theta) A_{0,n}`, real.
    pub fn a_symbol(&self, theta: f64) -> f64 {
        let mut s = self.hop[0].re;
        for n in 1..self.range {
            let (sn, cn) = (n as f64 * theta).sin_cos();
            s += 2.0 * (self.hop[n].re * cn + self.hop[n].im * sn);
        }
        s
    }

    /// `B(theta) = sum_n exp(-i n theta) B_{0,n}`, odd in theta.
    pub fn b_symbol(&self, theta: f64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for n in 1..self.range {
            s += self.pair[n] * Complex64::new(0.0, -2.0 * (n as f64 * theta).sin());
        }
        s
    }

    pub fn components(&self, theta: f64) -> SymbolComponents {
        let mut a_s = 2.0 * self.hop[0].re;
        let (mut a_a, mut b_s, mut b_a) = (0.0, 0.0, 0.0);
        for n in 1..self.range {
            let (sn, cn) = (n as f64 * theta).sin_cos();
            a_s += 4.0 * self.hop[n].re * cn;
            a_a -= 4.0 * self.hop[n].im * sn;
            b_s += 4.0 * self.pair[n].im * sn;
            b_a -= 4.0 * self.pair[n].re * sn;
        }
        let delta = a_s * a_s + b_s * b_s + b_a * b_a;
        let root = delta.sqrt();
        let lambda = 0.5 * (a_a + root);
        let lambda_neg = 0.5 * (-a_a + root);
        let (s1, s2) = (sgn(lambda), sgn(lambda_neg));
        SymbolComponents {
            theta,
            a_s,
            a_a,
            b_s,
            b_a,
            delta,
            lambda,
            lambda_neg,
            m: 0.5 * (s1 - s2),
            p: 0.5 * (s1 + s2),
        }
    }

    /// Quasiparticle dispersion `Lambda(theta)`.
    pub fn lambda(&self, theta: f64) -> f64 {
        self.components(theta).lambda
    }

    /// `Delta(theta)` and its derivative.
    pub fn delta_with_derivative(&self, theta: f64) -> (f64, f64) {
        let mut a_s = 2.0 * self.hop[0].re;
        let (mut b_s, mut b_a) = (0.0, 0.0);
        let (mut da_s, mut db_s, mut db_a) = (0.0, 0.0, 0.0);
        for n in 1..self.range {
            let nf = n as f64;
            let (sn, cn) = (nf * theta).sin_cos();
            a_s += 4.0 * self.hop[n].re * cn;
            b_s += 4.0 * self.pair[n].im * sn;
            b_a -= 4.0 * self.pair[n].re * sn;
            da_s -= 4.0 * nf * self.hop[n].re * sn;
            db_s += 4.0 * nf * self.pair[n].im * cn;
            db_a -= 4.0 * nf * self.pair[n].re * cn;
        }
        (
            a_s * a_s + b_s * b_s + b_a * b_a,
            2.0 * (a_s * da_s + b_s * db_s + b_a * db_a),
        )
    }

    /// Canonical text form, the input of [`ModelSpec::hash`].
    pub fn canonical(&self) -> String {
        let fmt = |v: &[Complex64]| {
            v.iter()
                .map(|c| format!("[{:.17e}, {:.17e}]", c.re + 0.0, c.im + 0.0))
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!(
            "range = {}\nhop = [{}]\npair = [{}]\n",
            self.range,
            fmt(&self.hop),
            fmt(&self.pair[1..])
        )
    }

    /// First 16 hex digits of the SHA-256 of the canonical form.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Real-space coupling matrices `(A, B)` of an `n`-site chain.
    pub fn real_space(
        &self,
        n: usize,
        periodic: bool,
    ) -> (nalgebra::DMatrix<Complex64>, nalgebra::DMatrix<Complex64>) {
        let zero = Complex64::new(0.0, 0.0);
        let mut a = nalgebra::DMatrix::from_element(n, n, zero);
        let mut b = nalgebra::DMatrix::from_element(n, n, zero);
        let r = self.range as i64;
        for i in 0..n {
            for d in -(r - 1)..r {
                let j = i as i64 + d;
                let j = if periodic {
                    j.rem_euclid(n as i64)
                } else if j < 0 || j >= n as i64 {
                    continue;
                } else {
                    j
                } as usize;
                a[(i, j)] += self.a(d);
                b[(i, j)] += self.b(d);
            }
        }
        (a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_neighbor_dispersion() {
        let (g, h, d) = (0.7, 0.4, 0.3);
        let m = ModelSpec::nearest_neighbor(g, h, d).unwrap();
        for i in 0..50 {
            let t = -3.1 + 0.124 * i as f64;
            let want = d * t.sin() + ((t.cos() - h).powi(2) + (g * t.sin()).powi(2)).sqrt();
            assert!((m.lambda(t) / 2.0 - want).abs() < 1e-13);
        }
    }

    #[test]
    fn symbol_parts_are_consistent() {
        let m = ModelSpec::new(
            3,
            vec![
                Complex64::new(0.3, 0.0),
                Complex64::new(0.2, -1.1),
                Complex64::new(0.5, 0.4),
            ],
            vec![Complex64::new(0.8, 0.1), Complex64::new(-0.2, 0.6)],
        )
        .unwrap();
        for i in 0..40 {
            let t = -3.0 + 0.15 * i as f64;
            let c = m.components(t);
            assert!((c.a_s - (m.a_symbol(t) + m.a_symbol(-t))).abs() < 1e-12);
            assert!((c.a_a - (m.a_symbol(-t) - m.a_symbol(t))).abs() < 1e-12);
            let b = m.b_symbol(t);
            assert!((c.b_s - 2.0 * b.re).abs() < 1e-12);
            assert!((c.b_a - 2.0 * b.im).abs() < 1e-12);
            assert!((m.b_symbol(-t) + b).norm() < 1e-12);
            let direct: Complex64 = (-2..=2)
                .map(|n| m.a(n) * Complex64::from_polar(1.0, -(n as f64) * t))
                .sum();
            assert!((direct.re - m.a_symbol(t)).abs() < 1e-12 && direct.im.abs() < 1e-12);
            let (dl, dd) = m.delta_with_derivative(t);
            let e = 1e-6;
            let num = (m.components(t + e).delta - m.components(t - e).delta) / (2.0 * e);
            assert!((dl - c.delta).abs() < 1e-10);
            assert!((dd - num).abs() < 1e-5 * (1.0 + num.abs()));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ModelSpec::new(1, vec![Complex64::new(1.0, 0.5)], vec![]).is_err());
        assert!(ModelSpec::new(1, vec![], vec![Complex64::new(1.0, 0.0)]).is_err());
        assert!(ModelSpec::new(2, vec![Complex64::new(0.0, 0.0); 3], vec![]).is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = ModelSpec::nearest_neighbor(1.0, 1.0, 0.0).unwrap();
        let b = ModelSpec::nearest_neighbor(1.0, 1.0, 1e-9).unwrap();
        assert_eq!(a.hash(), a.clone().hash());
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
    }

    #[test]
    fn real_space_periodic_wraps() {
        let m = ModelSpec::nearest_neighbor(1.0, 0.5, 0.2).unwrap();
        let (a, b) = m.real_space(4, true);
        assert_eq!(a[(3, 0)], m.a(1));
        assert_eq!(b[(0, 3)], m.b(-1));
        assert!((a.adjoint() - &a).norm() < 1e-15);
        assert!((b.transpose() + &b).norm() < 1e-15);
    }
}

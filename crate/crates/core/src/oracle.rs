//! Brute-force exact diagonalization in the occupation basis.
//!
//! Basis states are bit strings, bit `j` set when site `j` is occupied.
//! `b_j` carries the Jordan-Wigner sign `(-1)^(occupied sites l < j)`, so the
//! fermionic matrices coincide with the spin-chain Pauli strings.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::finite::Boundary;
use crate::model::ModelSpec;

pub const MAX_SITES: usize = 12;

type CVec = DVector<Complex64>;

/// Dense many-body Hamiltonian of an `n`-site chain.
#[derive(Debug, Clone)]
pub struct SpinHamiltonian {
    pub n: usize,
    pub matrix: DMatrix<Complex64>,
}

/// Ground state of a [`SpinHamiltonian`].
#[derive(Debug, Clone)]
pub struct ExactGroundState {
    pub n: usize,
    pub energy: f64,
    pub vector: CVec,
    /// Gap to the next eigenvalue.
    pub gap: f64,
}

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `b_j |s>` as `(sign, state)`, or `None` if site `j` is empty.
fn annihilate(j: usize, s: usize) -> Option<(f64, usize)> {
    if s >> j & 1 == 0 {
        return None;
    }
    let sign = if (s & ((1 << j) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Some((sign, s ^ (1 << j)))
}

fn create(j: usize, s: usize) -> Option<(f64, usize)> {
    if s >> j & 1 == 1 {
        return None;
    }
    let sign = if (s & ((1 << j) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Some((sign, s | (1 << j)))
}

impl SpinHamiltonian {
    pub fn new(model: &ModelSpec, n: usize, boundary: Boundary) -> Result<Self> {
        if n == 0 || n > MAX_SITES {
            return Err(Error::Precondition(format!("oracle supports 1..={MAX_SITES} sites")));
        }
        let (a, b) = model.real_space(n, boundary == Boundary::Periodic);
        let dim = 1usize << n;
        let mut h = DMatrix::from_element(dim, dim, c0());
        for s in 0..dim {
            for i in 0..n {
                for j in 0..n {
                    // A_ij b+_i b_j
                    if a[(i, j)] != c0() {
                        if let Some((s1, t)) = annihilate(j, s) {
                            if let Some((s2, u)) = create(i, t) {
                                h[(u, s)] += a[(i, j)] * (s1 * s2);
                            }
                        }
                    }
                    if b[(i, j)] != c0() {
                        // 1/2 B_ij b+_i b+_j
                        if let Some((s1, t)) = create(j, s) {
                            if let Some((s2, u)) = create(i, t) {
                                h[(u, s)] += b[(i, j)] * (0.5 * s1 * s2);
                            }
                        }
                        // -1/2 conj(B_ij) b_i b_j
                        if let Some((s1, t)) = annihilate(j, s) {
                            if let Some((s2, u)) = annihilate(i, t) {
                                h[(u, s)] -= b[(i, j)].conj() * (0.5 * s1 * s2);
                            }
                        }
                    }
                }
            }
        }
        Ok(Self { n, matrix: h })
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().fold(0.0f64, |a, z| a.max(z.norm()))
    }

    /// All eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Lowest state, found separately in each parity sector.
    pub fn ground_state(&self) -> ExactGroundState {
        let dim = 1usize << self.n;
        let mut best: Option<(f64, CVec)> = None;
        let mut levels = Vec::new();
        for parity in 0..2u32 {
            let idx: Vec<usize> = (0..dim).filter(|s| s.count_ones() % 2 == parity).collect();
            let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.matrix[(idx[i], idx[j])]);
            let eig = SymmetricEigen::new(sub);
            let (k, &e) = eig
                .eigenvalues
                .iter()
                .enumerate()
                .min_by(|x, y| x.1.total_cmp(y.1))
                .unwrap();
            levels.extend(eig.eigenvalues.iter().copied());
            if best.as_ref().is_none_or(|b| e < b.0) {
                let mut v = DVector::from_element(dim, c0());
                for (i, &s) in idx.iter().enumerate() {
                    v[s] = eig.eigenvectors[(i, k)];
                }
                best = Some((e, v));
            }
        }
        levels.sort_by(f64::total_cmp);
        let (energy, vector) = best.unwrap();
        ExactGroundState { n: self.n, energy, vector, gap: levels[1] - levels[0] }
    }
}

impl ExactGroundState {
    /// Entropy of the first `l` sites from the Schmidt decomposition.
    pub fn block_entropy(&self, l: usize) -> f64 {
        if l == 0 || l >= self.n {
            return 0.0;
        }
        let rows = 1usize << l;
        let cols = 1usize << (self.n - l);
        let psi = DMatrix::from_fn(rows, cols, |a, b| self.vector[a + rows * b]);
        psi.singular_values()
            .iter()
            .map(|s| s * s)
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.ln())
            .sum()
    }

    /// Apply `m_mu` (`m_{2j} = b + b+`, `m_{2j+1} = i (b - b+)`).
    pub fn apply_majorana(&self, mu: usize, v: &CVec) -> CVec {
        let j = mu / 2;
        let mut out = DVector::from_element(v.len(), c0());
        for s in 0..v.len() {
            if v[s] == c0() {
                continue;
            }
            let (ca, cc) = if mu % 2 == 0 {
                (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
            } else {
                (Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0))
            };
            if let Some((sg, t)) = annihilate(j, s) {
                out[t] += v[s] * ca * sg;
            }
            if let Some((sg, t)) = create(j, s) {
                out[t] += v[s] * cc * sg;
            }
        }
        out
    }

    /// `<m_{i1} m_{i2} ... m_{ik}>`.
    pub fn majorana_expectation(&self, indices: &[usize]) -> Complex64 {
        let mut v = self.vector.clone();
        for &mu in indices.iter().rev() {
            v = self.apply_majorana(mu, &v);
        }
        self.vector.dotc(&v)
    }
}

/// `S(L, N)` by exact diagonalization.
pub fn exact_block_entropy(model: &ModelSpec, n: usize, l: usize, boundary: Boundary) -> Result<f64> {
    let gs = SpinHamiltonian::new(model, n, boundary)?.ground_state();
    if gs.gap < 1e-10 {
        return Err(Error::DegenerateGroundState(format!("many-body gap {:.3e}", gs.gap)));
    }
    Ok(gs.block_entropy(l))
}

/// Pairing sum of two-point values for an even index tuple.
pub fn wick_value(two_point: &dyn Fn(usize, usize) -> Complex64, idx: &[usize]) -> Complex64 {
    if idx.is_empty() {
        return Complex64::new(1.0, 0.0);
    }
    if idx.len() % 2 == 1 {
        return c0();
    }
    let mut total = c0();
    for k in 1..idx.len() {
        let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|(i, _)| *i + 1 != k).map(|(_, &x)| x).collect();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        total += two_point(idx[0], idx[k]) * wick_value(two_point, &rest) * sign;
    }
    total
}

/// Largest deviation between exact multi-point values and their Wick expansion.
pub fn wick_check(model: &ModelSpec, n: usize, boundary: Boundary, tuples: &[Vec<usize>]) -> Result<f64> {
    if n > 10 {
        return Err(Error::Precondition("wick check supports at most 10 sites".into()));
    }
    if tuples.iter().any(|t| t.len() > 6 || t.iter().any(|&i| i >= 2 * n)) {
        return Err(Error::Precondition("tuples must have length <= 6 and valid indices".into()));
    }
    let gs = SpinHamiltonian::new(model, n, boundary)?.ground_state();
    let two = |a: usize, b: usize| gs.majorana_expectation(&[a, b]);
    let mut worst = 0.0f64;
    for t in tuples {
        let exact = gs.majorana_expectation(t);
        let wick = wick_value(&two, t);
        worst = worst.max((exact - wick).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_hopping() {
        let m = ModelSpec::real(&[0.0, -1.0], &[]).unwrap();
        let s = exact_block_entropy(&m, 2, 1, Boundary::Open).unwrap();
        assert!((s - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn product_state() {
        let m = ModelSpec::real(&[-2.0, 0.0], &[0.0]).unwrap();
        for l in 1..8 {
            assert!(exact_block_entropy(&m, 8, l, Boundary::Open).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn odd_and_repeated_tuples() {
        let m = ModelSpec::nearest_neighbor(1.0, 0.5, 0.0).unwrap();
        let gs = SpinHamiltonian::new(&m, 6, Boundary::Open).unwrap().ground_state();
        assert!(gs.majorana_expectation(&[0, 3, 5]).norm() < 1e-10);
        assert!((gs.majorana_expectation(&[4, 4]) - 1.0).norm() < 1e-12);
        let two = |a: usize, b: usize| gs.majorana_expectation(&[a, b]);
        let t = [2, 2, 1, 7];
        assert!((gs.majorana_expectation(&t) - wick_value(&two, &t)).norm() < 1e-10);
    }

    #[test]
    fn hermitian() {
        let m = ModelSpec::new(
            2,
            vec![Complex64::new(0.3, 0.0), Complex64::new(0.5, 0.7)],
            vec![Complex64::new(-0.4, 0.2)],
        )
        .unwrap();
        assert!(SpinHamiltonian::new(&m, 5, Boundary::Periodic).unwrap().hermiticity_defect() < 1e-14);
    }
}

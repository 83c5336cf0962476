//! Finite chains: Bogoliubov ground state, entropy profiles and fits.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::entropy::majorana_entropy;
use crate::error::{Error, Result};
use crate::fit::linear_fit;
use crate::model::ModelSpec;
use crate::transforms::majorana_coupling_matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Periodic,
}

impl std::str::FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Self::Open),
            "periodic" => Ok(Self::Periodic),
            _ => Err(Error::Precondition(format!("unknown boundary '{s}'"))),
        }
    }
}

/// An `n`-site chain with its real-space couplings.
#[derive(Debug, Clone)]
pub struct FiniteChain {
    pub model: ModelSpec,
    pub n: usize,
    pub boundary: Boundary,
    pub a: DMatrix<Complex64>,
    pub b: DMatrix<Complex64>,
}

/// Ground state of a finite chain.
#[derive(Debug, Clone)]
pub struct FiniteGroundState {
    /// `2N x 2N` real antisymmetric `C` with `<m m> = 1 + i C`.
    pub gamma: DMatrix<f64>,
    /// Single-particle energies `eps_k >= 0`, ascending.
    pub energies: Vec<f64>,
    pub ground_energy: f64,
}

/// One row of an entropy profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub l: usize,
    pub n: usize,
    pub s: f64,
    pub delta_s: f64,
}

/// Least-squares fit `S = (c/6) x + s0` with `x = ln((2N/pi) sin(pi L/N))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcFit {
    pub c: f64,
    pub s0: f64,
    pub rms: f64,
    pub points: usize,
}

impl FiniteChain {
    pub fn new(model: &ModelSpec, n: usize, boundary: Boundary) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("chain must have at least one site".into()));
        }
        if boundary == Boundary::Periodic && n < 2 * model.range() {
            return Err(Error::Precondition(format!(
                "periodic chain of {n} sites shorter than twice the range {}",
                model.range()
            )));
        }
        let (a, b) = model.real_space(n, boundary == Boundary::Periodic);
        Ok(Self {
            model: model.clone(),
            n,
            boundary,
            a,
            b,
        })
    }

    /// Nambu matrix `[[A, B], [-conj(B), -conj(A)]]` acting on `(b, b+)`.
    pub fn bdg_hamiltonian(&self) -> DMatrix<Complex64> {
        let n = self.n;
        let mut h = DMatrix::from_element(2 * n, 2 * n, Complex64::new(0.0, 0.0));
        h.view_mut((0, 0), (n, n)).copy_from(&self.a);
        h.view_mut((0, n), (n, n)).copy_from(&self.b);
        h.view_mut((n, 0), (n, n)).copy_from(&(-self.b.conjugate()));
        h.view_mut((n, n), (n, n)).copy_from(&(-self.a.conjugate()));
        h
    }

    /// Real antisymmetric `K` with `H = (i/4) m^T K m + tr(A)/2`.
    pub fn majorana_kernel(&self) -> DMatrix<f64> {
        majorana_coupling_matrix(&self.a, &self.b) * 4.0
    }

    pub fn ground_state(&self) -> Result<FiniteGroundState> {
        let k = self.majorana_kernel();
        let s = k.transpose() * &k;
        let eig = SymmetricEigen::new(s);
        let mut ev: Vec<(f64, usize)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &x)| (x.max(0.0).sqrt(), i))
            .collect();
        ev.sort_by(|x, y| x.0.total_cmp(&y.0));
        let emax = ev.last().map(|e| e.0).unwrap_or(0.0);
        let emin = ev[0].0;
        if emin <= 1e-7 * emax.max(1e-300) {
            return Err(Error::DegenerateGroundState(format!(
                "single-particle energy {emin:.3e} vanishes relative to bandwidth {emax:.3e}"
            )));
        }
        let v = &eig.eigenvectors;
        let mut inv_root = v.clone();
        for (j, mut col) in inv_root.column_iter_mut().enumerate() {
            let e = eig.eigenvalues[j].max(0.0).sqrt();
            col /= e;
        }
        let gamma = &k * (inv_root * v.transpose());
        let gamma = (&gamma - gamma.transpose()) * 0.5;
        let energies: Vec<f64> = ev.iter().step_by(2).map(|e| e.0).collect();
        let trace: f64 = (0..self.n).map(|i| self.a[(i, i)].re).sum();
        let ground_energy = 0.5 * trace - 0.5 * energies.iter().sum::<f64>();
        Ok(FiniteGroundState {
            gamma,
            energies,
            ground_energy,
        })
    }
}

impl FiniteGroundState {
    /// Entropy of the sites `start..start + len`.
    pub fn block_entropy(&self, start: usize, len: usize) -> Result<f64> {
        if len == 0 {
            return Ok(0.0);
        }
        let c = self.gamma.view((2 * start, 2 * start), (2 * len, 2 * len)).into_owned();
        Ok(majorana_entropy(&c)?.0)
    }
}

/// Ground-state correlations of a finite chain.
pub fn ground_correlations(chain: &FiniteChain) -> Result<FiniteGroundState> {
    chain.ground_state()
}

/// `S(L, N)` and `Delta S(L, N) = S(L, N) - S(N - L, N)` for the requested `L`.
pub fn entropy_profile(state: &FiniteGroundState, n: usize, ls: &[usize]) -> Result<Vec<ProfileRow>> {
    if let Some(&bad) = ls.iter().find(|&&l| l == 0 || l >= n) {
        return Err(Error::Precondition(format!("block length {bad} outside 1..{n}")));
    }
    let mut small: Vec<usize> = ls.iter().map(|&l| l.min(n - l)).collect();
    small.sort_unstable();
    small.dedup();
    let pairs: Vec<(usize, f64, f64)> = small
        .par_iter()
        .map(|&l| {
            let left = state.block_entropy(0, l)?;
            let right = state.block_entropy(n - l, l)?;
            Ok((l, left, right))
        })
        .collect::<Result<_>>()?;
    let find = |l: usize| pairs.iter().find(|p| p.0 == l).copied().unwrap();
    Ok(ls
        .iter()
        .map(|&l| {
            if 2 * l == n {
                let (_, left, _) = find(l);
                ProfileRow { l, n, s: left, delta_s: 0.0 }
            } else if 2 * l < n {
                let (_, left, right) = find(l);
                ProfileRow { l, n, s: left, delta_s: left - right }
            } else {
                let (_, left, right) = find(n - l);
                ProfileRow { l, n, s: right, delta_s: right - left }
            }
        })
        .collect())
}

/// Block lengths `1..N-1`, thinned to at most `max_points` roughly even steps.
pub fn profile_lengths(n: usize, max_points: usize) -> Vec<usize> {
    if n < 2 {
        return vec![];
    }
    let stride = ((n - 1) as f64 / max_points.max(1) as f64).ceil().max(1.0) as usize;
    let mut ls: Vec<usize> = (1..n).step_by(stride).collect();
    if 2 * (n / 2) == n && !ls.contains(&(n / 2)) {
        ls.push(n / 2);
    }
    ls.sort_unstable();
    ls
}

/// Fit the chord-length form on rows with `L/N` inside `window`.
pub fn cc_fit(rows: &[ProfileRow], window: (f64, f64)) -> Result<CcFit> {
    let (lo, hi) = window;
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| {
            let x = r.l as f64 / r.n as f64;
            x >= lo && x <= hi
        })
        .map(|r| {
            let nf = r.n as f64;
            let x = (2.0 * nf / std::f64::consts::PI * (std::f64::consts::PI * r.l as f64 / nf).sin()).ln();
            (x, r.s)
        })
        .collect();
    if pts.len() < 10 {
        return Err(Error::Precondition(format!(
            "only {} profile points inside the fit window",
            pts.len()
        )));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    let f = linear_fit(&xs, &ys)?;
    Ok(CcFit {
        c: 6.0 * f.slope,
        s0: f.intercept,
        rms: f.rms,
        points: xs.len(),
    })
}

/// One point of a saturation sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationRow {
    pub param: f64,
    pub xi: f64,
    pub s_sat: f64,
    pub l_sat: usize,
}

/// Options of [`saturation_sweep`].
#[derive(Debug, Clone, Copy)]
pub struct SaturationOptions {
    pub step: usize,
    pub threshold: f64,
    pub max_l: usize,
    pub tol: f64,
}

impl Default for SaturationOptions {
    fn default() -> Self {
        Self {
            step: 10,
            threshold: 1e-6,
            max_l: 4000,
            tol: 1e-12,
        }
    }
}

/// Saturated entropy and correlation length along a parameter path.
pub fn saturation_sweep<F>(family: F, params: &[f64], opts: SaturationOptions) -> Result<Vec<SaturationRow>>
where
    F: Fn(f64) -> Result<ModelSpec> + Sync,
{
    params
        .par_iter()
        .map(|&p| {
            let model = family(p)?;
            let (s_sat, l_sat) = crate::entropy::saturated_entropy(&model, opts)?;
            let xi = crate::entropy::correlation_length(&model, opts.tol)?;
            Ok(SaturationRow { param: p, xi, s_sat, l_sat })
        })
        .collect()
}

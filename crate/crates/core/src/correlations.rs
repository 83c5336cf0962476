//! Two-point Majorana correlations of the ground state.
//!
//! With `m_{2j} = b_j + b+_j`, `m_{2j+1} = i (b_j - b+_j)` (zero based) the
//! ground state has `<m_a m_b> = delta_ab + i C_ab`, and the `2x2` block of `C`
//! between sites `j` and `l` is `Pi_{j-l} = (1/2pi) int exp(-i (j-l) t) phi(t) dt`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::RwLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::phase::{classify, periodic_sign_changes, PhasePoint, DEFAULT_GRID};
use crate::quadrature::{integrate, QuadOptions};

pub const DEFAULT_TOL: f64 = 1e-12;

/// Ground state occupies the single-particle modes with negative `Lambda`.
pub const FILL_NEGATIVE_MODES: bool = true;

fn fill_sign() -> f64 {
    if FILL_NEGATIVE_MODES {
        1.0
    } else {
        -1.0
    }
}

/// `Pi_l` as a real `2x2` matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationBlock {
    pub offset: i64,
    pub entries: [[f64; 2]; 2],
    pub error: f64,
}

/// Real antisymmetric `2L x 2L` correlation matrix of an `L`-site block.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub sites: usize,
    pub data: DMatrix<f64>,
    /// Largest `|C + C^T| / 2` before antisymmetrization.
    pub antisymmetry_defect: f64,
}

/// Hermitian `L x L` kernel `<b+_j b_l>` of a gauge-invariant model.
#[derive(Debug, Clone)]
pub struct GaugeKernel {
    pub sites: usize,
    pub data: DMatrix<Complex64>,
}

/// Integrand of `phi` at `theta`, entries `(Re, Im)` of `phi_11, phi_12, phi_21, phi_22`.
fn phi(model: &ModelSpec, theta: f64) -> [[f64; 2]; 4] {
    let c = model.components(theta);
    let s = fill_sign();
    let (q1, q2, q3) = if c.delta > 0.0 && c.p != 0.0 {
        let r = s * c.p / c.delta.sqrt();
        (c.b_s * r, c.b_a * r, c.a_s * r)
    } else {
        (0.0, 0.0, 0.0)
    };
    let m = s * c.m;
    [
        [0.0, m - q1],
        [-q3, q2],
        [q3, q2],
        [0.0, m + q1],
    ]
}

/// Shared per-model integrator with a cache of computed blocks.
pub struct BlockCache {
    model: ModelSpec,
    phase: PhasePoint,
    breakpoints: Vec<f64>,
    tol: f64,
    blocks: RwLock<HashMap<i64, CorrelationBlock>>,
}

impl BlockCache {
    pub fn new(model: &ModelSpec, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::Precondition("tolerance must be positive".into()));
        }
        let phase = classify(model, DEFAULT_GRID)?;
        if phase.flat_band {
            return Err(Error::FlatBand);
        }
        let breakpoints = phase.breakpoints();
        Ok(Self {
            model: model.clone(),
            phase,
            breakpoints,
            tol,
            blocks: RwLock::new(HashMap::new()),
        })
    }

    pub fn model(&self) -> &ModelSpec {
        &self.model
    }

    pub fn phase(&self) -> &PhasePoint {
        &self.phase
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn compute(&self, l: i64) -> Result<CorrelationBlock> {
        let lf = l as f64;
        let f = |t: f64| {
            let p = phi(&self.model, t);
            let (s, c) = (lf * t).sin_cos();
            let mut out = [0.0; 4];
            for k in 0..4 {
                out[k] = c * p[k][0] + s * p[k][1];
            }
            out
        };
        let max_len = (PI / 2.0).min(2.0 * PI / (l.unsigned_abs() as f64 + 1.0));
        let opts = QuadOptions {
            abs_tol: self.tol * 2.0 * PI,
            ..QuadOptions::default()
        };
        let r = integrate(&f, &self.breakpoints, max_len, opts);
        let error = r.error / (2.0 * PI);
        if error > 100.0 * self.tol {
            return Err(Error::Quadrature {
                estimate: error,
                tol: self.tol,
            });
        }
        let v = r.value.map(|x| x / (2.0 * PI));
        Ok(CorrelationBlock {
            offset: l,
            entries: [[v[0], v[1]], [v[2], v[3]]],
            error,
        })
    }

    /// Block for offset `l`, computed once.
    pub fn block(&self, l: i64) -> Result<CorrelationBlock> {
        if let Some(b) = self.blocks.read().unwrap().get(&l) {
            return Ok(*b);
        }
        let b = self.compute(l)?;
        self.blocks.write().unwrap().insert(l, b);
        Ok(b)
    }

    /// Compute all missing offsets in `lo..=hi` in parallel.
    pub fn ensure(&self, lo: i64, hi: i64) -> Result<()> {
        let missing: Vec<i64> = {
            let map = self.blocks.read().unwrap();
            (lo..=hi).filter(|l| !map.contains_key(l)).collect()
        };
        let fresh: Vec<CorrelationBlock> = missing
            .par_iter()
            .map(|&l| self.compute(l))
            .collect::<Result<_>>()?;
        let mut map = self.blocks.write().unwrap();
        for b in fresh {
            map.insert(b.offset, b);
        }
        Ok(())
    }

    pub fn cached_offsets(&self) -> usize {
        self.blocks.read().unwrap().len()
    }

    /// `C_L` assembled from the cached blocks.
    pub fn correlation_matrix(&self, sites: usize) -> Result<CorrelationMatrix> {
        if sites == 0 {
            return Err(Error::Precondition("block length must be positive".into()));
        }
        let n = sites as i64;
        self.ensure(-(n - 1), n - 1)?;
        let map = self.blocks.read().unwrap();
        let mut c = DMatrix::zeros(2 * sites, 2 * sites);
        for j in 0..sites {
            for l in 0..sites {
                let b = &map[&(j as i64 - l as i64)].entries;
                for a in 0..2 {
                    for bb in 0..2 {
                        c[(2 * j + a, 2 * l + bb)] = b[a][bb];
                    }
                }
            }
        }
        drop(map);
        let sym = (&c + c.transpose()) * 0.5;
        let defect = sym.amax();
        let data = (&c - c.transpose()) * 0.5;
        Ok(CorrelationMatrix {
            sites,
            data,
            antisymmetry_defect: defect,
        })
    }
}

/// `Pi_l` for a single offset.
pub fn pi_block(model: &ModelSpec, l: i64, tol: f64) -> Result<CorrelationBlock> {
    BlockCache::new(model, tol)?.block(l)
}

/// `C_L` for a block of `sites` consecutive sites.
pub fn correlation_matrix(model: &ModelSpec, sites: usize, tol: f64) -> Result<CorrelationMatrix> {
    BlockCache::new(model, tol)?.correlation_matrix(sites)
}

impl CorrelationMatrix {
    /// `(<b+_j b_l>, <b_j b_l>)` recovered from the Majorana correlations.
    pub fn fermion_two_point(&self) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        majorana_to_fermion(&self.data)
    }

    /// Write the matrix as CSV rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for i in 0..self.data.nrows() {
            let row: Vec<String> = self.data.row(i).iter().map(|x| format!("{x:.12e}")).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Fermion two-point functions from `<m m> = 1 + i C`.
pub fn majorana_to_fermion(c: &DMatrix<f64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let n = c.nrows() / 2;
    let i = Complex64::new(0.0, 1.0);
    let mm = |a: usize, b: usize| {
        let d = if a == b { 1.0 } else { 0.0 };
        Complex64::new(d, c[(a, b)])
    };
    let mut hop = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    let mut pair = hop.clone();
    for j in 0..n {
        for l in 0..n {
            let (xj, yj, xl, yl) = (2 * j, 2 * j + 1, 2 * l, 2 * l + 1);
            hop[(j, l)] = 0.25 * (mm(xj, xl) - i * mm(xj, yl) + i * mm(yj, xl) + mm(yj, yl));
            pair[(j, l)] = 0.25 * (mm(xj, xl) - i * mm(xj, yl) - i * mm(yj, xl) - mm(yj, yl));
        }
    }
    (hop, pair)
}

/// Intervals of `[-pi, pi)` where `A(theta) < 0`, with their sign-change endpoints.
fn filled_breakpoints(model: &ModelSpec) -> Vec<f64> {
    let a = |t: f64| model.a_symbol(t);
    let mut pts = periodic_sign_changes(&a, DEFAULT_GRID);
    pts.extend([-PI, 0.0, PI]);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
    pts
}

/// `<b+_j b_l> = (1/2pi) int exp(i (j-l) t) [A(t) < 0] dt` for a gauge-invariant model.
pub fn gauge_kernel(model: &ModelSpec, sites: usize, tol: f64) -> Result<GaugeKernel> {
    if !model.is_gauge_invariant() {
        return Err(Error::NotGaugeInvariant);
    }
    if sites == 0 {
        return Err(Error::Precondition("block length must be positive".into()));
    }
    let pts = filled_breakpoints(model);
    let n = sites as i64;
    let vals: Vec<(i64, Complex64)> = (-(n - 1)..n)
        .into_par_iter()
        .map(|d| {
            let df = d as f64;
            let f = |t: f64| {
                let a = model.a_symbol(t);
                let occ = if a < 0.0 {
                    1.0
                } else if a == 0.0 {
                    0.5
                } else {
                    0.0
                };
                let (s, c) = (df * t).sin_cos();
                [occ * c, occ * s]
            };
            let max_len = (PI / 2.0).min(2.0 * PI / (d.unsigned_abs() as f64 + 1.0));
            let opts = QuadOptions {
                abs_tol: tol * 2.0 * PI,
                ..QuadOptions::default()
            };
            let r = integrate(&f, &pts, max_len, opts);
            if r.error / (2.0 * PI) > 100.0 * tol {
                return Err(Error::Quadrature {
                    estimate: r.error / (2.0 * PI),
                    tol,
                });
            }
            Ok((d, Complex64::new(r.value[0], r.value[1]) / (2.0 * PI)))
        })
        .collect::<Result<_>>()?;
    let map: HashMap<i64, Complex64> = vals.into_iter().collect();
    let data = DMatrix::from_fn(sites, sites, |j, l| map[&(j as i64 - l as i64)]);
    let data = (&data + data.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(GaugeKernel { sites, data })
}

/// Finite periodic-chain correlations from discrete momentum sums.
#[derive(Debug, Clone)]
pub struct FiniteCorrelations {
    pub n: usize,
    /// `<b+_j b_l>`
    pub hop: DMatrix<Complex64>,
    /// `<b_j b_l>`
    pub pair: DMatrix<Complex64>,
}

/// Ground-state correlations of an `n`-site chain with fermionic periodic
/// boundary conditions, `k = 2 pi m / n`.
pub fn finite_correlations(model: &ModelSpec, n: usize) -> Result<FiniteCorrelations> {
    if n < 2 * model.range() {
        return Err(Error::Precondition(format!(
            "chain length {n} below twice the range {}",
            model.range()
        )));
    }
    let ks: Vec<f64> = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
    finite_correlations_at(model, n, &ks)
}

/// Same as [`finite_correlations`] on an explicit momentum set.
pub fn finite_correlations_at(
    model: &ModelSpec,
    n: usize,
    ks: &[f64],
) -> Result<FiniteCorrelations> {
    let zero = Complex64::new(0.0, 0.0);
    let mut nk = Vec::with_capacity(ks.len());
    let mut gk = Vec::with_capacity(ks.len());
    let s = fill_sign();
    for &k in ks {
        let c = model.components(k);
        if c.lambda.abs().min(c.lambda_neg.abs()) < 1e-12 * model.scale() {
            return Err(Error::DegenerateGroundState(format!("zero mode at k = {k:.6}")));
        }
        let q3 = if c.delta > 0.0 { c.a_s / c.delta.sqrt() } else { 0.0 };
        let occ = 0.5 * (1.0 - s * (c.m + c.p * q3));
        let g = if c.delta > 0.0 && c.p != 0.0 {
            -s * c.p * model.b_symbol(k) / c.delta.sqrt()
        } else {
            zero
        };
        nk.push(occ);
        gk.push(g);
    }
    let nf = n as f64;
    let sum = |d: i64, w: &[Complex64], sign: f64| -> Complex64 {
        ks.iter()
            .zip(w)
            .map(|(&k, &v)| v * Complex64::from_polar(1.0 / nf, sign * k * d as f64))
            .sum()
    };
    let nk: Vec<Complex64> = nk.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    let ni = n as i64;
    let hop_d: HashMap<i64, Complex64> = (-(ni - 1)..ni).map(|d| (d, sum(d, &nk, -1.0))).collect();
    let pair_d: HashMap<i64, Complex64> = (-(ni - 1)..ni).map(|d| (d, sum(d, &gk, 1.0))).collect();
    let hop = DMatrix::from_fn(n, n, |j, l| hop_d[&(j as i64 - l as i64)]);
    let pair = DMatrix::from_fn(n, n, |j, l| pair_d[&(j as i64 - l as i64)]);
    Ok(FiniteCorrelations { n, hop, pair })
}

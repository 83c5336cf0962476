//! Von Neumann entropy from correlation data.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::correlations::{BlockCache, GaugeKernel};
use crate::error::{Error, Result};
use crate::finite::SaturationOptions;
use crate::fit::least_squares;
use crate::model::ModelSpec;

const CLAMP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumPath {
    Majorana,
    Gauge,
}

/// Singular values `nu` (Majorana path) or occupations `lambda` (gauge path).
#[derive(Debug, Clone)]
pub struct EntropySpectrum {
    pub values: Vec<f64>,
    pub path: SpectrumPath,
    /// Largest distance outside `[0, 1]` before clamping.
    pub overshoot: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ExactThermo,
    ExactFinite,
    Asymptotic,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Self::ExactThermo => "exact-thermo",
            Self::ExactFinite => "exact-finite",
            Self::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EntropyCurve {
    pub points: Vec<(usize, f64)>,
    pub method: Method,
    pub model_hash: String,
}

impl EntropyCurve {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "L,S_L,method,model-hash")?;
        for (l, s) in &self.points {
            writeln!(w, "{l},{s:.11e},{},{}", self.method.tag(), self.model_hash)?;
        }
        Ok(())
    }
}

/// `e(x, nu) = -(x+nu)/2 ln((x+nu)/2) - (x-nu)/2 ln((x-nu)/2)`.
pub fn e_func(x: f64, nu: f64) -> Result<f64> {
    if !(nu >= 0.0 && nu <= x) {
        return Err(Error::Domain(format!("e({x}, {nu}) requires 0 <= nu <= x")));
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.ln() };
    Ok(term(0.5 * (x + nu)) + term(0.5 * (x - nu)))
}

fn clamp_unit(x: f64) -> Result<(f64, f64)> {
    if x < -CLAMP || x > 1.0 + CLAMP || x.is_nan() {
        return Err(Error::Numerical(format!(
            "spectral value {x:e} outside [0, 1] beyond the clamp tolerance"
        )));
    }
    let over = if x < 0.0 {
        -x
    } else if x > 1.0 {
        x - 1.0
    } else {
        0.0
    };
    Ok((x.clamp(0.0, 1.0), over))
}

/// Entropy of a `2L x 2L` real antisymmetric correlation matrix.
pub fn majorana_entropy(c: &DMatrix<f64>) -> Result<(f64, EntropySpectrum)> {
    let n = c.nrows();
    if n != c.ncols() || n % 2 != 0 {
        return Err(Error::Precondition(format!(
            "correlation matrix must be square of even size, got {}x{}",
            n,
            c.ncols()
        )));
    }
    if n == 0 {
        return Ok((0.0, EntropySpectrum { values: vec![], path: SpectrumPath::Majorana, overshoot: 0.0 }));
    }
    let ctc = c.transpose() * c;
    let mut ev: Vec<f64> = ctc.symmetric_eigenvalues().iter().copied().collect();
    if ev.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical(format!(
            "eigensolver produced non-finite values (max |C| = {:e})",
            c.amax()
        )));
    }
    ev.sort_by(|a, b| b.total_cmp(a));
    let mut values = Vec::with_capacity(n / 2);
    let mut overshoot = 0.0f64;
    let mut s = 0.0;
    for pair in ev.chunks(2) {
        let (mu, o) = clamp_unit(0.5 * (pair[0] + pair[1]))?;
        overshoot = overshoot.max(o);
        let nu = mu.sqrt();
        s += e_func(1.0, nu)?;
        values.push(nu);
    }
    Ok((s, EntropySpectrum { values, path: SpectrumPath::Majorana, overshoot }))
}

/// Binary-entropy sum over the eigenvalues of a hermitian kernel.
pub fn gauge_entropy(kernel: &GaugeKernel) -> Result<(f64, EntropySpectrum)> {
    hermitian_entropy(&kernel.data)
}

pub fn hermitian_entropy(m: &DMatrix<Complex64>) -> Result<(f64, EntropySpectrum)> {
    let herm_defect = (m - m.adjoint()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let scale = m.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    if herm_defect > 1e-10 * (1.0 + scale) {
        return Err(Error::Precondition(format!("kernel not hermitian (defect {herm_defect:e})")));
    }
    let ev = m.clone().symmetric_eigenvalues();
    let mut values = Vec::with_capacity(ev.len());
    let mut overshoot = 0.0f64;
    let mut s = 0.0;
    for &x in ev.iter() {
        let (l, o) = clamp_unit(x)?;
        overshoot = overshoot.max(o);
        s += e_func(1.0, (2.0 * l - 1.0).abs().min(1.0))?;
        values.push(l);
    }
    values.sort_by(f64::total_cmp);
    Ok((s, EntropySpectrum { values, path: SpectrumPath::Gauge, overshoot }))
}

/// `S_L` for each requested `L`, sharing one block cache.
pub fn entropy_scan_cached(cache: &BlockCache, ls: &[usize]) -> Result<EntropyCurve> {
    if ls.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("block lengths must be strictly ascending".into()));
    }
    if let Some(&max) = ls.last() {
        cache.ensure(-(max as i64 - 1), max as i64 - 1)?;
    }
    let points = ls
        .par_iter()
        .map(|&l| {
            let c = cache.correlation_matrix(l)?;
            Ok((l, majorana_entropy(&c.data)?.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyCurve {
        points,
        method: Method::ExactThermo,
        model_hash: cache.model().hash(),
    })
}

pub fn entropy_scan(model: &ModelSpec, ls: &[usize], tol: f64) -> Result<EntropyCurve> {
    let cache = BlockCache::new(model, tol)?;
    entropy_scan_cached(&cache, ls)
}

/// `S_L` at the first multiple of `opts.step` where it changes by less than `opts.threshold`.
///
/// The increments of a saturating curve shrink monotonically, so the first
/// such `L` is bracketed by doubling and then located by interpolating
/// `ln |dS|` linearly, falling back to bisection when that stalls.
pub fn saturated_entropy(model: &ModelSpec, opts: SaturationOptions) -> Result<(f64, usize)> {
    let cache = BlockCache::new(model, opts.tol)?;
    let memo = std::sync::Mutex::new(std::collections::HashMap::<usize, f64>::new());
    let entropy = |l: usize| -> Result<f64> {
        if l == 0 {
            return Ok(0.0);
        }
        if let Some(&s) = memo.lock().unwrap().get(&l) {
            return Ok(s);
        }
        let s = majorana_entropy(&cache.correlation_matrix(l)?.data)?.0;
        memo.lock().unwrap().insert(l, s);
        Ok(s)
    };
    // k counts steps: L = k * step
    let increment = |k: usize| -> Result<f64> {
        let l = k * opts.step;
        cache.ensure(-(l as i64), l as i64)?;
        let (prev, cur) = rayon::join(|| entropy(l - opts.step), || entropy(l));
        Ok((cur? - prev?).abs())
    };
    let kmax = opts.max_l / opts.step;
    let (mut lo, mut hi) = (1usize, 2usize);
    let mut d_lo = increment(lo)?;
    if d_lo < opts.threshold {
        return Ok((entropy(opts.step)?, opts.step));
    }
    let mut d_hi;
    loop {
        if hi > kmax {
            hi = kmax;
            d_hi = increment(hi)?;
            if lo < kmax && d_hi < opts.threshold {
                break;
            }
            return Err(Error::NoSaturation(opts.max_l));
        }
        d_hi = increment(hi)?;
        if d_hi < opts.threshold {
            break;
        }
        (lo, d_lo) = (hi, d_hi);
        hi *= 2;
    }
    let target = opts.threshold.ln();
    let mut bisect = false;
    while hi - lo > 1 {
        let mid = if bisect || d_hi <= 0.0 {
            (lo + hi) / 2
        } else {
            let (a, b) = (d_lo.ln(), d_hi.ln());
            let t = lo as f64 + (a - target) / (a - b) * (hi - lo) as f64;
            (t.round() as usize).clamp(lo + 1, hi - 1)
        };
        let d = increment(mid)?;
        let width = hi - lo;
        if d < opts.threshold {
            (hi, d_hi) = (mid, d);
        } else {
            (lo, d_lo) = (mid, d);
        }
        bisect = !bisect && 2 * (hi - lo) > width;
    }
    let l = hi * opts.step;
    Ok((entropy(l)?, l))
}

/// Correlation length from the decay of `G(n) = max |Pi_n|`.
///
/// Starts from a pure exponential fit on `[10, 50]`, then fits
/// `ln G(n) = c0 - n/xi - a ln n` on `[2 xi, 12 xi]` until `xi` is stable to
/// `1e-4`. Each window stops at the quadrature noise floor.
pub fn correlation_length(model: &ModelSpec, tol: f64) -> Result<f64> {
    let cache = BlockCache::new(model, tol)?;
    let floor = 1e4 * tol;
    let fit = |lo: usize, hi: usize, power: bool| -> Result<f64> {
        cache.ensure(lo as i64, hi as i64)?;
        let mut rows = Vec::new();
        let mut ys = Vec::new();
        for n in lo..=hi {
            let b = cache.block(n as i64)?.entries;
            let v = b.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
            if v <= floor {
                break;
            }
            let nf = n as f64;
            rows.push(if power { vec![1.0, -nf, -nf.ln()] } else { vec![1.0, -nf] });
            ys.push(v.ln());
        }
        if rows.len() < 6 {
            return Err(Error::Numerical(format!(
                "correlator falls below {floor:e} before n = {}",
                lo + rows.len()
            )));
        }
        let inv_xi = least_squares(&rows, &ys)?.coefficients[1];
        if inv_xi <= 0.0 {
            return Err(Error::Numerical("correlator does not decay".into()));
        }
        Ok(1.0 / inv_xi)
    };
    let mut xi = fit(10, 50, false)?;
    for _ in 0..20 {
        let lo = (2.0 * xi).max(10.0) as usize;
        let hi = (12.0 * xi).max(50.0) as usize;
        if hi > 100_000 {
            return Err(Error::Numerical(format!("correlation length {xi:e} too large to fit")));
        }
        let next = fit(lo, hi, true)?;
        if (next - xi).abs() < 1e-4 * xi {
            return Ok(next);
        }
        xi = next;
    }
    Err(Error::Numerical("correlation length fit did not converge".into()))
}

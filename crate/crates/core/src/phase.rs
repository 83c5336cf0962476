//! Criticality and reflection-symmetry classification from the dispersion.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::ModelSpec;

pub const DEFAULT_GRID: usize = 4096;

/// Classification of a model point.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub critical: bool,
    pub reflection_breaking: bool,
    /// Zeros of `Lambda` in `[-pi, pi)`, sorted: sign changes and touching points.
    pub dispersion_zeros: Vec<f64>,
    /// Subset of `dispersion_zeros` where `Lambda` changes sign.
    pub sign_changes: Vec<f64>,
    /// Intervals of `[-pi, pi)` where `Lambda < 0`, possibly wrapping past `pi`.
    pub negative_region: Vec<(f64, f64)>,
    /// Points where `Delta` vanishes and the symbol direction is singular.
    pub singular_points: Vec<f64>,
    pub flat_band: bool,
}

impl PhasePoint {
    /// Discontinuities of the correlation symbol together with `0` and `+-pi`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![-PI, 0.0, PI];
        for &z in self.sign_changes.iter().chain(self.singular_points.iter()) {
            pts.push(wrap(z));
            pts.push(wrap(-z));
        }
        pts.retain(|x| x.is_finite());
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        if pts[0] > -PI {
            pts.insert(0, -PI);
        }
        if *pts.last().unwrap() < PI {
            pts.push(PI);
        }
        pts
    }
}

/// Phase label of the nearest-neighbour family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NnRegion {
    /// Gapped.
    NonCritical,
    /// `D'^2 > 1` and `h^2 < D'^2`, with `D'^2 = D^2 + 1 - gamma^2`.
    ConnectedCritical,
    /// `|h| = 1` outside the connected region.
    FieldLine,
    /// `h^2 = D'^2 > 1`: the dispersion touches zero without changing sign.
    Boundary,
}

/// Map `x` into `[-pi, pi)`.
pub fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y >= PI {
        -PI
    } else {
        y
    }
}

/// Bisect a sign change of `f` on `[a, b]` to machine precision.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    if f(b) == 0.0 {
        return b;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Golden-section minimum of `f` on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-13 * (1.0 + a.abs().max(b.abs())) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Sign changes of a `2 pi`-periodic function on `[-pi, pi)`, refined by bisection.
/// Also returns local minima of `|f|`-like dips that cross zero between samples.
pub fn periodic_sign_changes<F: Fn(f64) -> f64>(f: &F, grid: usize) -> Vec<f64> {
    let h = 2.0 * PI / grid as f64;
    let xs: Vec<f64> = (0..=grid).map(|i| -PI + h * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    for i in 0..grid {
        let (y0, y1) = (ys[i], ys[i + 1]);
        if y0 == 0.0 {
            let yp = ys[if i == 0 { grid - 1 } else { i - 1 }];
            if yp * y1 < 0.0 {
                out.push(xs[i]);
            }
        } else if y0 * y1 < 0.0 {
            out.push(bisect(f, xs[i], xs[i + 1]));
        } else if i > 0 {
            // two crossings hidden between neighbouring samples
            let yp = ys[i - 1];
            let dip = |s: f64| s * f(xs[i]) <= s * yp && s * f(xs[i]) <= s * y1;
            for s in [1.0, -1.0] {
                if s * y0 > 0.0 && dip(s) {
                    let g = |x: f64| s * f(x);
                    let (xm, fm) = golden_min(&g, xs[i - 1], xs[i + 1]);
                    if fm < 0.0 {
                        out.push(bisect(f, xs[i - 1], xm));
                        out.push(bisect(f, xm, xs[i + 1]));
                    }
                }
            }
        }
    }
    let mut out: Vec<f64> = out.into_iter().map(wrap).collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

/// Classify criticality and reflection symmetry by scanning `Lambda` on a grid.
pub fn classify(model: &ModelSpec, grid_size: usize) -> Result<PhasePoint> {
    let min_grid = 4 * (2 * model.range() + 1);
    if grid_size < min_grid {
        return Err(Error::Precondition(format!(
            "grid size {grid_size} below {min_grid}"
        )));
    }
    let lam = |t: f64| model.lambda(t);
    let h = 2.0 * PI / grid_size as f64;
    let xs: Vec<f64> = (0..grid_size).map(|i| -PI + h * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| lam(x)).collect();
    let scale = ys.iter().fold(0.0f64, |m, y| m.max(y.abs())).max(model.scale());
    let zero_tol = 1e-10 * scale.max(f64::MIN_POSITIVE);

    // flat band: a run of vanishing samples
    let mut flat_band = scale == 0.0;
    let mut run = 0;
    for k in 0..2 * grid_size {
        if ys[k % grid_size].abs() <= zero_tol {
            run += 1;
            if run >= 4 {
                flat_band = true;
            }
        } else {
            run = 0;
        }
    }
    if flat_band {
        return Ok(PhasePoint {
            critical: true,
            reflection_breaking: ys.iter().any(|&y| y < -zero_tol)
                || ys.iter().filter(|y| y.abs() <= zero_tol).count() < grid_size,
            dispersion_zeros: vec![],
            sign_changes: vec![],
            negative_region: vec![],
            singular_points: vec![],
            flat_band: true,
        });
    }

    let sign_changes = periodic_sign_changes(&lam, grid_size);
    let mut zeros = sign_changes.clone();

    // touching zeros: local minima that reach zero without crossing
    for i in 0..grid_size {
        let (yp, y0, yn) = (
            ys[(i + grid_size - 1) % grid_size],
            ys[i],
            ys[(i + 1) % grid_size],
        );
        if y0 >= 0.0 && y0 <= yp && y0 <= yn && y0 <= 1e-3 * scale {
            let (xm, fm) = golden_min(&lam, xs[i] - h, xs[i] + h);
            if fm.abs() <= zero_tol {
                let xm = wrap(xm);
                if !zeros.iter().any(|z| angle_dist(*z, xm) < 1e-7) {
                    zeros.push(xm);
                }
            }
        }
    }
    zeros.sort_by(f64::total_cmp);

    // singular points of the symbol direction
    let mut singular_points = Vec::new();
    let dl = |t: f64| model.delta_with_derivative(t);
    let dvals: Vec<f64> = xs.iter().map(|&x| dl(x).0).collect();
    let dscale = dvals.iter().fold(0.0f64, |m, &y| m.max(y));
    for i in 0..grid_size {
        let (yp, y0, yn) = (
            dvals[(i + grid_size - 1) % grid_size],
            dvals[i],
            dvals[(i + 1) % grid_size],
        );
        if y0 <= yp && y0 <= yn && y0 <= 1e-3 * dscale {
            let x = if y0 == 0.0 {
                xs[i]
            } else {
                let d1 = |t: f64| dl(t).1;
                let (a, b) = (xs[i] - h, xs[i] + h);
                if d1(a) < 0.0 && d1(b) > 0.0 {
                    bisect(&d1, a, b)
                } else {
                    golden_min(&|t| dl(t).0, a, b).0
                }
            };
            if dl(x).0 <= 1e-20 * dscale {
                let x = wrap(x);
                if !singular_points.iter().any(|z| angle_dist(*z, x) < 1e-9) {
                    singular_points.push(x);
                }
            }
        }
    }
    singular_points.sort_by(f64::total_cmp);

    let mut negative_region = Vec::new();
    let n = sign_changes.len();
    for k in 0..n {
        let a = sign_changes[k];
        let b = if k + 1 < n {
            sign_changes[k + 1]
        } else {
            sign_changes[0] + 2.0 * PI
        };
        if lam(0.5 * (a + b)) < 0.0 {
            negative_region.push((a, b));
        }
    }
    let critical = !zeros.is_empty() || ys.iter().any(|&y| y <= 0.0);
    Ok(PhasePoint {
        critical,
        reflection_breaking: !negative_region.is_empty(),
        dispersion_zeros: zeros,
        sign_changes,
        negative_region,
        singular_points,
        flat_band: false,
    })
}

/// Distance between two angles on the circle.
pub fn angle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Classification of the nearest-neighbour family.
pub fn nn_phase_region(gamma: f64, h: f64, d: f64) -> Result<(PhasePoint, NnRegion)> {
    let model = ModelSpec::nearest_neighbor(gamma, h, d)?;
    let point = classify(&model, DEFAULT_GRID)?;
    let dp2 = d * d + 1.0 - gamma * gamma;
    let eps = 1e-12;
    let region = if dp2 > 1.0 + eps && h * h < dp2 - eps {
        NnRegion::ConnectedCritical
    } else if dp2 > 1.0 + eps && (h * h - dp2).abs() <= eps {
        NnRegion::Boundary
    } else if (h.abs() - 1.0).abs() <= eps {
        NnRegion::FieldLine
    } else {
        NnRegion::NonCritical
    };
    Ok((point, region))
}

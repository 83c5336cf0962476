//! Ordinary least squares.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    pub rms: f64,
}

/// Minimise `|X c - y|` with rows of `X` given by `rows`.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<LeastSquares> {
    let m = rows.len();
    let k = rows.first().map(|r| r.len()).unwrap_or(0);
    if m < k || k == 0 || y.len() != m {
        return Err(Error::Precondition(format!("{m} points cannot fit {k} parameters")));
    }
    let x = DMatrix::from_fn(m, k, |i, j| rows[i][j]);
    let yv = DVector::from_column_slice(y);
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.min() <= 1e-12 * smax {
        return Err(Error::Precondition("rank-deficient fit".into()));
    }
    let c = svd
        .solve(&yv, 0.0)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    let r = &x * &c - &yv;
    Ok(LeastSquares {
        coefficients: c.iter().copied().collect(),
        rms: (r.norm_squared() / m as f64).sqrt(),
    })
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let rows: Vec<Vec<f64>> = x.iter().map(|&v| vec![v, 1.0]).collect();
    let f = least_squares(&rows, y)?;
    Ok(LineFit {
        slope: f.coefficients[0],
        intercept: f.coefficients[1],
        rms: f.rms,
    })
}

//! Maps between models that preserve block entropy under a stated rule.
//!
//! Majorana indices are zero based: `m_{2j} = b_j + b+_j`, `m_{2j+1} = i (b_j - b+_j)`,
//! and `H = scale * i sum_{a,b} T_ab m_a m_b` up to a constant.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::correlations::{correlation_matrix, gauge_kernel};
use crate::entropy::{gauge_entropy, majorana_entropy};
use crate::error::{Error, Result};
use crate::model::ModelSpec;

/// The `2x2` real block `T(x/y at site s, x/y at site s + d)`.
pub type TBlock = [[f64; 2]; 2];

/// Translation-invariant (period two in Majorana index) coupling matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MajoranaCoupling {
    pub blocks: BTreeMap<i64, TBlock>,
    pub scale: f64,
}

fn block_from(a: Complex64, b: Complex64) -> TBlock {
    [
        [0.25 * (a + b).im, 0.25 * (-a + b).re],
        [0.25 * (a + b).re, 0.25 * (a - b).im],
    ]
}

/// Real-space `T` of arbitrary couplings `A` (hermitian) and `B` (antisymmetric).
pub fn majorana_coupling_matrix(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut t = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for l in 0..n {
            let blk = block_from(a[(j, l)], b[(j, l)]);
            for p in 0..2 {
                for q in 0..2 {
                    t[(2 * j + p, 2 * l + q)] = blk[p][q];
                }
            }
        }
    }
    t
}

impl MajoranaCoupling {
    /// `T_{mu, nu}` on the infinite chain.
    pub fn t(&self, mu: i64, nu: i64) -> f64 {
        let (s, a) = (mu.div_euclid(2), mu.rem_euclid(2) as usize);
        let (r, b) = (nu.div_euclid(2), nu.rem_euclid(2) as usize);
        self.blocks.get(&(r - s)).map(|blk| blk[a][b]).unwrap_or(0.0)
    }

    /// Largest site offset with a stored block.
    pub fn reach(&self) -> i64 {
        self.blocks.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    fn magnitude(&self) -> f64 {
        self.blocks
            .values()
            .flat_map(|b| b.iter().flatten())
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Largest antisymmetry violation `|T_ab + T_ba|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let r = 2 * self.reach() + 2;
        let mut worst = 0.0f64;
        for mu in 0..2 {
            for nu in mu - r..=mu + r {
                worst = worst.max((self.t(mu, nu) + self.t(nu, mu)).abs());
            }
        }
        worst
    }

    /// First index pair violating `T_{j+1,l+1} = T_{j,l}`, if any.
    pub fn toeplitz_violation(&self) -> Option<(i64, i64)> {
        let tol = 1e-12 * self.magnitude().max(f64::MIN_POSITIVE);
        let r = 2 * self.reach() + 2;
        for nu in -r..=r {
            if (self.t(1, 1 + nu) - self.t(0, nu)).abs() > tol {
                return Some((0, nu));
            }
        }
        None
    }

    pub fn is_genuine_toeplitz(&self) -> bool {
        self.toeplitz_violation().is_none()
    }

    /// `t(k) = T_{0,k}` of a genuinely Toeplitz coupling.
    pub fn toeplitz_row(&self) -> Vec<(i64, f64)> {
        let r = 2 * self.reach() + 1;
        (-r..=r).map(|k| (k, self.t(0, k))).filter(|(_, v)| *v != 0.0).collect()
    }
}

/// Majorana coupling of a model, with `scale = 1`.
pub fn to_majorana(model: &ModelSpec) -> MajoranaCoupling {
    let r = model.range() as i64;
    let blocks = (-(r - 1)..r)
        .map(|d| (d, block_from(model.a(d), model.b(d))))
        .collect();
    MajoranaCoupling { blocks, scale: 1.0 }
}

/// Inverse of [`to_majorana`], absorbing `scale` into the coefficients.
pub fn from_majorana(coupling: &MajoranaCoupling) -> Result<ModelSpec> {
    if coupling.antisymmetry_defect() > 1e-12 * coupling.magnitude().max(1.0) {
        return Err(Error::InvalidModel("coupling matrix is not antisymmetric".into()));
    }
    let reach = coupling.reach();
    let mut hop = Vec::new();
    let mut pair = Vec::new();
    let s = coupling.scale;
    for d in 0..=reach {
        let blk = coupling.blocks.get(&d).copied().unwrap_or([[0.0; 2]; 2]);
        let (xx, xy, yx, yy) = (blk[0][0], blk[0][1], blk[1][0], blk[1][1]);
        let a = Complex64::new(2.0 * (yx - xy), 2.0 * (xx + yy)) * s;
        let b = Complex64::new(2.0 * (xy + yx), 2.0 * (xx - yy)) * s;
        if d == 0 {
            hop.push(Complex64::new(a.re, 0.0));
        } else {
            hop.push(a);
            pair.push(b);
        }
    }
    ModelSpec::new(reach as usize + 1, hop, pair)
}

/// Gauge-invariant model of a selfdual chain, with `S_L = S_{2L}(reduced) / 2`.
#[derive(Debug, Clone)]
pub struct SelfdualReduction {
    pub reduced: ModelSpec,
}

impl SelfdualReduction {
    pub fn entropy(&self, sites: usize, tol: f64) -> Result<f64> {
        let k = gauge_kernel(&self.reduced, 2 * sites, tol)?;
        Ok(0.5 * gauge_entropy(&k)?.0)
    }
}

/// Kramers-Wannier reduction: `A'(theta) = i T(-theta)`, i.e. `hop'[n] = -i T_{0,n}`.
pub fn kw_selfdual_reduce(model: &ModelSpec) -> Result<SelfdualReduction> {
    let t = to_majorana(model);
    if let Some((j, l)) = t.toeplitz_violation() {
        return Err(Error::NotSelfdual(format!(
            "T[{},{}] = {:e} differs from T[{},{}] = {:e}",
            j + 1,
            l + 1,
            t.t(j + 1, l + 1),
            j,
            l,
            t.t(j, l)
        )));
    }
    let row = t.toeplitz_row();
    let reach = row.iter().map(|(k, _)| k.abs()).max().unwrap_or(0) as usize;
    let mut hop = vec![Complex64::new(0.0, 0.0); reach + 1];
    for (k, v) in row {
        if k >= 0 {
            hop[k as usize] = Complex64::new(0.0, -v) * t.scale;
        }
    }
    let reduced = ModelSpec::new(reach + 1, hop, vec![])?;
    Ok(SelfdualReduction { reduced })
}

/// Two gauge-invariant chains carrying the even and odd Majorana sublattices.
#[derive(Debug, Clone)]
pub struct DecoupledChains {
    /// `H = sum (-A + B) b+ b`, kernel `<m_{2j+1} m_{2l+1}> / 2`.
    pub plus: ModelSpec,
    /// `H = sum (-A - B) b+ b`, kernel `<m_{2j} m_{2l}> / 2`.
    pub minus: ModelSpec,
}

impl DecoupledChains {
    /// Entropy carried by one Majorana sublattice: half the gauge-chain entropy.
    pub fn chain_entropy(&self, plus: bool, sites: usize, tol: f64) -> Result<f64> {
        let m = if plus { &self.plus } else { &self.minus };
        Ok(0.5 * gauge_entropy(&gauge_kernel(m, sites, tol)?)?.0)
    }

    pub fn entropy(&self, sites: usize, tol: f64) -> Result<f64> {
        Ok(self.chain_entropy(true, sites, tol)? + self.chain_entropy(false, sites, tol)?)
    }
}

/// Split a model with purely imaginary `A` and `B`.
pub fn decouple_direct(model: &ModelSpec) -> Result<DecoupledChains> {
    let tol = 1e-14 * model.scale().max(f64::MIN_POSITIVE);
    let r = model.range() as i64;
    for d in -(r - 1)..r {
        if model.a(d).re.abs() > tol || model.b(d).re.abs() > tol {
            return Err(Error::Precondition(format!(
                "coefficients at offset {d} are not purely imaginary"
            )));
        }
    }
    let build = |sign: f64| {
        let hop: Vec<Complex64> = (0..r).map(|d| -model.a(d) + model.b(d) * sign).collect();
        let mut hop = hop;
        hop[0] = Complex64::new(0.0, 0.0);
        ModelSpec::new(r as usize, hop, vec![])
    };
    Ok(DecoupledChains {
        plus: build(1.0)?,
        minus: build(-1.0)?,
    })
}

fn xy_group(mu: i64) -> u8 {
    match mu.rem_euclid(4) {
        0 | 3 => 1,
        _ => 2,
    }
}

fn xy_index(group: u8, site: i64, a: usize) -> i64 {
    match (group, a) {
        (1, 0) => 4 * site,
        (1, _) => 4 * site + 3,
        (_, 0) => 4 * site + 1,
        _ => 4 * site + 2,
    }
}

/// Split a coupling whose Majoranas `{4i, 4i+3}` and `{4i+1, 4i+2}` do not couple.
/// Blocks of `2L` sites satisfy `S_{2L} = S_L(first) + S_L(second)`.
pub fn xy_ising_decouple(coupling: &MajoranaCoupling) -> Result<(MajoranaCoupling, MajoranaCoupling)> {
    let tol = 1e-12 * coupling.magnitude().max(f64::MIN_POSITIVE);
    let r = 2 * coupling.reach() + 4;
    for mu in 0..4 {
        for nu in mu - r..=mu + r {
            if xy_group(mu) != xy_group(nu) && coupling.t(mu, nu).abs() > tol {
                return Err(Error::Precondition(format!(
                    "T[{mu},{nu}] = {:e} couples the two sublattices",
                    coupling.t(mu, nu)
                )));
            }
        }
    }
    let reach = coupling.reach() / 2 + 1;
    let half = |g: u8| {
        let mut blocks = BTreeMap::new();
        for d in -reach..=reach {
            let mut blk = [[0.0; 2]; 2];
            for a in 0..2 {
                for b in 0..2 {
                    blk[a][b] = coupling.t(xy_index(g, 0, a), xy_index(g, d, b));
                }
            }
            if blk.iter().flatten().any(|v| *v != 0.0) || d == 0 {
                blocks.insert(d, blk);
            }
        }
        MajoranaCoupling { blocks, scale: coupling.scale }
    };
    Ok((half(1), half(2)))
}

/// Outcome of [`rotate_to_real_pairing`].
#[derive(Debug, Clone)]
pub enum Rotation {
    Rotated { model: ModelSpec, axis: [f64; 3] },
    NotReducible(String),
}

/// Fourier coefficients (const, cos n, sin n) of the three symbol components.
fn component_coefficients(model: &ModelSpec) -> [Vec<f64>; 3] {
    let r = model.range();
    let len = 2 * r - 1;
    let (mut ba, mut mas, mut bs) = (vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    mas[0] = -2.0 * model.hop_coeffs()[0].re;
    for n in 1..r {
        let h = model.hop_coeffs()[n];
        let p = model.pair_coeffs()[n];
        mas[n] = -4.0 * h.re;
        ba[r - 1 + n] = -4.0 * p.re;
        bs[r - 1 + n] = 4.0 * p.im;
    }
    [ba, mas, bs]
}

/// Rodrigues rotation taking the unit vector `u` to `e_z`.
fn rotation_to_z(u: [f64; 3]) -> [[f64; 3]; 3] {
    let (x, y, z) = (u[0], u[1], u[2]);
    if z < -1.0 + 1e-15 {
        return [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];
    }
    // axis u x e_z = (y, -x, 0), cos = z
    let k = 1.0 / (1.0 + z);
    [
        [z + y * y * k, -x * y * k, -x],
        [-x * y * k, z + x * x * k, -y],
        [x, y, z],
    ]
}

/// Rotate the symbol so that `B^s` vanishes identically.
pub fn rotate_to_real_pairing(model: &ModelSpec) -> Rotation {
    let coeffs = component_coefficients(model);
    if coeffs[2].iter().all(|&x| x == 0.0) {
        return Rotation::Rotated { model: model.clone(), axis: [0.0, 0.0, 1.0] };
    }
    let len = coeffs[0].len().max(3);
    let mat = DMatrix::from_fn(len, 3, |i, j| coeffs[j].get(i).copied().unwrap_or(0.0));
    let svd = mat.svd(false, true);
    let vt = svd.v_t.unwrap();
    let smax = svd.singular_values.max();
    let null: Vec<[f64; 3]> = (0..3)
        .filter(|&i| svd.singular_values[i] <= 1e-10 * smax)
        .map(|i| [vt[(i, 0)], vt[(i, 1)], vt[(i, 2)]])
        .collect();
    // a usable null vector may not mix hopping (even) with pairing (odd) parts
    let c = match null.len() {
        0 => return Rotation::NotReducible("symbol components are linearly independent".into()),
        1 => {
            let c = null[0];
            if c[1].abs() > 1e-10 {
                return Rotation::NotReducible(
                    "only null vector mixes hopping and pairing components".into(),
                );
            }
            c
        }
        _ => {
            let (p, q) = (null[0], null[1]);
            let c = if p[1].abs() < 1e-14 {
                p
            } else {
                let t = q[1] / p[1];
                [q[0] - t * p[0], 0.0, q[2] - t * p[2]]
            };
            let n = (c[0] * c[0] + c[2] * c[2]).sqrt();
            [c[0] / n, 0.0, c[2] / n]
        }
    };
    // the spinor components are (B^a, -A^s, -B^s); the constraint is c . (B^a, -A^s, B^s) = 0
    let cw = [c[0], 0.0, -c[2]];
    let norm = (cw[0] * cw[0] + cw[2] * cw[2]).sqrt();
    let rot = rotation_to_z([cw[0] / norm, 0.0, cw[2] / norm]);
    let w = [&coeffs[0], &coeffs[1], &coeffs[2].iter().map(|x| -x).collect::<Vec<_>>()];
    let len = coeffs[0].len();
    let rotated: Vec<[f64; 3]> = (0..len)
        .map(|i| {
            let v = [w[0][i], w[1][i], w[2][i]];
            let mut o = [0.0; 3];
            for a in 0..3 {
                o[a] = rot[a][0] * v[0] + rot[a][1] * v[1] + rot[a][2] * v[2];
            }
            o
        })
        .collect();
    let r = model.range();
    let mut hop = model.hop_coeffs().to_vec();
    let mut pair = vec![Complex64::new(0.0, 0.0); r - 1];
    hop[0] = Complex64::new(-rotated[0][1] / 2.0, 0.0);
    for n in 1..r {
        hop[n] = Complex64::new(-rotated[n][1] / 4.0, hop[n].im);
        pair[n - 1] = Complex64::new(-rotated[r - 1 + n][0] / 4.0, 0.0);
    }
    match ModelSpec::new(r, hop, pair) {
        Ok(model) => Rotation::Rotated { model, axis: c },
        Err(e) => Rotation::NotReducible(e.to_string()),
    }
}

/// Direct `S_L` from the Majorana correlation matrix (reference for transform rules).
pub fn direct_entropy(model: &ModelSpec, sites: usize, tol: f64) -> Result<f64> {
    Ok(majorana_entropy(&correlation_matrix(model, sites, tol)?.data)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cplx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ising_dm_is_genuine_toeplitz() {
        let d = 2.0;
        let t = to_majorana(&ModelSpec::nearest_neighbor(1.0, 1.0, d).unwrap());
        assert!(t.is_genuine_toeplitz());
        assert_eq!(t.t(0, 1), 0.5);
        assert_eq!(t.t(0, 2), -d / 4.0);
        assert_eq!(t.t(0, 3), 0.0);
        assert!(!to_majorana(&ModelSpec::nearest_neighbor(1.0, 0.9, 0.0).unwrap()).is_genuine_toeplitz());
    }

    #[test]
    fn round_trip() {
        let m = ModelSpec::new(
            3,
            vec![cplx(0.3, 0.0), cplx(-1.2, 0.7), cplx(0.25, -0.5)],
            vec![cplx(0.4, 0.9), cplx(-0.6, 0.1)],
        )
        .unwrap();
        let t = to_majorana(&m);
        assert_eq!(t.antisymmetry_defect(), 0.0);
        let back = from_majorana(&t).unwrap();
        for n in -2..=2 {
            assert!((back.a(n) - m.a(n)).norm() < 1e-15);
            assert!((back.b(n) - m.b(n)).norm() < 1e-15);
        }
    }

    #[test]
    fn real_couplings_only_mix_parities() {
        let t = to_majorana(&ModelSpec::real(&[0.3, 1.0, -0.5], &[0.7, 0.2]).unwrap());
        for blk in t.blocks.values() {
            assert_eq!(blk[0][0], 0.0);
            assert_eq!(blk[1][1], 0.0);
        }
        let t = to_majorana(
            &ModelSpec::new(2, vec![cplx(0.0, 0.0), cplx(0.0, 0.8)], vec![cplx(0.0, 0.3)]).unwrap(),
        );
        for blk in t.blocks.values() {
            assert_eq!(blk[0][1], 0.0);
            assert_eq!(blk[1][0], 0.0);
        }
    }

    #[test]
    fn rotation_trivial_cases() {
        let real = ModelSpec::real(&[0.3, 1.0], &[0.7]).unwrap();
        match rotate_to_real_pairing(&real) {
            Rotation::Rotated { model, .. } => assert_eq!(model, real),
            other => panic!("{other:?}"),
        }
        let generic = ModelSpec::new(
            3,
            vec![cplx(0.3, 0.0), cplx(1.0, 0.2), cplx(0.5, 0.0)],
            vec![cplx(0.7, 0.1), cplx(0.2, -0.9)],
        )
        .unwrap();
        assert!(matches!(rotate_to_real_pairing(&generic), Rotation::NotReducible(_)));
    }

    #[test]
    fn decouple_rejects_real_parts() {
        assert!(decouple_direct(&ModelSpec::real(&[0.0, 1.0], &[]).unwrap()).is_err());
    }

    #[test]
    fn xy_pattern_rejected_for_ising() {
        let t = to_majorana(&ModelSpec::nearest_neighbor(1.0, 0.5, 0.0).unwrap());
        assert!(xy_ising_decouple(&t).is_err());
    }
}

//! Globally adaptive Gauss-Kronrod (21 point) quadrature for vector integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208136221775,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<const K: usize> {
    pub value: [f64; K],
    pub error: f64,
    pub intervals: usize,
}

struct Piece<const K: usize> {
    a: f64,
    b: f64,
    value: [f64; K],
    error: f64,
}

impl<const K: usize> PartialEq for Piece<K> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<const K: usize> Eq for Piece<K> {}
impl<const K: usize> PartialOrd for Piece<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const K: usize> Ord for Piece<K> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn qk21<const K: usize, F: Fn(f64) -> [f64; K]>(f: &F, a: f64, b: f64) -> Piece<K> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = [0.0; K];
    let mut resg = [0.0; K];
    let mut resabs = [0.0; K];
    let mut fv1 = [[0.0; K]; 10];
    let mut fv2 = [[0.0; K]; 10];
    for k in 0..K {
        resk[k] = WGK[10] * fc[k];
        resabs[k] = WGK[10] * fc[k].abs();
    }
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        for k in 0..K {
            resk[k] += WGK[j] * (f1[k] + f2[k]);
            resabs[k] += WGK[j] * (f1[k].abs() + f2[k].abs());
            if j % 2 == 1 {
                resg[k] += WG[j / 2] * (f1[k] + f2[k]);
            }
        }
        fv1[j] = f1;
        fv2[j] = f2;
    }
    let mut error = 0.0f64;
    let mut value = [0.0; K];
    for k in 0..K {
        let mean = 0.5 * resk[k];
        let mut asc = WGK[10] * (fc[k] - mean).abs();
        for j in 0..10 {
            asc += WGK[j] * ((fv1[j][k] - mean).abs() + (fv2[j][k] - mean).abs());
        }
        let asc = asc * h.abs();
        let mut err = ((resk[k] - resg[k]) * h).abs();
        if asc != 0.0 && err != 0.0 {
            err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
        }
        let rabs = resabs[k] * h.abs();
        if rabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * rabs);
        }
        value[k] = resk[k] * h;
        error = error.max(err);
    }
    Piece { a, b, value, error }
}

/// Integrate `f` over `[points[0], points[last]]`, never straddling an
/// interior point and starting from pieces no longer than `max_len`.
pub fn integrate<const K: usize, F: Fn(f64) -> [f64; K]>(
    f: &F,
    points: &[f64],
    max_len: f64,
    opts: QuadOptions,
) -> QuadResult<K> {
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let n = ((b - a) / max_len).ceil().max(1.0) as usize;
        for i in 0..n {
            let x0 = a + (b - a) * i as f64 / n as f64;
            let x1 = if i + 1 == n {
                b
            } else {
                a + (b - a) * (i + 1) as f64 / n as f64
            };
            heap.push(qk21(f, x0, x1));
        }
    }
    let mut total_err: f64 = heap.iter().map(|p| p.error).sum();
    let mut steps = 0usize;
    while total_err > opts.abs_tol && heap.len() < opts.max_intervals {
        let worst = match heap.peek() {
            Some(p) => p,
            None => break,
        };
        let (a, b) = (worst.a, worst.b);
        let m = 0.5 * (a + b);
        if m <= a || m >= b || (b - a) < 1e-14 * (1.0 + a.abs()) {
            break;
        }
        let worst = heap.pop().unwrap();
        let l = qk21(f, a, m);
        let r = qk21(f, m, b);
        total_err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        steps += 1;
        if steps % 256 == 0 {
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    let mut value = [0.0; K];
    let mut error = 0.0;
    let intervals = heap.len();
    for p in heap.into_iter() {
        for k in 0..K {
            value[k] += p.value[k];
        }
        error += p.error;
    }
    QuadResult {
        value,
        error,
        intervals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_and_trig() {
        let r = integrate(&|x: f64| [x * x, x.cos()], &[0.0, 1.0], 1.0, QuadOptions::default());
        assert!((r.value[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.value[1] - 1f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn oscillatory_with_jump() {
        let l = 300.0;
        let f = |x: f64| [if x < 0.3 { (l * x).cos() } else { 0.0 }];
        let r = integrate(&f, &[-PI, 0.3, PI], 2.0 * PI / l, QuadOptions::default());
        let exact = ((l * 0.3).sin() - (l * -PI).sin()) / l;
        assert!((r.value[0] - exact).abs() < 1e-13);
        assert!(r.error < 1e-12);
    }

    #[test]
    fn kink_is_resolved_adaptively() {
        let r = integrate(&|x: f64| [(x - 0.123).abs()], &[-1.0, 1.0], 2.0, QuadOptions::default());
        let exact = 0.5 * (1.123f64.powi(2) + 0.877f64.powi(2));
        assert!((r.value[0] - exact).abs() < 1e-12);
    }
}

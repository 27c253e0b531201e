//! Adaptive Gauss-Kronrod and Gauss-Hermite quadrature.

use crate::error::{QuenchError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// 7-point Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 1 << 22;

struct Piece {
    lo: f64,
    hi: f64,
    val: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn kronrod(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64) -> Piece {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut k_abs = WGK[7] * fc.abs();
    for i in 0..7 {
        let dx = h * XGK[i];
        let (f1, f2) = (f(c - dx), f(c + dx));
        k += WGK[i] * (f1 + f2);
        k_abs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    // below this the difference is rounding noise
    let floor = 50.0 * f64::EPSILON * k_abs * h.abs();
    let err = ((k - g) * h).abs();
    Piece {
        lo,
        hi,
        val: k * h,
        err: if err <= floor { 0.0 } else { err },
    }
}

/// Integral of `f` over `[a, b]` by globally adaptive 15-point
/// Gauss-Kronrod: the interval with the largest Kronrod/Gauss difference is
/// bisected until the differences sum to at most `tol`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut heap = std::collections::BinaryHeap::new();
    let first = kronrod(&mut f, a, b);
    let mut total_err = first.err;
    heap.push(first);
    let mut count = 1usize;
    while total_err > tol {
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if count >= MAX_INTERVALS || mid == worst.lo || mid == worst.hi {
            return Err(QuenchError::invalid("adaptive quadrature did not converge"));
        }
        let left = kronrod(&mut f, worst.lo, mid);
        let right = kronrod(&mut f, mid, worst.hi);
        count += 1;
        total_err += left.err + right.err - worst.err;
        if count % 1024 == 0 {
            total_err = heap.iter().map(|p: &Piece| p.err).sum::<f64>() + left.err + right.err;
        }
        heap.push(left);
        heap.push(right);
    }
    // ordered, compensated sum of the pieces
    let mut pieces = heap.into_vec();
    pieces.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    let (mut total, mut comp) = (0.0, 0.0);
    for p in pieces {
        let y = p.val - comp;
        let s = total + y;
        comp = (s - total) - y;
        total = s;
    }
    Ok(total)
}

/// Nodes and weights of `n`-point Gauss-Hermite quadrature for weight
/// `exp(-x^2)`, by Newton iteration on the normalized Hermite recurrence.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let nf = n as f64;
    let half = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..half {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.855_75 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / j as f64).sqrt() * p2 - ((j - 1) as f64 / j as f64).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

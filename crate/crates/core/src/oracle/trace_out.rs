//! Single-site reduced density matrix by direct numerical integration of the
//! full wavefunction over the other `N - 1` coordinates.

use faer::{Mat, Side};
use num_complex::Complex64;

use super::quadrature::gauss_hermite;
use crate::error::{QuenchError, Result};

/// `rho(x, x') = int psi(x, y) conj(psi(x', y)) dy` for
/// `psi = (det(Omega / pi))^(1/4) exp(-X^T (Omega - 2i Bt) X / 2)`.
///
/// The rest-of-chain coordinates are whitened with the eigenvectors of their
/// block of `Omega`, which turns the integral into a Gauss-Hermite problem;
/// it is then summed over the full tensor grid of `order` nodes per
/// dimension. Cost is `order^(N-1)`, so keep `N <= 6`.
///
/// `Bt` survives only in the part linear in the rest coordinates, as a factor
/// oscillating at roughly `2 |Bt| |x - x'|` in whitened units. Once squeezing
/// has grown `Bt` past what `order` nodes resolve the sum stops converging,
/// so agreement between two orders is the thing to check at late times.
pub fn trace_out_element(
    omega: &Mat<f64>,
    btilde: &Mat<f64>,
    site: usize,
    x: f64,
    x_prime: f64,
    order: usize,
) -> Result<Complex64> {
    let n = omega.nrows();
    if n < 2 || n > 7 || site >= n || btilde.nrows() != n {
        return Err(QuenchError::invalid("trace-out oracle needs 2 <= N <= 7 and a valid site"));
    }
    let rest: Vec<usize> = (0..n).filter(|&k| k != site).collect();
    let d = rest.len();

    let det = omega
        .llt(Side::Lower)
        .map_err(|_| QuenchError::invalid("Omega not positive definite"))?
        .L()
        .diagonal()
        .column_vector()
        .iter()
        .map(|l| l * l)
        .product::<f64>();
    let block = Mat::<f64>::from_fn(d, d, |a, b| omega[(rest[a], rest[b])]);
    let eig = block
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| QuenchError::invalid("eigendecomposition failed"))?;
    let mu: Vec<f64> = eig.S().column_vector().iter().copied().collect();
    let v = eig.U();

    let a = |r: usize, c: usize| Complex64::new(omega[(r, c)], -2.0 * btilde[(r, c)]);
    // exponent linear in z: -sum_k coef_k z_k
    let coef: Vec<Complex64> = (0..d)
        .map(|k| {
            let s: Complex64 = (0..d)
                .map(|l| (a(site, rest[l]) * x + a(site, rest[l]).conj() * x_prime) * v[(l, k)])
                .sum();
            s / mu[k].sqrt()
        })
        .collect();

    let (nodes, weights) = gauss_hermite(order);
    // factor[k][q] = w_q exp(-coef_k z_q)
    let factor: Vec<Vec<Complex64>> = coef
        .iter()
        .map(|c| nodes.iter().zip(&weights).map(|(&z, &w)| w * (-c * z).exp()).collect())
        .collect();

    let mut idx = vec![0usize; d];
    let mut partial = vec![Complex64::new(1.0, 0.0); d + 1];
    let mut sum = Complex64::new(0.0, 0.0);
    let mut level = 0;
    loop {
        // refresh partial products from `level` down, then sum the innermost axis
        for k in level..d - 1 {
            partial[k + 1] = partial[k] * factor[k][idx[k]];
        }
        let last = &factor[d - 1];
        sum += partial[d - 1] * last.iter().sum::<Complex64>();
        // odometer over the outer d - 1 axes
        let mut k = d - 1;
        loop {
            if k == 0 {
                let jac: f64 = mu.iter().map(|m| m.sqrt()).product();
                let pref = (det / std::f64::consts::PI.powi(n as i32)).sqrt() / jac;
                let diag = a(site, site);
                let outer = (-0.5 * (diag * x * x + diag.conj() * x_prime * x_prime)).exp();
                return Ok(pref * outer * sum);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < order {
                level = k;
                break;
            }
            idx[k] = 0;
        }
    }
}

//! The Gaussian many-body wavefunction and its exact single-site reduced
//! density matrix.
//!
//! The state is `psi ~ exp(i X^T Bt X - X^T Omega X / 2)` with
//! `Omega = U^T diag(sqrt(lambda0) / eta) U` and
//! `Bt = U^T diag(eta' / (4 eta)) U`. Tracing out every site but one leaves
//! `rho(x, x') = sqrt((g - b)/pi) exp(iZ(x^2 - x'^2)) exp(-g(x^2 + x'^2)/2 + b x x')`
//! whose exponents come from Schur complements of `Omega`.

use faer::linalg::triangular_solve::solve_lower_triangular_in_place;
use faer::{Mat, Par, Side};
use num_complex::Complex64;

use crate::ermakov::ModeCoefficients;
use crate::error::{QuenchError, Result};
use crate::protocol::ModeTransform;

/// Diagonals of `Omega` and `Bt` in the mode basis at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForms {
    pub t: f64,
    /// `sqrt(lambda_m(0)) / eta_m(t)`
    pub omega_diag: Vec<f64>,
    /// `eta_m'(t) / (4 eta_m(t))`, equal to `b_m' / (2 b_m)`
    pub btilde_diag: Vec<f64>,
}

impl QuadraticForms {
    pub fn n(&self) -> usize {
        self.omega_diag.len()
    }

    /// Dense `Omega` in the site basis.
    pub fn omega_matrix(&self, transform: &ModeTransform) -> Mat<f64> {
        sandwich(transform, &self.omega_diag)
    }

    /// Dense `Bt` in the site basis.
    pub fn btilde_matrix(&self, transform: &ModeTransform) -> Mat<f64> {
        sandwich(transform, &self.btilde_diag)
    }

    // Omega is circulant when the basis is the cos/sin one and degenerate
    // partners carry identical values.
    fn is_circulant(&self, transform: &ModeTransform) -> bool {
        let n = self.n();
        transform.is_standard()
            && (1..n).all(|m| {
                self.omega_diag[m - 1] == self.omega_diag[n - m - 1]
                    && self.btilde_diag[m - 1] == self.btilde_diag[n - m - 1]
            })
    }
}

fn sandwich(transform: &ModeTransform, diag: &[f64]) -> Mat<f64> {
    let u = transform.matrix();
    let n = diag.len();
    let scaled = Mat::<f64>::from_fn(n, n, |m, j| diag[m] * u[(m, j)]);
    u.transpose() * scaled
}

/// Column `site` of `U^T diag(d) U`.
fn sandwich_column(transform: &ModeTransform, diag: &[f64], site: usize) -> Vec<f64> {
    let u = transform.matrix();
    let w: Vec<f64> = diag.iter().zip(u.col_as_slice(site)).map(|(d, x)| d * x).collect();
    (0..diag.len()).map(|a| dot(u.col_as_slice(a), &w)).collect()
}

// Four interleaved partial sums in a fixed order, so the result does not
// depend on the platform.
fn dot(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (xc, yc) = (x.chunks_exact(4), y.chunks_exact(4));
    let tail: f64 = xc.remainder().iter().zip(yc.remainder()).map(|(a, b)| a * b).sum();
    for (a, b) in xc.zip(yc) {
        for k in 0..4 {
            acc[k] += a[k] * b[k];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Mode-basis forms at time `t` from the per-mode Ermakov solutions.
pub fn build_quadratic_forms(modes: &[ModeCoefficients], t: f64) -> Result<QuadraticForms> {
    let mut omega_diag = Vec::with_capacity(modes.len());
    let mut btilde_diag = Vec::with_capacity(modes.len());
    for (i, mode) in modes.iter().enumerate() {
        let s = mode.eta(t);
        if !(s.eta > 0.0 && s.eta.is_finite()) {
            return Err(QuenchError::numerical(
                t,
                format!("eta = {} for mode {}", s.eta, i + 1),
            ));
        }
        omega_diag.push(mode.lambda_initial().sqrt() / s.eta);
        btilde_diag.push(s.eta_dot / (4.0 * s.eta));
    }
    Ok(QuadraticForms {
        t,
        omega_diag,
        btilde_diag,
    })
}

/// Exponents of the single-site reduced density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RdmParams {
    /// Phase curvature `Z`.
    pub z: f64,
    pub gamma_r: f64,
    pub beta_r: f64,
    /// `gamma_r - beta_r`, held separately: for squeezed states both exponents
    /// are large and their difference would lose most of its digits.
    pub gap: f64,
}

impl RdmParams {
    pub fn new(z: f64, gamma_r: f64, beta_r: f64) -> Self {
        Self {
            z,
            gamma_r,
            beta_r,
            gap: gamma_r - beta_r,
        }
    }

    pub fn gamma_minus_beta(&self) -> f64 {
        self.gap
    }

    /// `<x^2>` of the site.
    pub fn position_variance(&self) -> f64 {
        0.5 / self.gamma_minus_beta()
    }

    /// `<p^2>` of the site, `(g^2 - b^2 + 4Z^2) / (2 (g - b))`.
    pub fn momentum_variance(&self) -> f64 {
        let gmb = self.gamma_minus_beta();
        let gpb = self.gamma_r + self.beta_r;
        (gmb * gpb + 4.0 * self.z * self.z) / (2.0 * gmb)
    }

    /// `<{x, p}> / 2` of the site.
    pub fn xp_covariance(&self) -> f64 {
        self.z / self.gamma_minus_beta()
    }

    /// `nu = sqrt((g + b) / (g - b)) / 2 >= 1/2`.
    pub fn symplectic_eigenvalue(&self) -> f64 {
        0.5 * ((self.gamma_r + self.beta_r) / self.gamma_minus_beta()).sqrt()
    }

    /// Rejects parameters that do not describe a normalizable state with
    /// `0 <= beta < gamma`.
    pub fn check(&self, t: f64) -> Result<()> {
        let finite = self.z.is_finite() && self.gamma_r.is_finite() && self.beta_r.is_finite() && self.gap.is_finite();
        if !finite {
            return Err(QuenchError::numerical(t, format!("non-finite RDM exponents {self:?}")));
        }
        if !(self.beta_r >= 0.0) {
            return Err(QuenchError::numerical(t, format!("beta_r = {} < 0", self.beta_r)));
        }
        if !(self.gap > 0.0 && self.beta_r < self.gamma_r) {
            return Err(QuenchError::numerical(
                t,
                format!(
                    "beta_r = {} >= gamma_r = {} (gamma_r - beta_r = {:e})",
                    self.beta_r, self.gamma_r, self.gap
                ),
            ));
        }
        Ok(())
    }
}

/// `(Z, gamma_r, beta_r)` for site `site` (0-based) from Schur complements of
/// the `(n-1)`-site block, using one Cholesky factorization and triangular
/// solves for both right-hand sides.
pub fn rdm_params(forms: &QuadraticForms, transform: &ModeTransform, site: usize) -> Result<RdmParams> {
    let n = forms.n();
    if n < 2 || transform.n() != n {
        return Err(QuenchError::invalid("forms and transform sizes differ"));
    }
    if site >= n {
        return Err(QuenchError::invalid(format!("site {site} outside 0..{n}")));
    }
    let t = forms.t;
    let m = n - 1;
    // rest-of-chain sites in cyclic order after `site`
    let rest = |k: usize| (site + 1 + k) % n;

    let omega_col = sandwich_column(transform, &forms.omega_diag, site);
    let btilde_col = sandwich_column(transform, &forms.btilde_diag, site);

    let block = if forms.is_circulant(transform) {
        // Omega[a][b] depends on (a - b) mod n only, and first[d] = first[n - d]
        let first = if site == 0 {
            omega_col.clone()
        } else {
            sandwich_column(transform, &forms.omega_diag, 0)
        };
        Mat::<f64>::from_fn(m, m, |a, b| first[a.abs_diff(b)])
    } else {
        let full = forms.omega_matrix(transform);
        Mat::<f64>::from_fn(m, m, |a, b| full[(rest(a), rest(b))])
    };

    let llt = block.llt(Side::Lower).map_err(|e| {
        QuenchError::numerical(t, format!("rest-of-chain block of Omega not positive definite: {e:?}"))
    })?;
    let mut rhs = Mat::<f64>::from_fn(m, 2, |a, c| {
        if c == 0 {
            omega_col[rest(a)]
        } else {
            btilde_col[rest(a)]
        }
    });
    solve_lower_triangular_in_place(llt.L(), rhs.as_mut(), Par::Seq);

    // with w = L^-1 Omega_col and v = L^-1 Bt_col:
    // P = |w|^2, Q = |v|^2, R = v.w
    let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);
    for a in 0..m {
        let (w, v) = (rhs[(a, 0)], rhs[(a, 1)]);
        p += w * w;
        q += v * v;
        r += v * w;
    }
    // gamma_r - beta_r is the Schur complement itself; the Q terms cancel
    let gap = omega_col[site] - p;
    let beta_r = 0.5 * p + 2.0 * q;
    let params = RdmParams {
        z: btilde_col[site] - r,
        gamma_r: gap + beta_r,
        beta_r,
        gap,
    };
    params.check(t)?;
    Ok(params)
}

/// `rho(x, x')` of the single-site reduced density matrix.
pub fn rdm_element(params: &RdmParams, x: f64, x_prime: f64) -> Complex64 {
    let RdmParams { z, gamma_r, beta_r, gap } = *params;
    let norm = (gap / std::f64::consts::PI).sqrt();
    let real = -0.5 * gamma_r * (x * x + x_prime * x_prime) + beta_r * x * x_prime;
    let phase = z * (x * x - x_prime * x_prime);
    Complex64::from_polar(norm * real.exp(), phase)
}

/// `rho(x, x + delta) / rho(x, x)`.
///
/// Equals `exp(-iZ(2 x delta + delta^2)) exp(-(g - b) x delta - g delta^2 / 2)`.
pub fn offdiag_ratio(params: &RdmParams, x: f64, delta: f64) -> Complex64 {
    let RdmParams { z, gamma_r, gap, .. } = *params;
    let modulus = (-gap * x * delta - 0.5 * gamma_r * delta * delta).exp();
    Complex64::from_polar(modulus, -z * (2.0 * x * delta + delta * delta))
}

/// Second moments of one site.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SiteCovariance {
    /// `<x^2>`
    pub xx: f64,
    /// `<p^2>`
    pub pp: f64,
    /// `<{x, p}> / 2`
    pub xp: f64,
}

/// Site moments summed mode by mode. Each mode is an independent Gaussian
/// `exp(-(D_omega - 2i D_b) y^2 / 2)`, so no Schur complement is involved.
pub fn covariance_from_modes(forms: &QuadraticForms, transform: &ModeTransform, site: usize) -> SiteCovariance {
    let mut cov = SiteCovariance {
        xx: 0.0,
        pp: 0.0,
        xp: 0.0,
    };
    for (m, (&dw, &db)) in forms.omega_diag.iter().zip(&forms.btilde_diag).enumerate() {
        let u2 = transform.get(m, site).powi(2);
        cov.xx += u2 / (2.0 * dw);
        cov.pp += u2 * (dw * dw + 4.0 * db * db) / (2.0 * dw);
        cov.xp += u2 * db / dw;
    }
    cov
}

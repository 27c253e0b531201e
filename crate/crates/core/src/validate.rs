//! The oracle suite behind the `validate` subcommand.

use std::time::Instant;

use crate::ermakov::ModeCoefficients;
use crate::error::Result;
use crate::gaussian::{covariance_from_modes, rdm_element, rdm_params};
use crate::observables::{entanglement_entropy, momentum_distribution};
use crate::oracle::{self, quadrature, ErmakovOdeOptions};
use crate::protocol::{build_mode_transform, ChainSpec, ModeTransform, QuenchProtocol};
use crate::gaussian::RdmParams;
use crate::simulation::Simulator;

/// Whether a check passes below or above its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Below,
    /// Fault-injection checks: the oracle must notice the fault.
    Above,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub residual: f64,
    pub threshold: f64,
    pub expect: Expect,
    pub seconds: f64,
    /// Set when the check could not be evaluated.
    pub error: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && match self.expect {
                Expect::Below => self.residual < self.threshold,
                Expect::Above => self.residual > self.threshold,
            }
    }
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let rel = match self.expect {
            Expect::Below => "<",
            Expect::Above => ">",
        };
        match &self.error {
            Some(e) => write!(f, "{status} {:<28} error: {e}", self.name),
            None => write!(
                f,
                "{status} {:<28} residual {:.3e} (need {rel} {:.0e}) [{:.1} s]",
                self.name, self.residual, self.threshold, self.seconds
            ),
        }
    }
}

fn check(name: &'static str, threshold: f64, expect: Expect, body: impl FnOnce() -> Result<f64>) -> CheckResult {
    let start = Instant::now();
    let (residual, error) = match body() {
        Ok(r) => (r, None),
        Err(e) => (f64::NAN, Some(e.to_string())),
    };
    CheckResult {
        name,
        residual,
        threshold,
        expect,
        seconds: start.elapsed().as_secs_f64(),
        error,
    }
}

/// The alternating protocol of the reference setup: omega 3 <-> 20, k = 2,
/// T = 4.
pub fn reference_protocol(n: usize, quenches: usize) -> Result<QuenchProtocol> {
    QuenchProtocol::alternating(ChainSpec::new(n, 3.0, 2.0)?, 20.0, 4.0, quenches)
}

/// `count` mode numbers spread evenly over `1..=n`, always including both
/// ends.
pub fn spread_modes(n: usize, count: usize) -> Vec<usize> {
    if count >= n {
        return (1..=n).collect();
    }
    let mut m: Vec<usize> = (0..count)
        .map(|k| 1 + ((k * (n - 1)) as f64 / (count - 1) as f64).round() as usize)
        .collect();
    m.dedup();
    m
}

/// Uniform samples of `[0, t_max]` plus every boundary.
pub fn sample_times(t_max: f64, count: usize, boundaries: &[f64]) -> Vec<f64> {
    let mut t: Vec<f64> = (0..count).map(|k| t_max * k as f64 / (count - 1) as f64).collect();
    t.extend(boundaries.iter().filter(|&&b| b <= t_max));
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

/// Largest `|eta_closed_form - eta_ode|` over `modes` and `times`. A nonzero
/// `jump_bias` corrupts the jump matrix of the closed form (fault injection).
pub fn ermakov_ode_error(protocol: &QuenchProtocol, modes: &[usize], times: &[f64], jump_bias: f64) -> Result<f64> {
    let opts = ErmakovOdeOptions::default();
    let mut worst: f64 = 0.0;
    for &m in modes {
        let (lambda0, schedule) = protocol.mode_schedule(m);
        let closed = ModeCoefficients::propagate(lambda0, &schedule, jump_bias)?;
        let ode = oracle::integrate_ermakov(lambda0, &schedule, times, &opts)?;
        for (&t, s) in times.iter().zip(&ode) {
            worst = worst.max((closed.eta(t).eta - s.eta).abs());
        }
    }
    Ok(worst)
}

/// Largest `|Delta eta|` and `|Delta eta'|` across stage starts, evaluating
/// both neighbouring stages at the boundary.
pub fn boundary_mismatch(modes: &[ModeCoefficients]) -> f64 {
    let mut worst: f64 = 0.0;
    for mode in modes {
        for (k, seg) in mode.segments().iter().enumerate().skip(1) {
            let before = mode.eta_on_segment(k - 1, seg.start);
            let after = mode.eta_on_segment(k, seg.start);
            worst = worst
                .max((before.eta - after.eta).abs())
                .max((before.eta_dot - after.eta_dot).abs());
        }
    }
    worst
}

/// Relative violations of the three covariance identities at one site.
pub fn covariance_identity_error(sim: &Simulator, t: f64, site: usize) -> Result<f64> {
    let forms = sim.forms(t)?;
    let p = rdm_params(&forms, sim.transform(), site)?;
    let cov = covariance_from_modes(&forms, sim.transform(), site);
    let e1 = (p.position_variance() - cov.xx).abs() / cov.xx;
    let e2 = (p.momentum_variance() - cov.pp).abs() / cov.pp;
    let e3 = (p.xp_covariance() - cov.xp).abs() / (cov.xx * cov.pp).sqrt();
    Ok(e1.max(e2).max(e3))
}

/// Largest `|rho_quadrature - rho|` over a grid of `(x, x')` for `n` sites
/// under the five-quench reference protocol at `t`.
pub fn trace_out_error(n: usize, t: f64, order: usize) -> Result<f64> {
    let sim = Simulator::new(reference_protocol(n, 5)?)?;
    let forms = sim.forms(t)?;
    let u = sim.transform();
    let omega = forms.omega_matrix(u);
    let btilde = forms.btilde_matrix(u);
    let site = 0;
    let p = rdm_params(&forms, u, site)?;
    let width = p.position_variance().sqrt();
    let pts = [-1.0, -0.3, 0.0, 0.5, 1.2];
    let mut worst: f64 = 0.0;
    for &a in &pts {
        for &b in &pts {
            let (x, xp) = (a * width, b * width);
            let quad = oracle::trace_out_element(&omega, &btilde, site, x, xp, order)?;
            worst = worst.max((quad - rdm_element(&p, x, xp)).norm());
        }
    }
    Ok(worst)
}

/// Largest `|F - F_heisenberg|` for all site pairs at `times`.
pub fn heisenberg_otoc_error(protocol: &QuenchProtocol, times: &[f64], step: f64) -> Result<f64> {
    let sim = Simulator::new(protocol.clone())?;
    let n = protocol.n_sites();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let phi = oracle::heisenberg_position_response(protocol, j, times, step)?;
        for (k, &t) in times.iter().enumerate() {
            for i in 0..n {
                worst = worst.max((sim.otoc(i, j, t) - phi[k][i] * phi[k][i]).abs());
            }
        }
    }
    Ok(worst)
}

/// Deterministic low-discrepancy parameters `0 <= beta < gamma`, with `gamma`
/// spread log-uniformly over `[1e-3, 1e3]` and `beta / gamma` over `[0, 1)`.
pub fn entropy_test_params(count: usize) -> Vec<RdmParams> {
    const G1: f64 = 0.754_877_666_246_692_8;
    const G2: f64 = 0.569_840_290_998_053_3;
    (1..=count)
        .map(|k| {
            let u = (k as f64 * G1).fract();
            let v = (k as f64 * G2).fract();
            let gamma = 10f64.powf(-3.0 + 6.0 * u);
            RdmParams::new(0.0, gamma, gamma * v)
        })
        .collect()
}

/// Largest `|S - S_symplectic|`.
pub fn entropy_equivalence_error(params: &[RdmParams]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in params {
        let s = entanglement_entropy(p)?;
        worst = worst.max((s - oracle::symplectic_entropy(p.symplectic_eigenvalue())).abs());
    }
    Ok(worst)
}

/// `|int n(p) dp - 1|` by adaptive quadrature over +-14 standard deviations.
pub fn momentum_normalization_error(p: &RdmParams) -> Result<f64> {
    let half = 14.0 * p.momentum_variance().sqrt();
    let total = quadrature::integrate(|k| momentum_distribution(p, k), -half, half, 1e-13)?;
    Ok((total - 1.0).abs())
}

/// Observables after rotating the first degenerate pair of the mode basis by
/// `angle`, against the standard basis: largest difference of entropy and
/// OTOC over `times`.
pub fn degenerate_rotation_error(protocol: &QuenchProtocol, angle: f64, times: &[f64]) -> Result<f64> {
    let n = protocol.n_sites();
    let standard = build_mode_transform(n)?;
    let (c, s) = (angle.cos(), angle.sin());
    // modes 1 and N-1 share lambda; rows 0 and n-2
    let (r1, r2) = (0, n - 2);
    let mut m = standard.matrix().clone();
    for col in 0..n {
        let (a, b) = (m[(r1, col)], m[(r2, col)]);
        m[(r1, col)] = c * a - s * b;
        m[(r2, col)] = s * a + c * b;
    }
    let rotated = ModeTransform::from_matrix(m)?;
    let a = Simulator::with_transform(protocol.clone(), standard)?;
    let b = Simulator::with_transform(protocol.clone(), rotated)?;
    let mut worst: f64 = 0.0;
    for &t in times {
        let sa = entanglement_entropy(&a.rdm_params(t, 0)?)?;
        let sb = entanglement_entropy(&b.rdm_params(t, 0)?)?;
        worst = worst.max((sa - sb).abs()).max((a.otoc(0, 5, t) - b.otoc(0, 5, t)).abs());
    }
    Ok(worst)
}

/// Runs every check; `report` is called as each finishes.
pub fn run_validation(mut report: impl FnMut(&CheckResult)) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut push = |r: CheckResult| {
        report(&r);
        out.push(r);
    };

    let five = reference_protocol(500, 5);
    let big = five.as_ref().ok().and_then(|p| Simulator::new(p.clone()).ok());

    push(check("ermakov_ode_vs_closed_form", 1e-8, Expect::Below, || {
        let p = reference_protocol(500, 5)?;
        let times = sample_times(40.0, 1000, p.boundaries());
        ermakov_ode_error(&p, &spread_modes(500, 50), &times, 0.0)
    }));
    push(check("jump_fault_detected", 1e-8, Expect::Above, || {
        let p = reference_protocol(500, 5)?;
        let times = sample_times(40.0, 200, p.boundaries());
        ermakov_ode_error(&p, &spread_modes(500, 5), &times, 1e-3)
    }));
    push(check("ermakov_invariant", 1e-10, Expect::Below, || {
        let sim = big.as_ref().ok_or_else(|| crate::QuenchError::invalid("reference setup failed"))?;
        Ok(sim.modes().iter().map(|m| m.max_invariant_residual()).fold(0.0, f64::max))
    }));
    push(check("eta_boundary_continuity", 1e-9, Expect::Below, || {
        let sim = big.as_ref().ok_or_else(|| crate::QuenchError::invalid("reference setup failed"))?;
        Ok(boundary_mismatch(sim.modes()))
    }));
    push(check("tau_vs_quadrature", 1e-9, Expect::Below, || {
        let sim = big.as_ref().ok_or_else(|| crate::QuenchError::invalid("reference setup failed"))?;
        let mut worst: f64 = 0.0;
        for m in [1, 125, 250, 500] {
            let mode = &sim.modes()[m - 1];
            for t in [10.0, 17.3, 40.0] {
                worst = worst.max((mode.tau(t) - oracle::tau_by_quadrature(mode, t, 1e-11)?).abs());
            }
        }
        Ok(worst)
    }));
    push(check("covariance_vs_schur", 1e-9, Expect::Below, || {
        let sim = big.as_ref().ok_or_else(|| crate::QuenchError::invalid("reference setup failed"))?;
        let mut worst: f64 = 0.0;
        for k in 0..100 {
            worst = worst.max(covariance_identity_error(sim, 0.4 * k as f64 + 0.013, 0)?);
        }
        Ok(worst)
    }));
    push(check("translation_invariance", 1e-10, Expect::Below, || {
        let sim = big.as_ref().ok_or_else(|| crate::QuenchError::invalid("reference setup failed"))?;
        let mut worst: f64 = 0.0;
        for t in [3.0, 21.7] {
            let forms = sim.forms(t)?;
            let base = rdm_params(&forms, sim.transform(), 0)?;
            for site in [1, 137, 250, 499] {
                let p = rdm_params(&forms, sim.transform(), site)?;
                let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
                worst = worst
                    .max(rel(p.z, base.z))
                    .max(rel(p.gamma_r, base.gamma_r))
                    .max(rel(p.beta_r, base.beta_r));
            }
        }
        Ok(worst)
    }));
    push(check("entropy_vs_symplectic", 1e-9, Expect::Below, || {
        entropy_equivalence_error(&entropy_test_params(10_000))
    }));
    push(check("momentum_normalization", 1e-10, Expect::Below, || {
        let sim = big.as_ref().ok_or_else(|| crate::QuenchError::invalid("reference setup failed"))?;
        let mut worst: f64 = 0.0;
        for k in 0..20 {
            worst = worst.max(momentum_normalization_error(&sim.rdm_params(2.0 * k as f64 + 0.01, 0)?)?);
        }
        Ok(worst)
    }));
    push(check("trace_out_n4", 1e-7, Expect::Below, || trace_out_error(4, 10.0, 24)));
    push(check("trace_out_n6", 1e-7, Expect::Below, || trace_out_error(6, 10.0, 32)));
    push(check("heisenberg_otoc_n3", 1e-7, Expect::Below, || {
        heisenberg_otoc_error(&reference_protocol(3, 1)?, &[0.5, 1.0, 2.0], 1e-4)
    }));
    push(check("heisenberg_otoc_n6_five_quench", 1e-7, Expect::Below, || {
        heisenberg_otoc_error(&reference_protocol(6, 5)?, &[4.0, 13.7, 30.0], 1e-4)
    }));
    push(check("degenerate_pair_rotation", 1e-9, Expect::Below, || {
        let times: Vec<f64> = (0..10).map(|k| 3.9 * k as f64 + 0.1).collect();
        degenerate_rotation_error(&reference_protocol(100, 5)?, 0.7, &times)
    }));
    out
}

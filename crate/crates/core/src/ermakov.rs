//! Closed-form piecewise solution of the Ermakov equation for one normal
//! mode.
//!
//! In terms of `eta = b^2` the Ermakov equation reads
//! `eta eta'' - eta'^2 / 2 + 2 lambda eta^2 = 2 lambda(0)`; on a stage of
//! constant `lambda` its solutions are
//! `eta(t) = alpha cos(2 sqrt(lambda) t) + beta sin(2 sqrt(lambda) t) + gamma`
//! with `gamma^2 - alpha^2 - beta^2 = lambda(0) / lambda`. Coefficients are
//! carried across quenches by `A^-1(t+) B A(t-)`.

use std::f64::consts::PI;

use crate::angle::{reduce, ReducedAngle};
use crate::error::{QuenchError, Result};
use crate::protocol::QuenchProtocol;

pub type Mat3 = [[f64; 3]; 3];

/// `(alpha, beta, gamma)` of one stage. `beta_coeff` is unrelated to the
/// reduced-density-matrix exponent `beta_rdm`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErmakovCoeffs {
    pub alpha: f64,
    pub beta_coeff: f64,
    pub gamma: f64,
}

impl ErmakovCoeffs {
    pub fn amplitude(&self) -> f64 {
        self.alpha.hypot(self.beta_coeff)
    }

    /// `gamma^2 - alpha^2 - beta^2`, which must equal `lambda(0) / lambda`.
    pub fn invariant(&self) -> f64 {
        let r = self.amplitude();
        (self.gamma - r) * (self.gamma + r)
    }

    /// Deviation of [`invariant`](Self::invariant) from `target`, relative to
    /// the size of the cancelling terms (`gamma^2`, or the target if larger).
    pub fn invariant_residual(&self, target: f64) -> f64 {
        let scale = (self.gamma * self.gamma).max(target.abs());
        (self.invariant() - target).abs() / scale
    }

    fn as_array(&self) -> [f64; 3] {
        [self.alpha, self.beta_coeff, self.gamma]
    }
}

/// `eta`, `d eta/dt` and `d^2 eta/dt^2` at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaState {
    pub eta: f64,
    pub eta_dot: f64,
    pub eta_ddot: f64,
}

impl EtaState {
    /// Width scale `b = sqrt(eta)`.
    pub fn b(&self) -> f64 {
        self.eta.sqrt()
    }

    pub fn b_dot(&self) -> f64 {
        self.eta_dot / (2.0 * self.eta.sqrt())
    }

    /// Relative residual of `eta eta'' - eta'^2/2 + 2 lambda eta^2 = 2 lambda0`,
    /// normalized by the largest term.
    pub fn ermakov_residual(&self, lambda: f64, lambda0: f64) -> f64 {
        let t1 = self.eta * self.eta_ddot;
        let t2 = 0.5 * self.eta_dot * self.eta_dot;
        let t3 = 2.0 * lambda * self.eta * self.eta;
        let rhs = 2.0 * lambda0;
        let scale = t1.abs().max(t2).max(t3).max(rhs);
        (t1 - t2 + t3 - rhs).abs() / scale
    }
}

/// Coefficients of the first stage for a mode starting in the ground state of
/// `lambda_initial` (`eta(0) = 1`, `eta'(0) = 0`).
pub fn initial_coefficients(lambda_initial: f64, lambda_final: f64) -> Result<ErmakovCoeffs> {
    if !(lambda_initial > 0.0 && lambda_initial.is_finite()) {
        return Err(QuenchError::invalid(format!(
            "initial mode frequency must be positive, got {lambda_initial}"
        )));
    }
    if !(lambda_final > 0.0 && lambda_final.is_finite()) {
        return Err(QuenchError::invalid(format!(
            "mode frequency must be positive, got {lambda_final}"
        )));
    }
    Ok(ErmakovCoeffs {
        alpha: (lambda_final - lambda_initial) / (2.0 * lambda_final),
        beta_coeff: 0.0,
        gamma: (lambda_final + lambda_initial) / (2.0 * lambda_final),
    })
}

fn a_matrix(lambda: f64, sqrt_lambda: f64, angle: ReducedAngle) -> Mat3 {
    let (c, s) = angle.cos_sin();
    let w = 2.0 * sqrt_lambda;
    let w2 = 4.0 * lambda;
    [[c, s, 1.0], [-w * s, w * c, 0.0], [-w2 * c, -w2 * s, 0.0]]
}

/// Maps stage coefficients `(alpha, beta, gamma)` to `(eta, eta', eta'')`
/// at time `t`.
pub fn segment_matrix_a(lambda: f64, t: f64) -> Mat3 {
    let sq = lambda.sqrt();
    a_matrix(lambda, sq, reduce(2.0 * sq, t, 0.0))
}

/// Jump of `(eta, eta', eta'')` across a sudden change `lambda_before ->
/// lambda_after`: `eta` and `eta'` are continuous, `eta''` shifts by
/// `2 (lambda_before - lambda_after) eta`.
pub fn quench_jump_b(lambda_before: f64, lambda_after: f64) -> Mat3 {
    [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [2.0 * (lambda_before - lambda_after), 0.0, 1.0],
    ]
}

pub fn mat_vec(m: &Mat3, v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
    }
    out
}

/// `A^-1` in closed form.
fn invert_a(lambda: f64, sqrt_lambda: f64, angle: ReducedAngle, state: [f64; 3]) -> ErmakovCoeffs {
    let (c, s) = angle.cos_sin();
    let [eta, eta_dot, eta_ddot] = state;
    let q = eta_ddot / (4.0 * lambda);
    let p = eta_dot / (2.0 * sqrt_lambda);
    ErmakovCoeffs {
        alpha: -q * c - p * s,
        beta_coeff: -q * s + p * c,
        gamma: eta + q,
    }
}

/// Solution data of one stage.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentCoefficients {
    pub start: f64,
    pub lambda: f64,
    pub coeffs: ErmakovCoeffs,
    sqrt_lambda: f64,
    amplitude: f64,
    // eta = eta_min + 2 R cos^2((theta - offset) / 2)
    offset: f64,
    eta_min: f64,
    // sqrt((gamma - R) / (gamma + R))
    kappa: f64,
}

impl SegmentCoefficients {
    fn new(start: f64, lambda: f64, lambda0: f64, coeffs: ErmakovCoeffs) -> Self {
        let amplitude = coeffs.amplitude();
        let offset = if amplitude > 0.0 {
            coeffs.beta_coeff.atan2(coeffs.alpha)
        } else {
            0.0
        };
        let ratio = lambda0 / lambda;
        let eta_min = ratio / (coeffs.gamma + amplitude);
        Self {
            start,
            lambda,
            coeffs,
            sqrt_lambda: lambda.sqrt(),
            amplitude,
            offset,
            eta_min,
            kappa: ratio.sqrt() / (coeffs.gamma + amplitude),
        }
    }

    #[inline]
    fn angle(&self, t: f64) -> ReducedAngle {
        reduce(2.0 * self.sqrt_lambda, t, self.offset)
    }

    fn state(&self, t: f64) -> EtaState {
        let v = self.angle(t);
        let (c, s) = v.cos_sin();
        let half = (0.5 * v.rem).cos();
        let r = self.amplitude;
        EtaState {
            eta: self.eta_min + 2.0 * r * half * half,
            eta_dot: -2.0 * self.sqrt_lambda * r * s,
            eta_ddot: -4.0 * self.lambda * r * c,
        }
    }

    /// Antiderivative of `sqrt(lambda0) / eta`, continuous across branches of
    /// `tan`.
    fn phase_antiderivative(&self, t: f64) -> f64 {
        let v = self.angle(t);
        (self.kappa * (0.5 * v.rem).tan()).atan() + PI * v.turns
    }

    /// Lower bound of `eta` over the stage.
    pub fn eta_min(&self) -> f64 {
        self.eta_min
    }
}

/// Piecewise Ermakov solution of one mode over the whole protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeCoefficients {
    lambda_initial: f64,
    sqrt_lambda_initial: f64,
    segments: Vec<SegmentCoefficients>,
    // sqrt(lambda0) * tau(t) = phase_offset[i] + antiderivative on stage i
    phase_offset: Vec<f64>,
}

impl ModeCoefficients {
    /// Propagates coefficients through a schedule of `(start, lambda)` pairs;
    /// `schedule[0].0` must be `0`.
    pub fn from_schedule(lambda_initial: f64, schedule: &[(f64, f64)]) -> Result<Self> {
        Self::propagate(lambda_initial, schedule, 0.0)
    }

    /// `jump_bias` is added to the `(3,1)` entry of every jump matrix. Only
    /// used to check that the oracles catch a faulty jump.
    pub(crate) fn propagate(
        lambda_initial: f64,
        schedule: &[(f64, f64)],
        jump_bias: f64,
    ) -> Result<Self> {
        let Some(&(t0, lambda_first)) = schedule.first() else {
            return Err(QuenchError::invalid("empty mode schedule"));
        };
        if t0 != 0.0 {
            return Err(QuenchError::invalid("mode schedule must start at t = 0"));
        }
        let first = initial_coefficients(lambda_initial, lambda_first)?;
        let mut segments = vec![SegmentCoefficients::new(0.0, lambda_first, lambda_initial, first)];
        for &(t_b, lambda_after) in &schedule[1..] {
            if !(lambda_after > 0.0 && lambda_after.is_finite()) {
                return Err(QuenchError::invalid(format!(
                    "mode frequency must be positive, got {lambda_after} at t = {t_b}"
                )));
            }
            let prev = segments.last().expect("non-empty");
            if !(t_b > prev.start) {
                return Err(QuenchError::invalid("stage starts must increase"));
            }
            let lambda_before = prev.lambda;
            let before = a_matrix(lambda_before, prev.sqrt_lambda, reduce(2.0 * prev.sqrt_lambda, t_b, 0.0));
            let state = mat_vec(&before, prev.coeffs.as_array());
            let mut jump = quench_jump_b(lambda_before, lambda_after);
            jump[2][0] += jump_bias;
            let state = mat_vec(&jump, state);
            let sq = lambda_after.sqrt();
            let next = invert_a(lambda_after, sq, reduce(2.0 * sq, t_b, 0.0), state);
            segments.push(SegmentCoefficients::new(t_b, lambda_after, lambda_initial, next));
        }

        // accumulated phase at each stage start, minus that stage's
        // antiderivative there
        let mut phase_offset = Vec::with_capacity(segments.len());
        let mut acc = 0.0;
        for (k, seg) in segments.iter().enumerate() {
            if k > 0 {
                let prev = &segments[k - 1];
                acc += prev.phase_antiderivative(seg.start) - prev.phase_antiderivative(prev.start);
            }
            phase_offset.push(acc - seg.phase_antiderivative(seg.start));
        }
        Ok(Self {
            lambda_initial,
            sqrt_lambda_initial: lambda_initial.sqrt(),
            segments,
            phase_offset,
        })
    }

    pub fn lambda_initial(&self) -> f64 {
        self.lambda_initial
    }

    pub fn segments(&self) -> &[SegmentCoefficients] {
        &self.segments
    }

    /// Stage acting at `t`; a boundary time belongs to the stage it opens.
    pub fn segment_index(&self, t: f64) -> usize {
        self.segments.partition_point(|s| s.start <= t).saturating_sub(1)
    }

    pub fn eta(&self, t: f64) -> EtaState {
        self.segments[self.segment_index(t)].state(t)
    }

    /// `(eta, eta', eta'')` from stage `index` evaluated at `t`, which may lie
    /// outside that stage. Used to compare both sides of a boundary.
    pub fn eta_on_segment(&self, index: usize, t: f64) -> EtaState {
        self.segments[index].state(t)
    }

    /// `sqrt(lambda0) * tau(t)`, the accumulated oscillator phase.
    pub fn phase(&self, t: f64) -> f64 {
        let i = self.segment_index(t);
        self.phase_offset[i] + self.segments[i].phase_antiderivative(t)
    }

    /// `tau(t) = integral_0^t dt' / eta(t')`.
    pub fn tau(&self, t: f64) -> f64 {
        self.phase(t) / self.sqrt_lambda_initial
    }

    /// Coefficient of `y(0)` in the Heisenberg-picture `y(t)` of this mode:
    /// `b(t) cos(sqrt(lambda0) tau(t))`.
    pub fn position_response(&self, t: f64) -> f64 {
        let i = self.segment_index(t);
        let seg = &self.segments[i];
        let v = seg.angle(t);
        let half = 0.5 * v.rem;
        let c = half.cos();
        let eta = seg.eta_min + 2.0 * seg.amplitude * c * c;
        let phase = self.phase_offset[i] + (seg.kappa * half.tan()).atan() + PI * v.turns;
        eta.sqrt() * phase.cos()
    }

    /// Largest Ermakov-invariant residual over all stages.
    pub fn max_invariant_residual(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.coeffs.invariant_residual(self.lambda_initial / s.lambda))
            .fold(0.0, f64::max)
    }
}

/// Ermakov solution of mode `mode` (1-based) under `protocol`.
pub fn propagate_coefficients(protocol: &QuenchProtocol, mode: usize) -> Result<ModeCoefficients> {
    if !(1..=protocol.n_sites()).contains(&mode) {
        return Err(QuenchError::invalid(format!(
            "mode {mode} outside 1..={}",
            protocol.n_sites()
        )));
    }
    let (lambda0, sched) = protocol.mode_schedule(mode);
    ModeCoefficients::from_schedule(lambda0, &sched)
}

pub fn eval_eta(coeffs: &ModeCoefficients, t: f64) -> EtaState {
    coeffs.eta(t)
}

pub fn phase_integral_tau(coeffs: &ModeCoefficients, t: f64) -> f64 {
    coeffs.tau(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::ChainSpec;

    fn det3(m: &Mat3) -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    fn fig1(n: usize, quenches: usize) -> QuenchProtocol {
        QuenchProtocol::alternating(ChainSpec::new(n, 3.0, 2.0).unwrap(), 20.0, 4.0, quenches)
            .unwrap()
    }

    #[test]
    fn initial_coefficients_examples() {
        let c = initial_coefficients(9.0, 404.0).unwrap();
        assert!((c.alpha - 395.0 / 808.0).abs() < 1e-15);
        assert_eq!(c.beta_coeff, 0.0);
        assert!((c.gamma - 413.0 / 808.0).abs() < 1e-15);
        assert!((c.gamma * c.gamma - c.alpha * c.alpha - 9.0 / 404.0).abs() < 1e-15);

        let same = initial_coefficients(7.5, 7.5).unwrap();
        assert_eq!(
            same,
            ErmakovCoeffs {
                alpha: 0.0,
                beta_coeff: 0.0,
                gamma: 1.0
            }
        );
        assert!(initial_coefficients(9.0, 0.0).is_err());
        assert!(initial_coefficients(9.0, -1.0).is_err());
        assert!(initial_coefficients(0.0, 1.0).is_err());
    }

    #[test]
    fn a_matrix_at_origin() {
        let lam: f64 = 13.7;
        let a = segment_matrix_a(lam, 0.0);
        let w = 2.0 * lam.sqrt();
        let expect = [[1.0, 0.0, 1.0], [0.0, w, 0.0], [-4.0 * lam, 0.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((a[i][j] - expect[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn a_matrix_constant_column_and_determinant() {
        // det A = 8 lambda^{3/2}, from cofactor expansion along the last column
        let cases = [(9.0, 0.3), (404.0, 17.2), (13.0, 1000.0), (0.5, 2.2), (250.0, 0.0)];
        for (lam, t) in cases {
            let a = segment_matrix_a(lam, t);
            assert_eq!(mat_vec(&a, [0.0, 0.0, 1.0]), [1.0, 0.0, 0.0]);
            let d = det3(&a);
            let expect = 8.0 * f64::powf(lam, 1.5);
            assert!((d - expect).abs() < 1e-12 * expect, "{lam} {t}: {d} vs {expect}");
        }
    }

    #[test]
    fn closed_form_inverse_matches_a() {
        for (lam, t) in [(9.0, 0.3), (404.0, 17.2), (13.0, 123.4)] {
            let sq = f64::sqrt(lam);
            let c = ErmakovCoeffs {
                alpha: 0.3,
                beta_coeff: -1.1,
                gamma: 2.0,
            };
            let ang = reduce(2.0 * sq, t, 0.0);
            let state = mat_vec(&a_matrix(lam, sq, ang), c.as_array());
            let back = invert_a(lam, sq, ang, state);
            assert!((back.alpha - c.alpha).abs() < 1e-12);
            assert!((back.beta_coeff - c.beta_coeff).abs() < 1e-12);
            assert!((back.gamma - c.gamma).abs() < 1e-12);
        }
    }

    #[test]
    fn jump_matrix_examples() {
        let b = quench_jump_b(5.0, 5.0);
        assert_eq!(b, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let b = quench_jump_b(404.0, 9.0);
        assert_eq!(b[2][0], 790.0);
    }

    #[test]
    fn jump_preserves_ermakov_form() {
        // a state on an Ermakov orbit of lambda_before, jumped, lies on an orbit
        // of lambda_after with the same right-hand side
        let lambda0 = 9.0;
        for (lb, la, t) in [(404.0, 9.0, 4.0), (9.0, 404.0, 8.0), (13.0, 17.0, 0.77)] {
            let mut c = initial_coefficients(lambda0, lb).unwrap();
            // rotate the orbit so beta_coeff != 0
            let (s, co) = f64::sin_cos(0.4);
            c = ErmakovCoeffs {
                alpha: c.alpha * co,
                beta_coeff: c.alpha * s,
                gamma: c.gamma,
            };
            let state = mat_vec(&segment_matrix_a(lb, t), c.as_array());
            let before = EtaState {
                eta: state[0],
                eta_dot: state[1],
                eta_ddot: state[2],
            };
            assert!(before.ermakov_residual(lb, lambda0) < 1e-13);
            let after = mat_vec(&quench_jump_b(lb, la), state);
            let after = EtaState {
                eta: after[0],
                eta_dot: after[1],
                eta_ddot: after[2],
            };
            assert!(after.ermakov_residual(la, lambda0) < 1e-13);
            assert!(before.ermakov_residual(la, lambda0) > 1e-3);
        }
    }

    #[test]
    fn single_stage_keeps_initial_coefficients() {
        let p = fig1(8, 1);
        for m in 1..=8 {
            let mc = propagate_coefficients(&p, m).unwrap();
            let (l0, sched) = p.mode_schedule(m);
            assert_eq!(mc.segments().len(), 1);
            assert_eq!(mc.segments()[0].coeffs, initial_coefficients(l0, sched[0].1).unwrap());
        }
    }

    #[test]
    fn unchanged_lambda_keeps_coefficients() {
        let c = ModeCoefficients::from_schedule(9.0, &[(0.0, 404.0), (3.3, 404.0), (5.1, 404.0)])
            .unwrap();
        let s = c.segments();
        for w in s.windows(2) {
            assert!((w[0].coeffs.alpha - w[1].coeffs.alpha).abs() < 1e-13);
            assert!((w[0].coeffs.beta_coeff - w[1].coeffs.beta_coeff).abs() < 1e-13);
            assert!((w[0].coeffs.gamma - w[1].coeffs.gamma).abs() < 1e-13);
        }
    }

    #[test]
    fn five_quench_continuity_and_invariant() {
        let p = fig1(500, 5);
        for m in 1..=500 {
            let mc = propagate_coefficients(&p, m).unwrap();
            assert!(mc.max_invariant_residual() < 1e-12, "mode {m}");
            for (i, seg) in mc.segments().iter().enumerate().skip(1) {
                let a = mc.eta_on_segment(i - 1, seg.start);
                let b = mc.eta_on_segment(i, seg.start);
                let scale = a.eta.max(1.0);
                assert!((a.eta - b.eta).abs() < 1e-10 * scale, "mode {m}");
                assert!((a.eta_dot - b.eta_dot).abs() < 1e-10 * a.eta_dot.abs().max(scale));
                let jump = b.eta_ddot - a.eta_ddot;
                let expect = 2.0 * (mc.segments()[i - 1].lambda - seg.lambda) * a.eta;
                assert!((jump - expect).abs() < 1e-9 * expect.abs().max(a.eta_ddot.abs()));
            }
            for seg in mc.segments() {
                let c = seg.coeffs;
                assert!(c.gamma > c.amplitude());
            }
        }
    }

    #[test]
    fn eta_ground_state_at_origin() {
        let p = fig1(20, 5);
        for m in 1..=20 {
            let mc = propagate_coefficients(&p, m).unwrap();
            let s = mc.eta(0.0);
            assert!((s.eta - 1.0).abs() < 1e-14);
            assert!(s.eta_dot.abs() < 1e-12);
        }
    }

    #[test]
    fn no_quench_is_static() {
        let p = QuenchProtocol::no_quench(ChainSpec::new(6, 3.0, 2.0).unwrap()).unwrap();
        for m in 1..=6 {
            let mc = propagate_coefficients(&p, m).unwrap();
            for t in [0.0, 0.5, 7.0, 900.0] {
                let s = mc.eta(t);
                assert_eq!(s.eta, 1.0);
                assert_eq!(s.eta_dot, 0.0);
                assert!((mc.tau(t) - t).abs() < 1e-12 * t.max(1.0));
            }
        }
    }

    #[test]
    fn eta_matches_a_matrix_form() {
        let p = fig1(50, 5);
        for m in [1, 7, 25, 50] {
            let mc = propagate_coefficients(&p, m).unwrap();
            for k in 0..200 {
                let t = 0.173 * k as f64;
                let seg = &mc.segments()[mc.segment_index(t)];
                let v = mat_vec(&segment_matrix_a(seg.lambda, t), seg.coeffs.as_array());
                let s = mc.eta(t);
                let scale = seg.coeffs.gamma;
                assert!((s.eta - v[0]).abs() < 1e-11 * scale);
                assert!((s.eta_dot - v[1]).abs() < 1e-11 * scale * seg.lambda.sqrt());
                assert!((s.eta_ddot - v[2]).abs() < 1e-11 * scale * seg.lambda);
                assert!(s.eta >= seg.eta_min() * (1.0 - 1e-12));
                assert!(s.eta > 0.0);
                assert!(s.ermakov_residual(seg.lambda, mc.lambda_initial()) < 1e-9);
            }
        }
    }

    #[test]
    fn tau_starts_at_zero_and_increases() {
        let p = fig1(40, 5);
        for m in 1..=40 {
            let mc = propagate_coefficients(&p, m).unwrap();
            assert_eq!(mc.tau(0.0), 0.0);
            let mut prev = 0.0;
            for k in 1..3000 {
                let t = 0.0137 * k as f64;
                let tau = mc.tau(t);
                assert!(tau > prev, "mode {m} t {t}");
                prev = tau;
            }
        }
    }

    #[test]
    fn single_stage_phase_has_arctan_form() {
        // first stage: sqrt(l0) tau = arctan(sqrt(l0/lf) tan(sqrt(lf) t)) on the
        // first branch
        let (l0, lf) = (9.0f64, 404.0f64);
        let mc = ModeCoefficients::from_schedule(l0, &[(0.0, lf)]).unwrap();
        for t in [0.01, 0.03, 0.07] {
            let expect = ((l0 / lf).sqrt() * (lf.sqrt() * t).tan()).atan();
            assert!((mc.phase(t) - expect).abs() < 1e-13);
        }
        // after one full period of eta the phase advanced by pi
        let period = PI / lf.sqrt();
        assert!((mc.phase(period) - PI).abs() < 1e-12);
        assert!((mc.phase(10.0 * period) - 10.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn rejects_out_of_range_mode() {
        let p = fig1(4, 2);
        assert!(propagate_coefficients(&p, 0).is_err());
        assert!(propagate_coefficients(&p, 5).is_err());
    }
}

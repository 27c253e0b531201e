//! Direct RK4 integration of the mode equation `b'' + lambda(t) b = lambda0 / b^3`
//! and of the Heisenberg equations of the whole chain.

use crate::ermakov::EtaState;
use crate::error::{QuenchError, Result};
use crate::protocol::{coupling_matrix, QuenchProtocol};

/// Step control for [`integrate_ermakov`].
#[derive(Clone, Copy, Debug)]
pub struct ErmakovOdeOptions {
    /// Phase advanced per step. The step is
    /// `step_scale / (sqrt(lambda) + sqrt(lambda0) / b^2)`, which shrinks
    /// near the narrow minima of strongly squeezed modes.
    pub step_scale: f64,
    /// Largest accepted relative drift of the stage energy
    /// `b'^2/2 + lambda b^2/2 + lambda0 / (2 b^2)`.
    pub drift_tolerance: f64,
}

impl Default for ErmakovOdeOptions {
    fn default() -> Self {
        Self {
            step_scale: 2e-4,
            drift_tolerance: 1e-6,
        }
    }
}

#[derive(Clone, Copy)]
struct Compensated {
    value: f64,
    carry: f64,
}

impl Compensated {
    fn new(value: f64) -> Self {
        Self { value, carry: 0.0 }
    }

    fn add(&mut self, inc: f64) {
        let y = inc - self.carry;
        let s = self.value + y;
        self.carry = (s - self.value) - y;
        self.value = s;
    }
}

struct ModeOde {
    lambda0: f64,
    b: Compensated,
    v: Compensated,
    // the step count reaches 10^7, so the clock needs compensation too
    t: Compensated,
}

impl ModeOde {
    fn accel(&self, lambda: f64, b: f64) -> f64 {
        -lambda * b + self.lambda0 / (b * b * b)
    }

    fn energy(&self, lambda: f64) -> f64 {
        let (b, v) = (self.b.value, self.v.value);
        0.5 * v * v + 0.5 * lambda * b * b + 0.5 * self.lambda0 / (b * b)
    }

    fn advance(&mut self, lambda: f64, until: f64, scale: f64) {
        let rate0 = self.lambda0.sqrt();
        let rate = lambda.sqrt();
        while self.t.value < until {
            let b = self.b.value;
            let mut h = scale / (rate + rate0 / (b * b));
            let last = self.t.value + h >= until;
            if last {
                h = (until - self.t.value) + self.t.carry;
            }
            let v = self.v.value;
            let k1b = v;
            let k1v = self.accel(lambda, b);
            let k2b = v + 0.5 * h * k1v;
            let k2v = self.accel(lambda, b + 0.5 * h * k1b);
            let k3b = v + 0.5 * h * k2v;
            let k3v = self.accel(lambda, b + 0.5 * h * k2b);
            let k4b = v + h * k3v;
            let k4v = self.accel(lambda, b + h * k3b);
            self.b.add(h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b));
            self.v.add(h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v));
            if last {
                self.t = Compensated::new(until);
            } else {
                self.t.add(h);
            }
        }
    }

    fn sample(&self, lambda: f64) -> EtaState {
        let (b, v) = (self.b.value, self.v.value);
        EtaState {
            eta: b * b,
            eta_dot: 2.0 * b * v,
            eta_ddot: 2.0 * v * v + 2.0 * b * self.accel(lambda, b),
        }
    }
}

/// `(eta, eta', eta'')` at each of the non-decreasing `times`, integrating
/// from the ground state `b = 1, b' = 0` at `t = 0`. The integration restarts
/// exactly at every stage start of `schedule` (`(start, lambda)` pairs).
///
/// Fails when the stage energy drifts by more than the configured tolerance,
/// which means the step is too coarse.
pub fn integrate_ermakov(
    lambda0: f64,
    schedule: &[(f64, f64)],
    times: &[f64],
    opts: &ErmakovOdeOptions,
) -> Result<Vec<EtaState>> {
    if schedule.first().map(|s| s.0) != Some(0.0) {
        return Err(QuenchError::invalid("mode schedule must start at t = 0"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < 0.0) {
        return Err(QuenchError::invalid("sample times must be non-negative and sorted"));
    }
    let mut ode = ModeOde {
        lambda0,
        b: Compensated::new(1.0),
        v: Compensated::new(0.0),
        t: Compensated::new(0.0),
    };
    let mut stage = 0;
    let mut stage_energy = ode.energy(schedule[0].1);
    let check = |ode: &ModeOde, lambda: f64, e0: f64| {
        let drift = (ode.energy(lambda) - e0).abs() / e0;
        if drift > opts.drift_tolerance {
            Err(QuenchError::numerical(
                ode.t.value,
                format!("ODE step too coarse: energy drift {drift:e}"),
            ))
        } else {
            Ok(())
        }
    };

    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while stage + 1 < schedule.len() && schedule[stage + 1].0 <= target {
            let (next_start, next_lambda) = schedule[stage + 1];
            ode.advance(schedule[stage].1, next_start, opts.step_scale);
            check(&ode, schedule[stage].1, stage_energy)?;
            stage += 1;
            stage_energy = ode.energy(next_lambda);
        }
        let lambda = schedule[stage].1;
        ode.advance(lambda, target, opts.step_scale);
        check(&ode, lambda, stage_energy)?;
        out.push(ode.sample(lambda));
    }
    Ok(out)
}

/// Column `j` of the position-position block of the Heisenberg propagator at
/// each of the non-decreasing `times`: entry `i` is the coefficient of
/// `x_j(0)` in `x_i(t)`, which equals `-i [x_i(t), p_j(0)]`.
///
/// Fixed-step RK4 on `phi'' = -Sigma(t) phi` with `phi(0) = e_j`,
/// `phi'(0) = 0`; steps are shortened to land on stage starts and sample
/// times.
pub fn heisenberg_position_response(
    protocol: &QuenchProtocol,
    j: usize,
    times: &[f64],
    step: f64,
) -> Result<Vec<Vec<f64>>> {
    let n = protocol.n_sites();
    if j >= n {
        return Err(QuenchError::invalid(format!("site {j} outside 0..{n}")));
    }
    if !(step > 0.0) {
        return Err(QuenchError::invalid("step must be positive"));
    }
    let sigmas: Vec<Vec<f64>> = protocol
        .stages()
        .iter()
        .map(|&s| {
            let m = coupling_matrix(s, n);
            (0..n * n).map(|k| m[(k / n, k % n)]).collect()
        })
        .collect();
    let starts = protocol.starts();
    let apply = |sig: &[f64], x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|r| -(0..n).map(|c| sig[r * n + c] * x[c]).sum::<f64>())
            .collect()
    };
    let axpy = |a: &[f64], h: f64, b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + h * y).collect() };

    let mut x = vec![0.0; n];
    x[j] = 1.0;
    let mut v = vec![0.0; n];
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while t < target {
            let stage = starts.partition_point(|&s| s <= t) - 1;
            let stop = starts.get(stage + 1).map_or(target, |&s| s.min(target));
            let sig = &sigmas[stage];
            let mut h = step;
            let last = t + h >= stop;
            if last {
                h = stop - t;
            }
            let k1x = v.clone();
            let k1v = apply(sig, &x);
            let k2x = axpy(&v, 0.5 * h, &k1v);
            let k2v = apply(sig, &axpy(&x, 0.5 * h, &k1x));
            let k3x = axpy(&v, 0.5 * h, &k2v);
            let k3v = apply(sig, &axpy(&x, 0.5 * h, &k2x));
            let k4x = axpy(&v, h, &k3v);
            let k4v = apply(sig, &axpy(&x, h, &k3x));
            for r in 0..n {
                x[r] += h / 6.0 * (k1x[r] + 2.0 * k2x[r] + 2.0 * k3x[r] + k4x[r]);
                v[r] += h / 6.0 * (k1v[r] + 2.0 * k2v[r] + 2.0 * k3v[r] + k4v[r]);
            }
            t = if last { stop } else { t + h };
        }
        out.push(x.clone());
    }
    Ok(out)
}

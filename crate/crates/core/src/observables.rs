//! Physical observables built from the reduced density matrix and the mode
//! solutions: momentum distribution, entanglement entropy and the
//! position-momentum OTOC.

use std::f64::consts::PI;

use crate::ermakov::ModeCoefficients;
use crate::error::{QuenchError, Result};
use crate::gaussian::RdmParams;
use crate::protocol::ModeTransform;

/// One time point of an observable series. Disabled observables are `None`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObservableSample {
    pub t: f64,
    pub gamma_r: Option<f64>,
    pub gamma_minus_beta: Option<f64>,
    pub z: Option<f64>,
    /// Entanglement entropy of one site, in nats.
    pub entropy: Option<f64>,
    /// `n(p = 0, t)`
    pub n0: Option<f64>,
    pub otoc: Option<f64>,
    /// `|rho(0, delta) / rho(0, 0)|`
    pub abs_ratio: Option<f64>,
}

/// Single-site momentum distribution, a normalized Gaussian with variance
/// `(g^2 - b^2 + 4 Z^2) / (2 (g - b))`.
pub fn momentum_distribution(params: &RdmParams, p: f64) -> f64 {
    let gmb = params.gamma_minus_beta();
    let denom = gmb * (params.gamma_r + params.beta_r) + 4.0 * params.z * params.z;
    (gmb / (PI * denom)).sqrt() * (-p * p * gmb / denom).exp()
}

/// Von Neumann entropy (nats) of the single-site state,
/// `S = -ln(1 - xi) - xi/(1 - xi) ln(xi)` with
/// `xi = (b/g) / (1 + sqrt(1 - b^2/g^2))`.
pub fn entanglement_entropy(params: &RdmParams) -> Result<f64> {
    let RdmParams { gamma_r, beta_r, gap, .. } = *params;
    if !(beta_r >= 0.0 && beta_r < gamma_r && gap > 0.0) {
        return Err(QuenchError::invalid(format!(
            "entropy needs 0 <= beta_r < gamma_r, got beta_r = {beta_r}, gamma_r = {gamma_r}"
        )));
    }
    if beta_r == 0.0 {
        return Ok(0.0);
    }
    let x = beta_r / gamma_r;
    let gmb = gap;
    // sqrt(1 - x^2) and 1 - xi without cancellation
    let root = (gmb * (gamma_r + beta_r)).sqrt() / gamma_r;
    let xi = x / (1.0 + root);
    let one_minus_xi = (root + gmb / gamma_r) / (1.0 + root);
    let ln_xi = (-one_minus_xi).ln_1p();
    Ok(-one_minus_xi.ln() - xi / one_minus_xi * ln_xi)
}

/// `F = <[x_i(t), p_j(0)]^dagger [x_i(t), p_j(0)]>` with `hbar = 1`.
///
/// For quadratic dynamics the commutator is the c-number
/// `i sum_m U_mi U_mj b_m(t) cos(sqrt(lambda_m(0)) tau_m(t))`, so `F` does not
/// depend on the state. Sites are 0-based.
pub fn otoc(modes: &[ModeCoefficients], transform: &ModeTransform, i: usize, j: usize, t: f64) -> f64 {
    let u = transform.matrix();
    let c: f64 = modes
        .iter()
        .zip(u.col_as_slice(i).iter().zip(u.col_as_slice(j)))
        .map(|(mode, (a, b))| a * b * mode.position_response(t))
        .sum();
    c * c
}

/// Mean and population standard deviation of a set of samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowStats {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

impl WindowStats {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        Some(Self {
            mean,
            std: var.sqrt(),
            count: v.len(),
        })
    }
}

/// Statistics of `values` over samples with `lo <= t <= hi`.
pub fn window_stats(times: &[f64], values: &[f64], lo: f64, hi: f64) -> Option<WindowStats> {
    WindowStats::of(
        times
            .iter()
            .zip(values)
            .filter(|(&t, _)| t >= lo && t <= hi)
            .map(|(_, &v)| v),
    )
}

/// Saturation value and fluctuation: statistics over the last quarter of the
/// time window.
pub fn saturation_stats(times: &[f64], values: &[f64]) -> Option<WindowStats> {
    let (&first, &last) = (times.first()?, times.last()?);
    window_stats(times, values, last - 0.25 * (last - first), last)
}

/// Centered moving average over a time window of width `width`.
pub fn moving_average(times: &[f64], values: &[f64], width: f64) -> Vec<f64> {
    let n = times.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    let half = 0.5 * width;
    let (mut lo, mut hi) = (0usize, 0usize);
    (0..n)
        .map(|i| {
            while times[lo] < times[i] - half {
                lo += 1;
            }
            while hi < n && times[hi] <= times[i] + half {
                hi += 1;
            }
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// A late-time revival of an OTOC series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Recurrence {
    /// Time of the revival maximum.
    pub time: f64,
    /// Smoothed series at the revival maximum.
    pub amplitude: f64,
    /// Largest smoothed value of the initial light-cone packet.
    pub initial_peak: f64,
    /// Time of [`initial_peak`](Self::initial_peak).
    pub initial_peak_time: f64,
    /// Baseline the excursions are measured from.
    pub baseline: f64,
}

/// Locates the first revival of `|F - F_sat|` after the series has settled.
///
/// The series is smoothed with a centered moving average of width
/// `smoothing` (which removes the carrier oscillation) and its median is taken
/// as the settled level `F_sat`. With `D` the largest excursion
/// `|F - F_sat|`, the initial packet is the first stretch with excursion above
/// `D/2`; the series counts as settled once the excursion falls below `D/4`;
/// the revival is the next stretch above `D/2`, and its maximum is returned.
/// `None` means no revival inside the series.
pub fn recurrence_time_estimate(times: &[f64], values: &[f64], smoothing: f64) -> Option<Recurrence> {
    if times.len() < 3 || times.len() != values.len() {
        return None;
    }
    let env = moving_average(times, values, smoothing);
    let mut sorted = env.clone();
    sorted.sort_by(f64::total_cmp);
    let baseline = sorted[sorted.len() / 2];
    let dev: Vec<f64> = env.iter().map(|e| (e - baseline).abs()).collect();
    let big = dev.iter().cloned().fold(0.0, f64::max);
    if !(big > 0.0) {
        return None;
    }
    let high = 0.5 * big;
    let low = 0.25 * big;
    let find = |from: usize, pred: &dyn Fn(f64) -> bool| (from..dev.len()).find(|&k| pred(dev[k]));

    let start = find(0, &|d| d > high)?;
    let settled = find(start, &|d| d < low)?;
    let revival = find(settled, &|d| d > high)?;
    let end = find(revival, &|d| d < low).unwrap_or(dev.len());

    let argmax = |a: usize, b: usize, v: &[f64]| {
        (a..b).fold(a, |best, k| if v[k] > v[best] { k } else { best })
    };
    let peak = argmax(revival, end, &dev);
    let first = argmax(start, settled, &env);
    Some(Recurrence {
        time: times[peak],
        amplitude: env[peak],
        initial_peak: env[first],
        initial_peak_time: times[first],
        baseline,
    })
}

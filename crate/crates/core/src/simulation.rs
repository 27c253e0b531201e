//! Time-series evaluation of the observables over a protocol.

use rayon::prelude::*;

use crate::ermakov::{propagate_coefficients, ModeCoefficients};
use crate::error::{QuenchError, Result};
use crate::gaussian::{build_quadratic_forms, offdiag_ratio, rdm_params, QuadraticForms, RdmParams};
use crate::observables::{self, entanglement_entropy, momentum_distribution, ObservableSample};
use crate::protocol::{build_mode_transform, ModeTransform, QuenchProtocol};

/// Which observable columns to fill.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObservableSet {
    pub rdm_params: bool,
    pub entropy: bool,
    pub momentum: bool,
    pub otoc: bool,
    pub ratio: bool,
}

impl ObservableSet {
    pub const ALL: Self = Self {
        rdm_params: true,
        entropy: true,
        momentum: true,
        otoc: true,
        ratio: true,
    };
    pub const NONE: Self = Self {
        rdm_params: false,
        entropy: false,
        momentum: false,
        otoc: false,
        ratio: false,
    };

    fn needs_rdm(&self) -> bool {
        self.rdm_params || self.entropy || self.momentum || self.ratio
    }
}

/// What to compute at each time point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSpec {
    pub observables: ObservableSet,
    /// Site whose reduced density matrix is reported (0-based).
    pub site: usize,
    /// OTOC sites `(i, j)`, 0-based.
    pub otoc_sites: (usize, usize),
    /// Separation used for the off-diagonal ratio column.
    pub ratio_delta: f64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self {
            observables: ObservableSet::ALL,
            site: 0,
            otoc_sites: (0, 5),
            ratio_delta: 1.0,
        }
    }
}

/// A protocol with every mode solved.
#[derive(Clone, Debug)]
pub struct Simulator {
    protocol: QuenchProtocol,
    transform: ModeTransform,
    modes: Vec<ModeCoefficients>,
}

impl Simulator {
    pub fn new(protocol: QuenchProtocol) -> Result<Self> {
        let transform = build_mode_transform(protocol.n_sites())?;
        Self::with_transform(protocol, transform)
    }

    /// Uses `transform` instead of the standard cos/sin basis. Rows must be
    /// eigenvectors of the coupling matrix in the standard mode order.
    pub fn with_transform(protocol: QuenchProtocol, transform: ModeTransform) -> Result<Self> {
        if transform.n() != protocol.n_sites() {
            return Err(QuenchError::invalid("transform size differs from chain size"));
        }
        let modes = (1..=protocol.n_sites())
            .map(|m| propagate_coefficients(&protocol, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            protocol,
            transform,
            modes,
        })
    }

    pub fn protocol(&self) -> &QuenchProtocol {
        &self.protocol
    }

    pub fn transform(&self) -> &ModeTransform {
        &self.transform
    }

    pub fn modes(&self) -> &[ModeCoefficients] {
        &self.modes
    }

    pub fn forms(&self, t: f64) -> Result<QuadraticForms> {
        build_quadratic_forms(&self.modes, t)
    }

    pub fn rdm_params(&self, t: f64, site: usize) -> Result<RdmParams> {
        rdm_params(&self.forms(t)?, &self.transform, site)
    }

    /// OTOC between 0-based sites `i` and `j`.
    pub fn otoc(&self, i: usize, j: usize, t: f64) -> f64 {
        observables::otoc(&self.modes, &self.transform, i, j, t)
    }

    pub fn sample(&self, t: f64, spec: &SampleSpec) -> Result<ObservableSample> {
        let set = spec.observables;
        let mut out = ObservableSample {
            t,
            ..Default::default()
        };
        if set.needs_rdm() {
            let p = self.rdm_params(t, spec.site)?;
            if set.rdm_params {
                out.gamma_r = Some(p.gamma_r);
                out.gamma_minus_beta = Some(p.gamma_minus_beta());
                out.z = Some(p.z);
            }
            if set.entropy {
                out.entropy = Some(entanglement_entropy(&p).map_err(|e| QuenchError::numerical(t, e.to_string()))?);
            }
            if set.momentum {
                out.n0 = Some(momentum_distribution(&p, 0.0));
            }
            if set.ratio {
                out.abs_ratio = Some(offdiag_ratio(&p, 0.0, spec.ratio_delta).norm());
            }
        }
        if set.otoc {
            let (i, j) = spec.otoc_sites;
            out.otoc = Some(self.otoc(i, j, t));
        }
        Ok(out)
    }

    /// Samples every time in `times` on a pool of `threads` workers. Rows come
    /// back in input order and do not depend on the thread count. The first
    /// failing time (in time order) is reported.
    pub fn series(&self, times: &[f64], spec: &SampleSpec, threads: usize) -> Result<Vec<ObservableSample>> {
        let n = self.protocol.n_sites();
        if spec.site >= n || spec.otoc_sites.0 >= n || spec.otoc_sites.1 >= n {
            return Err(QuenchError::invalid(format!("site index outside 0..{n}")));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| QuenchError::invalid(format!("cannot start worker pool: {e}")))?;
        let rows: Vec<Result<ObservableSample>> =
            pool.install(|| times.par_iter().map(|&t| self.sample(t, spec)).collect());
        rows.into_iter().collect()
    }
}

/// `0, dt, 2 dt, ..., t_max` with every boundary in `boundaries` (up to
/// `t_max`) present exactly. Grid points closer than `dt * 1e-6` to a
/// boundary are replaced by it.
pub fn time_grid(t_max: f64, dt: f64, boundaries: &[f64]) -> Result<Vec<f64>> {
    if !(dt > 0.0 && t_max >= 0.0 && t_max.is_finite()) {
        return Err(QuenchError::invalid(format!("need dt > 0 and t_max >= 0, got dt = {dt}, t_max = {t_max}")));
    }
    let steps = (t_max / dt * (1.0 + 1e-12)).floor() as usize;
    let mut grid: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
    let snap = dt * 1e-6;
    for &b in boundaries.iter().filter(|&&b| b <= t_max + snap) {
        let pos = grid.partition_point(|&t| t < b);
        if pos < grid.len() && (grid[pos] - b).abs() <= snap {
            grid[pos] = b;
        } else if pos > 0 && (grid[pos - 1] - b).abs() <= snap {
            grid[pos - 1] = b;
        } else {
            grid.insert(pos, b);
        }
    }
    Ok(grid)
}

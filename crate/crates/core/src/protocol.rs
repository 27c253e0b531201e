//! Chain geometry, quench schedules and the normal-mode basis of the
//! periodic coupling matrix.

use std::f64::consts::PI;

use faer::Mat;

use crate::error::{QuenchError, Result};

/// A periodic harmonic chain in its pre-quench configuration.
///
/// The state at `t = 0` is the ground state of this Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainSpec {
    pub n_sites: usize,
    pub omega_initial: f64,
    pub coupling: f64,
}

impl ChainSpec {
    pub fn new(n_sites: usize, omega_initial: f64, coupling: f64) -> Result<Self> {
        if n_sites < 2 {
            return Err(QuenchError::invalid(format!(
                "chain needs at least 2 sites, got {n_sites}"
            )));
        }
        Stage::new(omega_initial, coupling)?;
        Ok(Self {
            n_sites,
            omega_initial,
            coupling,
        })
    }

    pub fn stage(&self) -> Stage {
        Stage {
            omega: self.omega_initial,
            coupling: self.coupling,
        }
    }
}

/// On-site frequency and nearest-neighbour coupling held fixed over a
/// stretch of time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stage {
    pub omega: f64,
    pub coupling: f64,
}

impl Stage {
    pub fn new(omega: f64, coupling: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(QuenchError::invalid(format!(
                "on-site frequency must be positive and finite, got {omega}"
            )));
        }
        if !(coupling.is_finite() && coupling >= 0.0) {
            return Err(QuenchError::invalid(format!(
                "coupling must be non-negative and finite, got {coupling}"
            )));
        }
        Ok(Self { omega, coupling })
    }

    /// Squared frequency of mode `mode` (1-based, `1..=n`).
    ///
    /// Evaluated through the folded wavenumber `min(m, n - m)` so that the
    /// degenerate partners `m` and `n - m` are bit-identical.
    pub fn mode_lambda(&self, mode: usize, n: usize) -> f64 {
        debug_assert!((1..=n).contains(&mode));
        let folded = mode.min(n - mode) % n;
        let s = (PI * folded as f64 / n as f64).sin();
        self.omega * self.omega + 4.0 * self.coupling * s * s
    }
}

/// One stage of a schedule. `duration == None` marks the final stage, which
/// lasts forever.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub stage: Stage,
    pub duration: Option<f64>,
}

/// Piecewise-constant drive of the chain.
///
/// `stages[0]` acts from `t = 0`; `stages[s]` starts at `starts[s]`. The
/// pre-quench stage only fixes the initial ground state.
#[derive(Clone, Debug, PartialEq)]
pub struct QuenchProtocol {
    chain: ChainSpec,
    stages: Vec<Stage>,
    starts: Vec<f64>,
}

impl QuenchProtocol {
    pub fn new(chain: ChainSpec, segments: Vec<Segment>) -> Result<Self> {
        let chain = ChainSpec::new(chain.n_sites, chain.omega_initial, chain.coupling)?;
        let Some((last, rest)) = segments.split_last() else {
            return Err(QuenchError::invalid("a protocol needs at least one segment"));
        };
        if last.duration.is_some() {
            return Err(QuenchError::invalid(
                "the last segment of a protocol must be unbounded",
            ));
        }
        let mut stages = Vec::with_capacity(segments.len());
        let mut starts = Vec::with_capacity(segments.len());
        let mut t = 0.0;
        for seg in rest {
            let stage = Stage::new(seg.stage.omega, seg.stage.coupling)?;
            let d = match seg.duration {
                Some(d) if d.is_finite() && d > 0.0 => d,
                other => {
                    return Err(QuenchError::invalid(format!(
                        "only the last segment may be unbounded; got duration {other:?}"
                    )))
                }
            };
            stages.push(stage);
            starts.push(t);
            t += d;
        }
        stages.push(Stage::new(last.stage.omega, last.stage.coupling)?);
        starts.push(t);
        Ok(Self {
            chain,
            stages,
            starts,
        })
    }

    /// The chain left in its ground state forever.
    pub fn no_quench(chain: ChainSpec) -> Result<Self> {
        Self::new(
            chain,
            vec![Segment {
                stage: chain.stage(),
                duration: None,
            }],
        )
    }

    /// `num_quenches` sudden switches of the on-site frequency, alternating
    /// `omega_initial -> omega_final -> omega_initial -> ...`, one every
    /// `period`, starting at `t = 0`. Zero quenches is the free chain.
    pub fn alternating(
        chain: ChainSpec,
        omega_final: f64,
        period: f64,
        num_quenches: usize,
    ) -> Result<Self> {
        if num_quenches == 0 {
            return Self::no_quench(chain);
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(QuenchError::invalid(format!(
                "quench period must be positive, got {period}"
            )));
        }
        let segments = (0..num_quenches)
            .map(|s| Segment {
                stage: Stage {
                    omega: if s % 2 == 0 {
                        omega_final
                    } else {
                        chain.omega_initial
                    },
                    coupling: chain.coupling,
                },
                duration: (s + 1 < num_quenches).then_some(period),
            })
            .collect();
        Self::new(chain, segments)
    }

    pub fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    pub fn n_sites(&self) -> usize {
        self.chain.n_sites
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// Start time of every stage; `starts()[0] == 0`.
    pub fn starts(&self) -> &[f64] {
        &self.starts
    }

    /// Times at which the Hamiltonian switches after `t = 0`.
    pub fn boundaries(&self) -> &[f64] {
        &self.starts[1..]
    }

    /// Index of the stage acting at time `t` (stage 0 for `t <= 0`).
    pub fn stage_index(&self, t: f64) -> usize {
        self.starts.partition_point(|&s| s <= t).saturating_sub(1)
    }

    /// `lambda_m(0)` and the `(start, lambda_m)` schedule for mode `mode`
    /// (1-based).
    pub fn mode_schedule(&self, mode: usize) -> (f64, Vec<(f64, f64)>) {
        let n = self.chain.n_sites;
        let lambda0 = self.chain.stage().mode_lambda(mode, n);
        let sched = self
            .stages
            .iter()
            .zip(&self.starts)
            .map(|(st, &t0)| (t0, st.mode_lambda(mode, n)))
            .collect();
        (lambda0, sched)
    }
}

/// Squared normal-mode frequencies `lambda_m = omega^2 + 2k - 2k cos(2 pi m / n)`
/// for `m = 1..=n`; entry `m - 1` holds mode `m`.
pub fn normal_mode_frequencies(omega: f64, coupling: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(QuenchError::invalid(format!(
            "chain needs at least 2 sites, got {n}"
        )));
    }
    let stage = Stage::new(omega, coupling)?;
    Ok((1..=n).map(|m| stage.mode_lambda(m, n)).collect())
}

/// The symmetric coupling matrix `Sigma` with `H = (p.p + X^T Sigma X) / 2`.
pub fn coupling_matrix(stage: Stage, n: usize) -> Mat<f64> {
    let mut sigma = Mat::<f64>::zeros(n, n);
    for i in 0..n {
        sigma[(i, i)] += stage.omega * stage.omega + 2.0 * stage.coupling;
        sigma[(i, (i + 1) % n)] -= stage.coupling;
        sigma[(i, (i + n - 1) % n)] -= stage.coupling;
    }
    sigma
}

/// Real orthogonal matrix whose row `m - 1` is normal mode `m`.
///
/// Mode coordinates are `y = U x`, site coordinates `x = U^T y`.
#[derive(Clone, Debug)]
pub struct ModeTransform {
    matrix: Mat<f64>,
    standard: bool,
}

impl ModeTransform {
    /// Wraps a user-supplied basis, checking `U U^T = I` to 1e-12.
    pub fn from_matrix(matrix: Mat<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n < 2 || matrix.ncols() != n {
            return Err(QuenchError::invalid("mode transform must be square, n >= 2"));
        }
        let t = Self {
            matrix,
            standard: false,
        };
        let err = t.orthogonality_error();
        if !(err < 1e-12) {
            return Err(QuenchError::invalid(format!(
                "mode transform is not orthogonal (max |U U^T - I| = {err:e})"
            )));
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Mat<f64> {
        &self.matrix
    }

    /// `U[(mode_index, site_index)]`, both 0-based.
    #[inline]
    pub fn get(&self, mode_index: usize, site_index: usize) -> f64 {
        self.matrix[(mode_index, site_index)]
    }

    /// True for the cos/sin basis built by [`build_mode_transform`].
    pub fn is_standard(&self) -> bool {
        self.standard
    }

    pub fn orthogonality_error(&self) -> f64 {
        let n = self.n();
        let prod = &self.matrix * self.matrix.transpose();
        let mut err = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((prod[(i, j)] - target).abs());
            }
        }
        err
    }

    /// `U A U^T` for a site-space matrix `A`.
    pub fn to_mode_basis(&self, a: &Mat<f64>) -> Mat<f64> {
        &self.matrix * a * self.matrix.transpose()
    }
}

/// The cos/sin normal-mode basis of the periodic chain.
///
/// For `1 <= m < n/2` row `m` is `sqrt(2/n) cos(2 pi m j / n)` and row `n - m`
/// is `sqrt(2/n) sin(2 pi m j / n)`; row `n` is uniform and, for even `n`,
/// row `n/2` is the staggered mode `(-1)^j / sqrt(n)`. Sites run over
/// `j = 1..=n`.
pub fn build_mode_transform(n: usize) -> Result<ModeTransform> {
    if n < 2 {
        return Err(QuenchError::invalid(format!(
            "chain needs at least 2 sites, got {n}"
        )));
    }
    let nf = n as f64;
    let norm_pair = (2.0 / nf).sqrt();
    let norm_single = 1.0 / nf.sqrt();
    let matrix = Mat::<f64>::from_fn(n, n, |row, col| {
        let m = row + 1;
        let j = col + 1;
        if m == n {
            norm_single
        } else if 2 * m == n {
            if j % 2 == 0 {
                norm_single
            } else {
                -norm_single
            }
        } else {
            let q = if 2 * m < n { m } else { n - m };
            // reduce m*j mod n before scaling to keep the argument small
            let arg = 2.0 * PI * ((q * j) % n) as f64 / nf;
            if 2 * m < n {
                norm_pair * arg.cos()
            } else {
                norm_pair * arg.sin()
            }
        }
    });
    Ok(ModeTransform {
        matrix,
        standard: true,
    })
}

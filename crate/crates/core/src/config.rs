//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{QuenchError, Result};
use crate::protocol::{ChainSpec, QuenchProtocol};
use crate::simulation::{ObservableSet, SampleSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKind {
    RdmParams,
    Entropy,
    Momentum,
    Otoc,
    Ratio,
}

impl ObservableKind {
    pub const ALL: [ObservableKind; 5] = [
        ObservableKind::RdmParams,
        ObservableKind::Entropy,
        ObservableKind::Momentum,
        ObservableKind::Otoc,
        ObservableKind::Ratio,
    ];
}

/// Worker count: a positive integer or `"auto"`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Threads {
    #[default]
    Auto,
    Count(usize),
}

impl Threads {
    pub fn resolve(self) -> usize {
        match self {
            Threads::Auto => std::thread::available_parallelism().map_or(1, |n| n.get()),
            Threads::Count(n) => n.max(1),
        }
    }

    /// Parses the value of the `THREADS` environment override.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.eq_ignore_ascii_case("auto") {
            return Ok(Threads::Auto);
        }
        match text.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Threads::Count(n)),
            _ => Err(QuenchError::Config(format!("threads must be a positive integer or \"auto\", got {text:?}"))),
        }
    }
}

impl Serialize for Threads {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Threads::Auto => s.serialize_str("auto"),
            Threads::Count(n) => s.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Threads {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(0) => Err(serde::de::Error::custom("threads must be at least 1")),
            Raw::Count(n) => Ok(Threads::Count(n as usize)),
            Raw::Word(w) if w == "auto" => Ok(Threads::Auto),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "threads must be an integer or \"auto\", got {w:?}"
            ))),
        }
    }
}

fn default_dt() -> f64 {
    0.01
}

fn default_otoc_sites() -> [usize; 2] {
    [1, 6]
}

fn default_ratio_delta() -> f64 {
    1.0
}

fn default_observables() -> Vec<ObservableKind> {
    ObservableKind::ALL.to_vec()
}

/// One simulation run. Sites are 1-based as in the output description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n_sites: usize,
    pub omega_initial: f64,
    pub omega_final: f64,
    pub coupling: f64,
    /// Time between consecutive quenches.
    pub quench_period: f64,
    pub num_quenches: usize,
    pub t_max: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_otoc_sites")]
    pub otoc_sites: [usize; 2],
    #[serde(default = "default_ratio_delta")]
    pub ratio_delta: f64,
    #[serde(default = "default_observables")]
    pub observables: Vec<ObservableKind>,
    pub output_path: PathBuf,
    #[serde(default)]
    pub threads: Threads,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QuenchError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| QuenchError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks ranges. Returns warnings for legal but questionable settings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let bad = |msg: String| Err(QuenchError::Config(msg));
        let positive = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(QuenchError::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        if self.n_sites < 2 {
            return bad(format!("n_sites must be at least 2, got {}", self.n_sites));
        }
        positive("omega_initial", self.omega_initial)?;
        positive("omega_final", self.omega_final)?;
        positive("quench_period", self.quench_period)?;
        positive("t_max", self.t_max)?;
        positive("dt", self.dt)?;
        if !(self.coupling >= 0.0 && self.coupling.is_finite()) {
            return bad(format!("coupling must be non-negative, got {}", self.coupling));
        }
        if self.num_quenches < 1 {
            return bad("num_quenches must be at least 1".into());
        }
        if self.dt > self.t_max {
            return bad(format!("dt = {} exceeds t_max = {}", self.dt, self.t_max));
        }
        if !self.ratio_delta.is_finite() {
            return bad("ratio_delta must be finite".into());
        }
        for s in self.otoc_sites {
            if !(1..=self.n_sites).contains(&s) {
                return bad(format!("otoc site {s} outside 1..={}", self.n_sites));
            }
        }
        let mut seen = Vec::new();
        for o in &self.observables {
            if seen.contains(o) {
                return bad(format!("observable {o:?} listed twice"));
            }
            seen.push(*o);
        }
        let mut warnings = Vec::new();
        let span = self.num_quenches as f64 * self.quench_period;
        if self.t_max <= span {
            warnings.push(format!(
                "t_max = {} leaves little or no time after the quench sequence (num_quenches * quench_period = {span})",
                self.t_max
            ));
        }
        Ok(warnings)
    }

    pub fn protocol(&self) -> Result<QuenchProtocol> {
        let chain = ChainSpec::new(self.n_sites, self.omega_initial, self.coupling)
            .map_err(|e| QuenchError::Config(e.to_string()))?;
        QuenchProtocol::alternating(chain, self.omega_final, self.quench_period, self.num_quenches)
            .map_err(|e| QuenchError::Config(e.to_string()))
    }

    pub fn observable_set(&self) -> ObservableSet {
        let has = |k| self.observables.contains(&k);
        ObservableSet {
            rdm_params: has(ObservableKind::RdmParams),
            entropy: has(ObservableKind::Entropy),
            momentum: has(ObservableKind::Momentum),
            otoc: has(ObservableKind::Otoc),
            ratio: has(ObservableKind::Ratio),
        }
    }

    pub fn sample_spec(&self) -> SampleSpec {
        SampleSpec {
            observables: self.observable_set(),
            site: 0,
            otoc_sites: (self.otoc_sites[0] - 1, self.otoc_sites[1] - 1),
            ratio_delta: self.ratio_delta,
        }
    }
}

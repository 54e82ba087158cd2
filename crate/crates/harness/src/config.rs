//! Experiment configuration files.
//!
//! A config is TOML with three fixed sections and a list of assertions; see
//! `configs/SCHEMA.md` for every key.

use std::path::{Path, PathBuf};

use mstar_core::consistency::ConParams;
use mstar_core::estimator::{Growth, StageParams};
use mstar_core::logic::parse_sentence;
use mstar_core::prover::ProofBudget;
use mstar_core::sequences::SequenceDef;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trend::{TrendAssertion, TrendKind};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteKind {
    Trend,
    Crosscheck,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSection {
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub kind: SuiteKind,
    pub samples: u64,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Sequences to record besides those named by assertions.
    #[serde(default)]
    pub sequences: Vec<String>,
    /// Properties this suite exercises, for the coverage manifest.
    #[serde(default)]
    pub covers: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    pub stages: Vec<u64>,
    /// `exponential`, `linear`, `power` or `table`.
    pub growth: String,
    pub base: Option<u64>,
    pub slope: Option<u64>,
    pub offset: Option<u64>,
    pub coeff: Option<u64>,
    pub exponent: Option<u32>,
    pub values: Option<Vec<u64>>,
    pub cap: u64,
    #[serde(default = "default_proof_budget")]
    pub proof_budget: u64,
    #[serde(default = "default_size_cap")]
    pub sentence_size_cap: u64,
    #[serde(default = "default_pool_cap")]
    pub probe_pool_cap: u64,
    pub machines: Option<u64>,
    pub bit_length: Option<u64>,
    pub step_budget: Option<u64>,
    pub axiom_count: Option<u64>,
}

fn default_proof_budget() -> u64 {
    ConParams::default().proof_budget.max_steps
}

fn default_size_cap() -> u64 {
    ConParams::default().sentence_size_cap
}

fn default_pool_cap() -> u64 {
    ConParams::default().probe_pool_cap
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_window")]
    pub window: usize,
}

fn default_tol() -> f64 {
    0.15
}

fn default_window() -> usize {
    3
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol: default_tol(), window: default_window() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssertionSpec {
    pub name: String,
    pub kind: String,
    pub sequences: Vec<String>,
    pub target: Option<f64>,
    pub tol: Option<f64>,
    pub window: Option<usize>,
    /// Allowed rise (or fall) between neighbours in monotone-tail checks.
    pub slack: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrosscheckSection {
    pub sentences: Vec<String>,
    pub atom_window: u64,
    pub rounds: u64,
    pub machine_budget: u64,
    pub pstar_samples: u64,
    pub pstar_seed: u64,
    #[serde(default = "default_xtol")]
    pub tol: f64,
    /// Number of final stages compared.
    #[serde(default = "default_xwindow")]
    pub window: usize,
}

fn default_xtol() -> f64 {
    0.10
}

fn default_xwindow() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: SuiteSection,
    pub schedule: ScheduleSection,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, rename = "assertion")]
    pub assertions: Vec<AssertionSpec>,
    pub crosscheck: Option<CrosscheckSection>,
}

/// Largest atom window a cross-check may use.
pub const MAX_CROSSCHECK_WINDOW: u64 = 4;

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn growth(&self) -> Result<Growth, ConfigError> {
        let s = &self.schedule;
        let need =
            |v: Option<u64>, key: &str| v.ok_or_else(|| ConfigError::Invalid(format!("growth `{}` needs `{key}`", s.growth)));
        Ok(match s.growth.as_str() {
            "exponential" => Growth::Exponential { base: need(s.base, "base")? },
            "linear" => Growth::Linear { slope: need(s.slope, "slope")?, offset: s.offset.unwrap_or(0) },
            "power" => Growth::Power {
                coeff: need(s.coeff, "coeff")?,
                exponent: s.exponent.ok_or_else(|| ConfigError::Invalid("growth `power` needs `exponent`".into()))?,
            },
            "table" => Growth::Table {
                values: s.values.clone().ok_or_else(|| ConfigError::Invalid("growth `table` needs `values`".into()))?,
            },
            other => return invalid(format!("unknown growth `{other}`")),
        })
    }

    pub fn con_params(&self) -> ConParams {
        ConParams {
            proof_budget: ProofBudget::new(self.schedule.proof_budget),
            sentence_size_cap: self.schedule.sentence_size_cap,
            probe_pool_cap: self.schedule.probe_pool_cap,
        }
    }

    /// One `StageParams` per scheduled `n`.
    pub fn stages(&self) -> Result<Vec<StageParams>, ConfigError> {
        let growth = self.growth()?;
        let s = &self.schedule;
        Ok(s.stages
            .iter()
            .map(|&n| {
                let mut stage = StageParams::new(n, growth.clone(), s.cap, self.con_params());
                stage.overrides.machines = s.machines;
                stage.overrides.bit_length = s.bit_length;
                stage.overrides.step_budget = s.step_budget;
                stage.overrides.axiom_count = s.axiom_count;
                stage
            })
            .collect())
    }

    pub fn trend_assertions(&self) -> Result<Vec<TrendAssertion>, ConfigError> {
        self.assertions.iter().map(|a| self.trend_assertion(a)).collect()
    }

    fn trend_assertion(&self, a: &AssertionSpec) -> Result<TrendAssertion, ConfigError> {
        let tol = a.tol.unwrap_or(self.tolerances.tol);
        let window = a.window.unwrap_or(self.tolerances.window);
        let slack = a.slack.unwrap_or(0.0);
        let (kind, arity) = match a.kind.as_str() {
            "approaches" => (TrendKind::ApproachesValue { target: a.target.unwrap_or(0.0), tol }, Some(1)),
            "sum_approaches" => (TrendKind::SumApproaches { target: a.target.unwrap_or(1.0), tol }, None),
            "difference_approaches" => (TrendKind::DifferenceApproaches { tol }, Some(2)),
            "nonincreasing_tail" => (TrendKind::NonincreasingTail { slack }, Some(1)),
            "nondecreasing_tail" => (TrendKind::NondecreasingTail { slack }, Some(1)),
            "tail_spread" => (TrendKind::TailSpread { tol }, Some(1)),
            other => return invalid(format!("assertion `{}`: unknown kind `{other}`", a.name)),
        };
        match arity {
            Some(k) if a.sequences.len() != k => {
                return invalid(format!("assertion `{}`: `{}` takes {k} sequence(s)", a.name, a.kind))
            }
            None if a.sequences.len() < 2 => {
                return invalid(format!("assertion `{}`: a sum needs at least two sequences", a.name))
            }
            _ => {}
        }
        if !(tol > 0.0 && tol < 1.0) {
            return invalid(format!("assertion `{}`: tolerance {tol} not in (0, 1)", a.name));
        }
        if !(0.0..1.0).contains(&slack) {
            return invalid(format!("assertion `{}`: slack {slack} not in [0, 1)", a.name));
        }
        if window == 0 {
            return invalid(format!("assertion `{}`: window must be positive", a.name));
        }
        Ok(TrendAssertion { name: a.name.clone(), kind, sequences: a.sequences.clone(), window })
    }

    /// Every sequence the suite evaluates, in first-mention order.
    pub fn sequence_ids(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mentioned = self.suite.sequences.iter().chain(self.assertions.iter().flat_map(|a| &a.sequences));
        for id in mentioned {
            if !out.contains(id) {
                out.push(id.clone());
            }
        }
        out
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.suite.id.trim().is_empty() {
            return invalid("suite.id is empty");
        }
        if self.suite.samples == 0 {
            return invalid("suite.samples must be positive");
        }
        let stages = &self.schedule.stages;
        if stages.is_empty() {
            return invalid("schedule.stages is empty");
        }
        if stages.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("schedule.stages must be strictly increasing");
        }
        let growth = self.growth()?;
        if !growth.is_nondecreasing(*stages.last().expect("nonempty")) {
            return invalid("growth must be nondecreasing over the schedule");
        }
        let t = self.tolerances;
        if !(t.tol > 0.0 && t.tol < 1.0) {
            return invalid(format!("tolerances.tol {} not in (0, 1)", t.tol));
        }
        self.trend_assertions()?;
        for id in self.sequence_ids() {
            SequenceDef::lookup(&id).map_err(|e| ConfigError::Invalid(format!("sequence `{id}`: {e}")))?;
        }
        match (self.suite.kind, &self.crosscheck) {
            (SuiteKind::Trend, _) => {
                if self.assertions.is_empty() {
                    return invalid("a trend suite needs at least one [[assertion]]");
                }
            }
            (SuiteKind::Crosscheck, None) => return invalid("a crosscheck suite needs a [crosscheck] section"),
            (SuiteKind::Crosscheck, Some(x)) => {
                if x.atom_window > MAX_CROSSCHECK_WINDOW {
                    return invalid(format!("crosscheck.atom_window {} exceeds {MAX_CROSSCHECK_WINDOW}", x.atom_window));
                }
                if !(x.tol > 0.0 && x.tol < 1.0) {
                    return invalid(format!("crosscheck.tol {} not in (0, 1)", x.tol));
                }
                if x.pstar_samples == 0 || x.window == 0 || x.sentences.is_empty() {
                    return invalid("crosscheck needs sentences, positive pstar_samples and window");
                }
                for s in &x.sentences {
                    let phi = parse_sentence(s).map_err(|e| ConfigError::Invalid(format!("sentence `{s}`: {e}")))?;
                    if phi.max_atom().is_some_and(|a| a >= x.atom_window.into()) {
                        return invalid(format!("sentence `{s}` leaves the atom window"));
                    }
                }
            }
        }
        Ok(())
    }
}

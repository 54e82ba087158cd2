//! Claim accumulation and the probability estimates built on it.
//!
//! A stage runs a batch of machines in order. Each machine's emitted
//! sentences are merged into the claim set when the union passes the
//! stage's consistency check. `M*_n(phi)` is the probability that `phi` is in
//! the final claim set when every machine's bits are uniform. It is computed
//! exactly by enumeration for tiny stages and by seeded Monte Carlo
//! otherwise.
//!
//! The second half is the limit object: a truncated version of the random
//! consistent-extension process, with exact consistency over a small window
//! of atoms, used as a reference for the stage estimates.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::consistency::{ClaimSet, ConChecker, ConParams};
use crate::logic::{enumerate, Sentence, SentenceIndex, Theory};
use crate::machine::{run_bits, BitSource, OutputTrace};
use crate::prover::TruthTable;
use crate::sequences::{generate, SequenceDef, SequenceError};

/// Largest number of enumerated bits `mstar_exact` accepts.
pub const MAX_EXACT_BITS: u64 = 24;
/// Largest atom window the extension sampler accepts.
pub const MAX_WINDOW: u64 = 24;
/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EstimatorError {
    #[error("bitstring {index} has {len} bits, stage needs at least {need}")]
    BitstringTooShort { index: usize, len: usize, need: u64 },
    #[error("exact enumeration needs {bits} bits, budget is {budget} (max {max}); use Monte Carlo")]
    ExactBudget { bits: u64, budget: u64, max: u64 },
    #[error("atom window {window} exceeds {max}")]
    WindowTooLarge { window: u64, max: u64 },
    #[error("sample count must be positive")]
    NoSamples,
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// Nondecreasing stage-size function; every value is clipped to the stage cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Growth {
    /// `base^n`
    Exponential { base: u64 },
    /// `slope * n + offset`
    Linear { slope: u64, offset: u64 },
    /// `coeff * n^exponent`
    Power { coeff: u64, exponent: u32 },
    /// `values[n]`, repeating the last entry past the end.
    Table { values: Vec<u64> },
}

impl Default for Growth {
    fn default() -> Self {
        Growth::Exponential { base: 2 }
    }
}

impl Growth {
    pub fn eval(&self, n: u64) -> u64 {
        match self {
            Growth::Exponential { base } => base.saturating_pow(n.min(u32::MAX as u64) as u32),
            Growth::Linear { slope, offset } => slope.saturating_mul(n).saturating_add(*offset),
            Growth::Power { coeff, exponent } => coeff.saturating_mul(n.saturating_pow(*exponent)),
            Growth::Table { values } => match values.get(n as usize).or(values.last()) {
                Some(v) => *v,
                None => 0,
            },
        }
    }

    /// Checks monotonicity on `0..=n_max`.
    pub fn is_nondecreasing(&self, n_max: u64) -> bool {
        (1..=n_max).all(|n| self.eval(n - 1) <= self.eval(n))
    }
}

/// Per-quantity overrides of the shared growth value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageOverrides {
    pub machines: Option<u64>,
    pub bit_length: Option<u64>,
    pub step_budget: Option<u64>,
    pub axiom_count: Option<u64>,
}

/// Everything that fixes stage `n`: machine count, bits per machine, machine
/// step budget and axiom count all default to `min(growth(n), cap)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageParams {
    pub n: u64,
    pub growth: Growth,
    pub cap: u64,
    pub con: ConParams,
    #[serde(default)]
    pub overrides: StageOverrides,
}

impl StageParams {
    pub fn new(n: u64, growth: Growth, cap: u64, con: ConParams) -> Self {
        StageParams { n, growth, cap, con, overrides: StageOverrides::default() }
    }

    /// A stage with every quantity given explicitly.
    pub fn fixed(machines: u64, bit_length: u64, step_budget: u64, axiom_count: u64, con: ConParams) -> Self {
        StageParams {
            n: 0,
            growth: Growth::Table { values: vec![0] },
            cap: 0,
            con,
            overrides: StageOverrides {
                machines: Some(machines),
                bit_length: Some(bit_length),
                step_budget: Some(step_budget),
                axiom_count: Some(axiom_count),
            },
        }
    }

    pub fn size(&self) -> u64 {
        self.growth.eval(self.n).min(self.cap)
    }

    pub fn machines(&self) -> u64 {
        self.overrides.machines.unwrap_or_else(|| self.size())
    }

    pub fn bit_length(&self) -> u64 {
        self.overrides.bit_length.unwrap_or_else(|| self.size())
    }

    pub fn step_budget(&self) -> u64 {
        self.overrides.step_budget.unwrap_or_else(|| self.size())
    }

    pub fn axiom_count(&self) -> u64 {
        self.overrides.axiom_count.unwrap_or_else(|| self.size())
    }

    /// Bits enumerated by an exact evaluation of this stage.
    pub fn total_bits(&self) -> u64 {
        self.machines().saturating_mul(self.bit_length())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMode {
    Exact,
    MonteCarlo,
}

impl std::fmt::Display for EstimateMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EstimateMode::Exact => "exact",
            EstimateMode::MonteCarlo => "monte_carlo",
        })
    }
}

/// A probability `numerator / denominator` with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub numerator: u64,
    pub denominator: u64,
    pub mode: EstimateMode,
    pub samples: u64,
    /// Wilson 95% half-width; zero for exact values.
    pub ci_halfwidth: f64,
    pub seed: u64,
}

impl Estimate {
    pub fn exact(numerator: u64, bits: u64, seed: u64) -> Self {
        Estimate { numerator, denominator: 1 << bits, mode: EstimateMode::Exact, samples: 1 << bits, ci_halfwidth: 0.0, seed }
    }

    pub fn monte_carlo(hits: u64, samples: u64, seed: u64) -> Self {
        Estimate {
            numerator: hits,
            denominator: samples,
            mode: EstimateMode::MonteCarlo,
            samples,
            ci_halfwidth: wilson(hits, samples).1,
            seed,
        }
    }

    pub fn value(&self) -> f64 {
        if self.denominator == 0 {
            0.0
        } else {
            self.numerator as f64 / self.denominator as f64
        }
    }
}

/// Wilson score interval at 95%: `(center, half_width)`.
pub fn wilson(hits: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.5, 0.5);
    }
    let nf = n as f64;
    let p = hits as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    (center, half)
}

/// Seed for sample `index` of a run with master seed `master`.
pub fn sample_seed(master: u64, index: u64) -> u64 {
    splitmix(master ^ splitmix(index.wrapping_add(0x6a09_e667_f3bc_c909)))
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The bit source of machine `j` within a sample.
pub fn machine_source(sample_seed: u64, j: u64, limit: Option<u64>) -> BitSource {
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
    rng.set_stream(j);
    BitSource::random(rng, limit)
}

/// What happened over one run of the claim loop.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClaimsReport {
    pub claims: ClaimSet,
    /// Machines whose output changed the claim set.
    pub merged: u64,
    /// Machines whose output was rejected by the consistency check.
    pub rejected: u64,
    /// Rejections forced because the check refused the set (too large or
    /// search limit); counted inside `rejected` as well.
    pub refused: u64,
    /// Machines that emitted nothing new.
    pub idle: u64,
}

fn emitted_set(trace: &OutputTrace) -> ClaimSet {
    trace.emitted.iter().map(enumerate).collect()
}

/// Distinct emitted indices, or `None` when there are more than `cap`.
fn distinct_indices(trace: &OutputTrace, cap: usize) -> Option<BTreeSet<&SentenceIndex>> {
    let mut set = BTreeSet::new();
    for k in &trace.emitted {
        set.insert(k);
        if set.len() > cap {
            return None;
        }
    }
    Some(set)
}

fn run_claims(
    sources: impl Iterator<Item = BitSource>,
    stage: &StageParams,
    theory: &Theory,
    checker: &ConChecker,
) -> ClaimsReport {
    let mut report =
        ClaimsReport { claims: theory.first_axioms(stage.axiom_count()).into_iter().collect(), ..Default::default() };
    let t = stage.step_budget();
    for mut src in sources {
        let trace = run_bits(&mut src, t);
        // more claims than the checker accepts: refused without enumerating
        let Some(indices) = distinct_indices(&trace, checker.max_claims()) else {
            report.rejected += 1;
            report.refused += 1;
            continue;
        };
        let s: ClaimSet = indices.into_iter().map(enumerate).collect();
        if s.is_subset(&report.claims) {
            report.idle += 1;
            continue;
        }
        let candidate = report.claims.union(&s);
        match checker.check(&candidate) {
            Ok(true) => {
                report.claims = candidate;
                report.merged += 1;
            }
            Ok(false) => report.rejected += 1,
            Err(_) => {
                report.rejected += 1;
                report.refused += 1;
            }
        }
    }
    report
}

/// The claim loop over explicit bitstrings, in order.
pub fn claims_n(bitstrings: &[Vec<bool>], stage: &StageParams, theory: &Theory) -> Result<ClaimSet, EstimatorError> {
    claims_report(bitstrings, stage, theory).map(|r| r.claims)
}

pub fn claims_report(bitstrings: &[Vec<bool>], stage: &StageParams, theory: &Theory) -> Result<ClaimsReport, EstimatorError> {
    let need = stage.bit_length();
    if let Some((index, b)) = bitstrings.iter().enumerate().find(|(_, b)| (b.len() as u64) < need) {
        return Err(EstimatorError::BitstringTooShort { index, len: b.len(), need });
    }
    let checker = ConChecker::new(stage.con);
    Ok(run_claims(bitstrings.iter().map(|b| BitSource::finite(b.clone())), stage, theory, &checker))
}

/// One Monte Carlo sample: the claim loop over `stage.machines()` random
/// machines drawn from `seed`.
pub fn sample_claims(stage: &StageParams, theory: &Theory, seed: u64) -> ClaimsReport {
    let checker = ConChecker::new(stage.con);
    let limit = Some(stage.bit_length());
    run_claims((0..stage.machines()).map(|j| machine_source(seed, j, limit)), stage, theory, &checker)
}

/// Exact `M*_n(phi)` by enumerating every assignment of the stage's bits.
pub fn mstar_exact(phi: &Sentence, stage: &StageParams, theory: &Theory, bit_budget: u64) -> Result<Estimate, EstimatorError> {
    Ok(mstar_exact_batch(std::slice::from_ref(phi), stage, theory, bit_budget)?.remove(0))
}

pub fn mstar_exact_batch(
    phis: &[Sentence],
    stage: &StageParams,
    theory: &Theory,
    bit_budget: u64,
) -> Result<Vec<Estimate>, EstimatorError> {
    let bits = stage.total_bits();
    if bits > bit_budget || bit_budget > MAX_EXACT_BITS {
        return Err(EstimatorError::ExactBudget { bits, budget: bit_budget, max: MAX_EXACT_BITS });
    }
    let (m, l) = (stage.machines() as usize, stage.bit_length() as usize);
    let counts = (0..1u64 << bits)
        .into_par_iter()
        .map(|word| {
            let strings: Vec<Vec<bool>> =
                (0..m).map(|i| (0..l).map(|k| (word >> (bits as usize - 1 - (i * l + k))) & 1 == 1).collect()).collect();
            let checker = ConChecker::new(stage.con);
            let r = run_claims(strings.into_iter().map(BitSource::finite), stage, theory, &checker);
            phis.iter().map(|p| u64::from(r.claims.contains(p))).collect::<Vec<u64>>()
        })
        .reduce(|| vec![0; phis.len()], add_counts);
    Ok(counts.into_iter().map(|c| Estimate::exact(c, bits, 0)).collect())
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Monte Carlo `M*_n(phi)` from `samples` independent runs.
pub fn mstar_mc(
    phi: &Sentence,
    stage: &StageParams,
    theory: &Theory,
    samples: u64,
    seed: u64,
) -> Result<Estimate, EstimatorError> {
    Ok(mstar_mc_batch(std::slice::from_ref(phi), stage, theory, samples, seed)?.remove(0))
}

/// Monte Carlo estimates for several sentences from the same runs.
pub fn mstar_mc_batch(
    phis: &[Sentence],
    stage: &StageParams,
    theory: &Theory,
    samples: u64,
    seed: u64,
) -> Result<Vec<Estimate>, EstimatorError> {
    if samples == 0 {
        return Err(EstimatorError::NoSamples);
    }
    let counts = (0..samples)
        .into_par_iter()
        .map(|i| {
            let r = sample_claims(stage, theory, sample_seed(seed, i));
            phis.iter().map(|p| u64::from(r.claims.contains(p))).collect::<Vec<u64>>()
        })
        .reduce(|| vec![0; phis.len()], add_counts);
    Ok(counts.into_iter().map(|c| Estimate::monte_carlo(c, samples, seed)).collect())
}

/// The diagonal trajectory `M*_n(seq(n))` over a schedule.
pub fn mstar_sequence(
    seq: &SequenceDef,
    schedule: &[StageParams],
    theory: &Theory,
    samples: u64,
    seed: u64,
) -> Result<Vec<Estimate>, EstimatorError> {
    let mut out = Vec::with_capacity(schedule.len());
    for stage in schedule {
        let phi = generate(seq, stage.n)?;
        out.push(mstar_mc(&phi, stage, theory, samples, seed)?);
    }
    Ok(out)
}

/// Parameters of the truncated extension process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionParams {
    pub rounds: u64,
    /// Step budget per machine.
    pub machine_budget: u64,
    /// Only atoms `a_0 .. a_{window-1}` are kept.
    pub atom_window: u64,
    /// Axioms of the theory placed in the initial set.
    pub axiom_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundLog {
    /// Bits the machine consumed.
    pub bits: Vec<bool>,
    pub accepted: bool,
    /// Claims dropped for mentioning atoms outside the window.
    pub dropped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSample {
    pub accepted: ClaimSet,
    pub rounds: u64,
    pub machine_log: Vec<RoundLog>,
}

struct Extension {
    table: TruthTable,
    models: Vec<u64>,
    accepted: ClaimSet,
}

impl Extension {
    fn start(window: u64, axioms: Vec<Sentence>) -> (Self, usize) {
        let table = TruthTable::new((0..window).map(BigUint::from).collect()).expect("window within cap");
        let mut ext = Extension { models: table.joint_models([]).expect("no sentences"), table, accepted: ClaimSet::new() };
        let dropped = ext.offer(axioms).1;
        (ext, dropped)
    }

    /// Adds the in-window part of `claims` if jointly consistent with what is
    /// already accepted. Returns `(accepted, dropped)`.
    fn offer(&mut self, claims: impl IntoIterator<Item = Sentence>) -> (bool, usize) {
        let mut dropped = 0;
        let mut models = self.models.clone();
        let mut kept = Vec::new();
        for s in claims {
            match self.table.models(&s) {
                Some(m) => {
                    for (a, b) in models.iter_mut().zip(&m) {
                        *a &= b;
                    }
                    kept.push(s);
                }
                None => dropped += 1,
            }
        }
        if kept.is_empty() || models.iter().all(|w| *w == 0) {
            return (false, dropped);
        }
        self.models = models;
        self.accepted.extend(kept);
        (true, dropped)
    }

    /// `Some(true)` if the accepted set entails `phi`, `None` if `phi`
    /// leaves the window.
    fn entails(&self, phi: &Sentence) -> Option<bool> {
        let m = self.table.models(phi)?;
        Some(self.models.iter().zip(&m).all(|(a, b)| a & !b == 0))
    }
}

fn extend(seed: u64, theory: &Theory, params: &ExtensionParams, log: bool) -> Result<(Extension, Vec<RoundLog>), EstimatorError> {
    if params.atom_window > MAX_WINDOW {
        return Err(EstimatorError::WindowTooLarge { window: params.atom_window, max: MAX_WINDOW });
    }
    let (mut ext, _) = Extension::start(params.atom_window, theory.first_axioms(params.axiom_count));
    let mut logs = Vec::new();
    for j in 0..params.rounds {
        let mut src = machine_source(seed, j, None);
        let trace = run_bits(&mut src, params.machine_budget);
        let claims = emitted_set(&trace);
        let (accepted, dropped) = ext.offer(claims.to_vec());
        if log {
            logs.push(RoundLog { bits: src.consumed().to_vec(), accepted, dropped });
        }
    }
    Ok((ext, logs))
}

/// One truncated run of the random consistent-extension process.
pub fn sample_extension(seed: u64, theory: &Theory, params: &ExtensionParams) -> Result<ExtensionSample, EstimatorError> {
    let (ext, machine_log) = extend(seed, theory, params, true)?;
    Ok(ExtensionSample { accepted: ext.accepted, rounds: params.rounds, machine_log })
}

/// `P*(phi)` estimate with the number of samples that decided neither `phi`
/// nor its negation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PStarEstimate {
    pub estimate: Estimate,
    pub undecided: u64,
}

/// Fraction of sampled extensions whose accepted set entails `phi`.
pub fn pstar_truncated(
    phi: &Sentence,
    seed: u64,
    samples: u64,
    theory: &Theory,
    params: &ExtensionParams,
) -> Result<PStarEstimate, EstimatorError> {
    Ok(pstar_batch(std::slice::from_ref(phi), seed, samples, theory, params)?.remove(0))
}

pub fn pstar_batch(
    phis: &[Sentence],
    seed: u64,
    samples: u64,
    theory: &Theory,
    params: &ExtensionParams,
) -> Result<Vec<PStarEstimate>, EstimatorError> {
    if samples == 0 {
        return Err(EstimatorError::NoSamples);
    }
    if params.atom_window > MAX_WINDOW {
        return Err(EstimatorError::WindowTooLarge { window: params.atom_window, max: MAX_WINDOW });
    }
    let negs: Vec<Sentence> = phis.iter().map(|p| Sentence::not(p.clone())).collect();
    let counts = (0..samples)
        .into_par_iter()
        .map(|i| {
            let (ext, _) = extend(sample_seed(seed, i), theory, params, false).expect("window checked");
            let mut c = vec![0; 2 * phis.len()];
            for (k, (p, n)) in phis.iter().zip(&negs).enumerate() {
                let yes = ext.entails(p) == Some(true);
                c[2 * k] = u64::from(yes);
                c[2 * k + 1] = u64::from(!yes && ext.entails(n) != Some(true));
            }
            c
        })
        .reduce(|| vec![0; 2 * phis.len()], add_counts);
    Ok(counts
        .chunks(2)
        .map(|c| PStarEstimate { estimate: Estimate::monte_carlo(c[0], samples, seed), undecided: c[1] })
        .collect())
}

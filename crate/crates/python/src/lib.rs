//! Python bindings: sentences, the bounded prover and consistency check, the
//! machine, and the M* / P* estimators.

use mstar_core::consistency::{ClaimSet, ConChecker, ConParams};
use mstar_core::estimator::{self, Estimate, EstimatorError, ExtensionParams, StageParams};
use mstar_core::logic::{self, Sentence, SentenceIndex, Theory};
use mstar_core::machine::{parse_bits, run_bits, BitSource};
use mstar_core::prover::{self, ProofBudget};
use mstar_core::sequences::{builtin_catalog, generate, SequenceDef};
use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A propositional sentence.
#[pyclass(name = "Sentence", module = "mstar", frozen, eq, hash, ord, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PySentence(pub Sentence);

#[pymethods]
impl PySentence {
    /// Parses `_|_`, `a3`, `!x`, `x & y`, `x | y`, `x -> y` with parentheses.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        logic::parse_sentence(text).map(PySentence).map_err(value_error)
    }

    #[staticmethod]
    fn from_index(k: BigUint) -> Self {
        PySentence(logic::enumerate(&SentenceIndex(k)))
    }

    #[getter]
    fn index(&self) -> BigUint {
        logic::sentence_index(&self.0).0
    }

    #[getter]
    fn size(&self) -> u64 {
        logic::sentence_size(&self.0)
    }

    fn __str__(&self) -> String {
        logic::render_sentence(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Sentence({:?})", logic::render_sentence(&self.0))
    }
}

/// Accepts a `Sentence` or a string to parse.
fn sentence_arg(obj: &Bound<'_, PyAny>) -> PyResult<Sentence> {
    if let Ok(s) = obj.cast::<PySentence>() {
        return Ok(s.get().0.clone());
    }
    let text: String = obj.extract()?;
    logic::parse_sentence(&text).map_err(value_error)
}

fn sentences_arg(objs: &Bound<'_, PyAny>) -> PyResult<Vec<Sentence>> {
    objs.try_iter()?.map(|o| sentence_arg(&o?)).collect()
}

/// An estimate with a 95% half-width (zero for exact values).
#[pyclass(name = "Estimate", module = "mstar", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyEstimate {
    pub value: f64,
    pub numerator: u64,
    pub denominator: u64,
    pub mode: String,
    pub samples: u64,
    pub ci: f64,
    pub seed: u64,
}

impl From<&Estimate> for PyEstimate {
    fn from(e: &Estimate) -> Self {
        PyEstimate {
            value: e.value(),
            numerator: e.numerator,
            denominator: e.denominator,
            mode: e.mode.to_string(),
            samples: e.samples,
            ci: e.ci_halfwidth,
            seed: e.seed,
        }
    }
}

#[pymethods]
impl PyEstimate {
    fn __repr__(&self) -> String {
        format!("Estimate(value={}, ci={}, mode={:?}, samples={})", self.value, self.ci, self.mode, self.samples)
    }
}

/// One stage of the estimator: `machines` bitstrings of `bit_length` bits,
/// each run for `step_budget` steps.
#[pyclass(name = "Stage", module = "mstar", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyStage(pub StageParams);

#[pymethods]
impl PyStage {
    #[new]
    #[pyo3(signature = (machines, bit_length, step_budget, axiom_count=0, proof_budget=16, sentence_size_cap=16, probe_pool_cap=256))]
    fn new(
        machines: u64,
        bit_length: u64,
        step_budget: u64,
        axiom_count: u64,
        proof_budget: u64,
        sentence_size_cap: u64,
        probe_pool_cap: u64,
    ) -> Self {
        let con = ConParams { proof_budget: ProofBudget::new(proof_budget), sentence_size_cap, probe_pool_cap };
        PyStage(StageParams::fixed(machines, bit_length, step_budget, axiom_count, con))
    }

    #[getter]
    fn machines(&self) -> u64 {
        self.0.machines()
    }

    #[getter]
    fn bit_length(&self) -> u64 {
        self.0.bit_length()
    }

    #[getter]
    fn step_budget(&self) -> u64 {
        self.0.step_budget()
    }

    fn __repr__(&self) -> String {
        format!("Stage(machines={}, bit_length={}, step_budget={})", self.0.machines(), self.0.bit_length(), self.0.step_budget())
    }
}

fn est_error(e: EstimatorError) -> PyErr {
    value_error(e)
}

/// True iff the bounded prover refutes the set within `budget` resolution levels.
#[pyfunction]
#[pyo3(signature = (sentences, budget=10_000))]
fn refutes(sentences: &Bound<'_, PyAny>, budget: u64) -> PyResult<bool> {
    let set = sentences_arg(sentences)?;
    Ok(prover::refute_bounded(&set, ProofBudget::new(budget)).is_refuted())
}

/// Exact satisfiability by truth table (at most 24 atoms).
#[pyfunction]
fn satisfiable(sentences: &Bound<'_, PyAny>) -> PyResult<bool> {
    let set = sentences_arg(sentences)?;
    prover::semantic_consistent(&set).map_err(value_error)
}

/// The bounded consistency check on a set of claims.
#[pyfunction]
#[pyo3(signature = (sentences, proof_budget=16, sentence_size_cap=16, probe_pool_cap=256))]
fn con_n(sentences: &Bound<'_, PyAny>, proof_budget: u64, sentence_size_cap: u64, probe_pool_cap: u64) -> PyResult<bool> {
    let phi: ClaimSet = sentences_arg(sentences)?.into_iter().collect();
    let params = ConParams { proof_budget: ProofBudget::new(proof_budget), sentence_size_cap, probe_pool_cap };
    ConChecker::new(params).check(&phi).map_err(value_error)
}

/// Runs the machine on a bitstring of `0`/`1` characters; returns
/// `(emitted sentence indices, steps used, halted)`.
#[pyfunction]
fn run_machine(bits: &str, step_budget: u64) -> PyResult<(Vec<BigUint>, u64, bool)> {
    let bits = parse_bits(bits).ok_or_else(|| PyValueError::new_err("bitstring must contain only 0 and 1"))?;
    let trace = run_bits(&mut BitSource::finite(bits), step_budget);
    Ok((trace.emitted.into_iter().map(|k| k.0).collect(), trace.steps_used, trace.halted))
}

/// Exact M* over every bitstring of the stage (at most 24 bits in total).
#[pyfunction]
#[pyo3(signature = (sentences, stage, bit_budget=24))]
fn mstar_exact(
    py: Python<'_>,
    sentences: &Bound<'_, PyAny>,
    stage: &Bound<'_, PyStage>,
    bit_budget: u64,
) -> PyResult<Vec<PyEstimate>> {
    let (phis, stage) = (sentences_arg(sentences)?, stage.get().0.clone());
    let out = py.detach(|| estimator::mstar_exact_batch(&phis, &stage, &Theory::empty(), bit_budget)).map_err(est_error)?;
    Ok(out.iter().map(PyEstimate::from).collect())
}

/// Monte Carlo M* with Wilson intervals.
#[pyfunction]
fn mstar_mc(
    py: Python<'_>,
    sentences: &Bound<'_, PyAny>,
    stage: &Bound<'_, PyStage>,
    samples: u64,
    seed: u64,
) -> PyResult<Vec<PyEstimate>> {
    let (phis, stage) = (sentences_arg(sentences)?, stage.get().0.clone());
    let out = py.detach(|| estimator::mstar_mc_batch(&phis, &stage, &Theory::empty(), samples, seed)).map_err(est_error)?;
    Ok(out.iter().map(PyEstimate::from).collect())
}

/// Truncated-limit estimates; returns `(estimate, undecided)` per sentence.
#[pyfunction]
#[pyo3(signature = (sentences, samples, seed, rounds=4096, machine_budget=256, atom_window=3))]
fn pstar(
    py: Python<'_>,
    sentences: &Bound<'_, PyAny>,
    samples: u64,
    seed: u64,
    rounds: u64,
    machine_budget: u64,
    atom_window: u64,
) -> PyResult<Vec<(PyEstimate, u64)>> {
    let phis = sentences_arg(sentences)?;
    let params = ExtensionParams { rounds, machine_budget, atom_window, axiom_count: 0 };
    let out = py.detach(|| estimator::pstar_batch(&phis, seed, samples, &Theory::empty(), &params)).map_err(est_error)?;
    Ok(out.iter().map(|p| (PyEstimate::from(&p.estimate), p.undecided)).collect())
}

/// The `n`-th member of a named sequence.
#[pyfunction]
fn sequence(id: &str, n: u64) -> PyResult<PySentence> {
    let def = SequenceDef::lookup(id).map_err(value_error)?;
    generate(&def, n).map(PySentence).map_err(value_error)
}

/// `(id, description)` for every built-in sequence.
#[pyfunction]
fn list_sequences() -> Vec<(String, String)> {
    builtin_catalog().into_iter().map(|d| (d.id, d.description)).collect()
}

#[pymodule]
pub fn mstar(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySentence>()?;
    m.add_class::<PyEstimate>()?;
    m.add_class::<PyStage>()?;
    m.add_function(wrap_pyfunction!(refutes, m)?)?;
    m.add_function(wrap_pyfunction!(satisfiable, m)?)?;
    m.add_function(wrap_pyfunction!(con_n, m)?)?;
    m.add_function(wrap_pyfunction!(run_machine, m)?)?;
    m.add_function(wrap_pyfunction!(mstar_exact, m)?)?;
    m.add_function(wrap_pyfunction!(mstar_mc, m)?)?;
    m.add_function(wrap_pyfunction!(pstar, m)?)?;
    m.add_function(wrap_pyfunction!(sequence, m)?)?;
    m.add_function(wrap_pyfunction!(list_sequences, m)?)?;
    Ok(())
}

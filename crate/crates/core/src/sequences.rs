//! Quickly computable sentence sequences.
//!
//! Every family exists in closed form. The ones whose indices are linear or
//! pairing-of-linear in `n` also have a machine-backed twin: an emitter
//! program that reads `n` from its data bits and prints the index.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::logic::{enumerate, parse_sentence, render_sentence, Sentence};
use crate::machine::{build_emitter, decode_program, encode_argument, run_bounded, BitSource, Emitter, EmitterError};
use crate::prover::TruthTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("unknown sequence `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Emitter(#[from] EmitterError),
    #[error("emitter for `{id}` exceeded {bound} steps at n = {n}")]
    StepBoundExceeded { id: String, n: u64, bound: u64 },
    #[error("emitter for `{id}` produced no sentence at n = {n}")]
    NoOutput { id: String, n: u64 },
    #[error("{atoms} atoms at n = {n} exceed the partition check cap of {cap}")]
    TooManyAtoms { n: u64, atoms: usize, cap: usize },
}

/// Closed-form families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    Constant(Sentence),
    /// `a_n`
    AtomChain,
    /// `a_n | !a_n`
    TautologyChain,
    /// `a_n & !a_0 & ... & !a_{n-1}`, right-nested
    MutexFamily,
    /// `a_0 | a_1 | ... | a_n`, left-nested
    MonotoneChain,
    /// `!!a_n`
    DoubleNegation,
    /// Member `i` of `{a_n, !a_n & a_{n+1}, !a_n & !a_{n+1}}`.
    CanonicalPartition(u8),
    /// Exactly-one-of the canonical partition members, which is a tautology.
    PartitionComposite,
    /// Member `i` of the four-way split `a_n`, `!a_n & a_{n+1}`,
    /// `!a_n & !a_{n+1} & a_{n+2}`, `!a_n & !a_{n+1} & !a_{n+2}`.
    FourWay(u8),
    Not(Box<Generator>),
    Or(Box<Generator>, Box<Generator>),
}

impl Generator {
    pub fn at(&self, n: u64) -> Sentence {
        let a = Sentence::atom;
        let not = Sentence::not;
        match self {
            Generator::Constant(s) => s.clone(),
            Generator::AtomChain => a(n),
            Generator::TautologyChain => Sentence::or(a(n), not(a(n))),
            Generator::MutexFamily => {
                let mut tail: Option<Sentence> = None;
                for i in (0..n).rev() {
                    tail = Some(match tail {
                        None => not(a(i)),
                        Some(t) => Sentence::and(not(a(i)), t),
                    });
                }
                match tail {
                    None => a(n),
                    Some(t) => Sentence::and(a(n), t),
                }
            }
            Generator::MonotoneChain => (1..=n).fold(a(0), |acc, i| Sentence::or(acc, a(i))),
            Generator::DoubleNegation => not(not(a(n))),
            Generator::CanonicalPartition(i) => match i {
                0 => a(n),
                1 => Sentence::and(not(a(n)), a(n + 1)),
                _ => Sentence::and(not(a(n)), not(a(n + 1))),
            },
            Generator::PartitionComposite => {
                let m: Vec<Sentence> = (0..3).map(|i| Generator::CanonicalPartition(i).at(n)).collect();
                let only = |k: usize| {
                    let lit = |j: usize| if j == k { m[j].clone() } else { not(m[j].clone()) };
                    Sentence::and(lit(0), Sentence::and(lit(1), lit(2)))
                };
                Sentence::or(only(0), Sentence::or(only(1), only(2)))
            }
            Generator::FourWay(i) => match i {
                0 => a(n),
                1 => Sentence::and(not(a(n)), a(n + 1)),
                2 => Sentence::and(not(a(n)), Sentence::and(not(a(n + 1)), a(n + 2))),
                _ => Sentence::and(not(a(n)), Sentence::and(not(a(n + 1)), not(a(n + 2)))),
            },
            Generator::Not(g) => not(g.at(n)),
            Generator::Or(g, h) => Sentence::or(g.at(n), h.at(n)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceKind {
    Builtin(Generator),
    MachineBacked(Emitter),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceDef {
    pub id: String,
    pub kind: SequenceKind,
    pub description: String,
}

const NAMED: &[(&str, &str)] = &[
    ("atom_chain", "a_n"),
    ("tautology_chain", "a_n | !a_n, a theorem for every n"),
    ("mutex_family", "a_n & !a_0 & ... & !a_{n-1}, pairwise exclusive"),
    ("monotone_chain", "a_0 | ... | a_n, each implies the next"),
    ("equiv_pair.left", "a_n"),
    ("equiv_pair.right", "!!a_n, equivalent to a_n"),
    ("canonical_partition.0", "a_n"),
    ("canonical_partition.1", "!a_n & a_{n+1}"),
    ("canonical_partition.2", "!a_n & !a_{n+1}"),
    ("partition_composite", "exactly one canonical partition member holds (a theorem)"),
    ("partition4.0", "a_n"),
    ("partition4.1", "!a_n & a_{n+1}"),
    ("partition4.2", "!a_n & !a_{n+1} & a_{n+2}"),
    ("partition4.3", "!a_n & !a_{n+1} & !a_{n+2}"),
    ("partition4.merged", "partition4.2 | partition4.3"),
];

fn named_generator(id: &str) -> Option<Generator> {
    Some(match id {
        "atom_chain" | "equiv_pair.left" | "canonical_partition.0" | "partition4.0" => Generator::AtomChain,
        "tautology_chain" => Generator::TautologyChain,
        "mutex_family" => Generator::MutexFamily,
        "monotone_chain" => Generator::MonotoneChain,
        "equiv_pair.right" => Generator::DoubleNegation,
        "canonical_partition.1" => Generator::CanonicalPartition(1),
        "canonical_partition.2" => Generator::CanonicalPartition(2),
        "partition_composite" => Generator::PartitionComposite,
        "partition4.1" => Generator::FourWay(1),
        "partition4.2" => Generator::FourWay(2),
        "partition4.3" => Generator::FourWay(3),
        "partition4.merged" => Generator::Or(Box::new(Generator::FourWay(2)), Box::new(Generator::FourWay(3))),
        _ => return None,
    })
}

impl SequenceDef {
    pub fn builtin(id: impl Into<String>, generator: Generator, description: impl Into<String>) -> Self {
        SequenceDef { id: id.into(), kind: SequenceKind::Builtin(generator), description: description.into() }
    }

    pub fn constant(s: Sentence) -> Self {
        let text = render_sentence(&s);
        SequenceDef::builtin(format!("constant:{text}"), Generator::Constant(s), format!("always {text}"))
    }

    /// Resolves an id: a catalog name, `constant:<formula>`, `not:<id>`, or
    /// `machine:<emitter id>` for a machine-backed twin.
    pub fn lookup(id: &str) -> Result<Self, SequenceError> {
        if let Some(rest) = id.strip_prefix("machine:") {
            let emitter = build_emitter(rest)?;
            return Ok(SequenceDef {
                id: id.to_string(),
                kind: SequenceKind::MachineBacked(emitter),
                description: format!("emitter program for {rest}"),
            });
        }
        if let Some(rest) = id.strip_prefix("not:") {
            let inner = SequenceDef::lookup(rest)?;
            let SequenceKind::Builtin(g) = inner.kind else {
                return Err(SequenceError::Unknown(id.to_string()));
            };
            return Ok(SequenceDef::builtin(id, Generator::Not(Box::new(g)), format!("negation of {rest}")));
        }
        if let Some(text) = id.strip_prefix("constant:") {
            let s = parse_sentence(text).map_err(|_| SequenceError::Unknown(id.to_string()))?;
            return Ok(SequenceDef { id: id.to_string(), ..SequenceDef::constant(s) });
        }
        let generator = named_generator(id).ok_or_else(|| SequenceError::Unknown(id.to_string()))?;
        let description = NAMED.iter().find(|(n, _)| *n == id).map(|(_, d)| *d).unwrap_or_default();
        Ok(SequenceDef::builtin(id, generator, description))
    }

    pub fn is_machine_backed(&self) -> bool {
        matches!(self.kind, SequenceKind::MachineBacked(_))
    }
}

/// The `n`-th sentence of the sequence.
pub fn generate(seq: &SequenceDef, n: u64) -> Result<Sentence, SequenceError> {
    match &seq.kind {
        SequenceKind::Builtin(g) => Ok(g.at(n)),
        SequenceKind::MachineBacked(e) => {
            let (s, _) = run_emitter(&seq.id, e, n)?;
            Ok(s)
        }
    }
}

/// Runs a machine-backed sequence, also reporting the steps used.
pub fn generate_traced(seq: &SequenceDef, n: u64) -> Result<(Sentence, u64), SequenceError> {
    match &seq.kind {
        SequenceKind::Builtin(g) => Ok((g.at(n), 0)),
        SequenceKind::MachineBacked(e) => run_emitter(&seq.id, e, n),
    }
}

fn run_emitter(id: &str, e: &Emitter, n: u64) -> Result<(Sentence, u64), SequenceError> {
    let mut bits = e.bits.clone();
    bits.extend(encode_argument(n));
    let mut src = BitSource::finite(bits);
    let program = decode_program(&mut src).map_err(|err| EmitterError::Assembly(err.to_string()))?;
    let bound = e.step_bound(n);
    let trace = run_bounded(&program, &mut src, bound);
    if !trace.halted {
        return Err(SequenceError::StepBoundExceeded { id: id.to_string(), n, bound });
    }
    let first = trace.emitted.first().ok_or_else(|| SequenceError::NoOutput { id: id.to_string(), n })?;
    Ok((enumerate(first), trace.steps_used))
}

/// The families shipped by default.
pub fn builtin_catalog() -> Vec<SequenceDef> {
    let mut out = vec![
        SequenceDef::constant(Sentence::Bottom),
        SequenceDef::constant(Sentence::not(Sentence::Bottom)),
        SequenceDef::constant(Sentence::atom(0)),
        SequenceDef::constant(Sentence::not(Sentence::atom(0))),
    ];
    for (id, _) in NAMED {
        out.push(SequenceDef::lookup(id).expect("catalog ids resolve"));
    }
    out
}

/// Machine-backed twins of catalog families, paired with the closed form.
pub fn machine_twins() -> Vec<(SequenceDef, SequenceDef)> {
    let ids = [
        "atom_chain",
        "tautology_chain",
        "equiv_pair.left",
        "equiv_pair.right",
        "canonical_partition.0",
        "canonical_partition.1",
        "canonical_partition.2",
    ];
    let mut out: Vec<(SequenceDef, SequenceDef)> = ids
        .iter()
        .map(|id| (SequenceDef::lookup(id).expect("builtin"), SequenceDef::lookup(&format!("machine:{id}")).expect("emitter")))
        .collect();
    out.push((
        SequenceDef::lookup("not:tautology_chain").expect("builtin"),
        SequenceDef::lookup("machine:tautology_chain.negated").expect("emitter"),
    ));
    out.push((
        SequenceDef::lookup("not:atom_chain").expect("builtin"),
        SequenceDef::lookup("machine:negated_atom_chain").expect("emitter"),
    ));
    out.push((
        SequenceDef::lookup("constant:_|_").expect("builtin"),
        SequenceDef::lookup("machine:constant:_|_").expect("emitter"),
    ));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTriple {
    pub phi: SequenceDef,
    pub psi: SequenceDef,
    pub chi: SequenceDef,
}

impl PartitionTriple {
    pub fn canonical() -> Self {
        let get = |id: &str| SequenceDef::lookup(id).expect("catalog id");
        PartitionTriple {
            phi: get("canonical_partition.0"),
            psi: get("canonical_partition.1"),
            chi: get("canonical_partition.2"),
        }
    }
}

pub const PARTITION_ATOM_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub checked: u64,
    /// First `n` at which some assignment makes zero or several members true.
    pub first_failure: Option<u64>,
}

impl PartitionReport {
    pub fn valid(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks with truth tables that exactly one member is true under every
/// assignment, for each `n <= n_max`.
pub fn validate_partition(t: &PartitionTriple, n_max: u64) -> Result<PartitionReport, SequenceError> {
    for n in 0..=n_max {
        let members = [generate(&t.phi, n)?, generate(&t.psi, n)?, generate(&t.chi, n)?];
        let mut atoms: Vec<BigUint> = Vec::new();
        for m in &members {
            m.for_each_atom(&mut |k| {
                if !atoms.contains(k) {
                    atoms.push(k.clone());
                }
            });
        }
        if atoms.len() > PARTITION_ATOM_CAP {
            return Err(SequenceError::TooManyAtoms { n, atoms: atoms.len(), cap: PARTITION_ATOM_CAP });
        }
        let table = TruthTable::new(atoms).expect("within cap");
        let cols: Vec<Vec<u64>> = members.iter().map(|m| table.models(m).expect("covered")).collect();
        let rows = table.rows();
        let exactly_one = (0..rows).all(|r| {
            let bit = |c: &Vec<u64>| (c[r / 64] >> (r % 64)) & 1;
            cols.iter().map(bit).sum::<u64>() == 1
        });
        if !exactly_one {
            return Ok(PartitionReport { checked: n + 1, first_failure: Some(n) });
        }
    }
    Ok(PartitionReport { checked: n_max + 1, first_failure: None })
}

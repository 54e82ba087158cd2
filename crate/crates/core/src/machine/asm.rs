//! A small label-resolving assembler and the canonical emitter programs.

use std::collections::HashMap;

use num_bigint::BigUint;
use thiserror::Error;

use super::{gamma_encode, Instruction, Program};
use crate::logic::{parse_sentence, sentence_index, SentenceIndex};

/// `|assemble_emit_one(k)| <= EMIT_ONE_OVERHEAD + 2 * bitlen(k)`.
pub const EMIT_ONE_OVERHEAD: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitterError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("bad constant sentence: {0}")]
    BadConstant(String),
    #[error("assembly failed: {0}")]
    Assembly(String),
}

enum Item {
    Plain(Instruction),
    Jump(u8, String),
}

/// Builds programs with symbolic jump targets.
#[derive(Default)]
pub struct Assembler {
    items: Vec<Item>,
    labels: HashMap<String, usize>,
}

impl Assembler {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn label(&mut self, name: &str) -> &mut Self {
        let prev = self.labels.insert(name.to_string(), self.items.len());
        assert!(prev.is_none(), "label {name} defined twice");
        self
    }

    pub fn op(&mut self, ins: Instruction) -> &mut Self {
        self.items.push(Item::Plain(ins));
        self
    }

    pub fn inc(&mut self, r: u8, times: u64) -> &mut Self {
        for _ in 0..times {
            self.op(Instruction::Inc(r));
        }
        self
    }

    pub fn dec(&mut self, r: u8) -> &mut Self {
        self.op(Instruction::Dec(r))
    }

    pub fn jz(&mut self, r: u8, label: &str) -> &mut Self {
        self.items.push(Item::Jump(r, label.to_string()));
        self
    }

    pub fn finish(&self, r0: BigUint) -> Result<Program, EmitterError> {
        let mut out = Vec::with_capacity(self.items.len());
        for (at, item) in self.items.iter().enumerate() {
            out.push(match item {
                Item::Plain(ins) => *ins,
                Item::Jump(r, label) => {
                    let target =
                        *self.labels.get(label).ok_or_else(|| EmitterError::Assembly(format!("undefined label {label}")))?;
                    let off = i8::try_from(target as i64 - at as i64)
                        .map_err(|_| EmitterError::Assembly(format!("jump to {label} out of range")))?;
                    Instruction::Jz(*r, off)
                }
            });
        }
        if out.is_empty() {
            return Err(EmitterError::Assembly("empty program".into()));
        }
        Ok(Program::new(out, r0))
    }
}

/// The shortest program in our encoding that emits exactly `k` and halts:
/// a single `OUT r0` with `r0` preset to `k`.
pub fn assemble_emit_one(k: &SentenceIndex) -> Vec<bool> {
    Program::new(vec![Instruction::Out(0)], k.0.clone()).encode()
}

/// Self-delimiting encoding of the stage argument `n` fed to emitters.
pub fn encode_argument(n: u64) -> Vec<bool> {
    gamma_encode(&BigUint::from(n + 1))
}

/// `value = alpha * n + beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Linear(u64, u64);

#[derive(Debug, Clone, PartialEq, Eq)]
enum Template {
    Constant(SentenceIndex),
    /// Index `a*n + b`, then `nots` negations.
    Linear {
        value: Linear,
        nots: u32,
    },
    /// Binary connective over two linear indices, then `nots` negations.
    Pair {
        tag: u64,
        left: Linear,
        right: Linear,
        nots: u32,
    },
}

const TAG_AND: u64 = 2;
const TAG_OR: u64 = 3;

/// Generator ids with a machine-backed emitter, besides `constant:<formula>`.
pub fn emitter_ids() -> Vec<&'static str> {
    TABLE.iter().map(|(id, _)| *id).collect()
}

// a_n = 5n+1, !a_n = 25n+7, a_{n+1} = 5n+6, !a_{n+1} = 25n+32
const TABLE: &[(&str, Template)] = &[
    ("atom_chain", Template::Linear { value: Linear(5, 1), nots: 0 }),
    ("negated_atom_chain", Template::Linear { value: Linear(5, 1), nots: 1 }),
    ("equiv_pair.left", Template::Linear { value: Linear(5, 1), nots: 0 }),
    ("equiv_pair.right", Template::Linear { value: Linear(5, 1), nots: 2 }),
    ("tautology_chain", Template::Pair { tag: TAG_OR, left: Linear(5, 1), right: Linear(25, 7), nots: 0 }),
    ("tautology_chain.negated", Template::Pair { tag: TAG_OR, left: Linear(5, 1), right: Linear(25, 7), nots: 1 }),
    ("canonical_partition.0", Template::Linear { value: Linear(5, 1), nots: 0 }),
    ("canonical_partition.1", Template::Pair { tag: TAG_AND, left: Linear(25, 7), right: Linear(5, 6), nots: 0 }),
    ("canonical_partition.2", Template::Pair { tag: TAG_AND, left: Linear(25, 7), right: Linear(25, 32), nots: 0 }),
];

fn template(id: &str) -> Result<Template, EmitterError> {
    if let Some(text) = id.strip_prefix("constant:") {
        let s = parse_sentence(text).map_err(|e| EmitterError::BadConstant(e.to_string()))?;
        return Ok(Template::Constant(sentence_index(&s)));
    }
    TABLE
        .iter()
        .find(|(name, _)| *name == id)
        .map(|(_, t)| t.clone())
        .ok_or_else(|| EmitterError::UnknownGenerator(id.to_string()))
}

/// An emitter program together with the step bound it is guaranteed to meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Emitter {
    pub bits: Vec<bool>,
    pub coeff: u64,
    pub degree: u32,
}

impl Emitter {
    /// Allowed steps at argument `n`: `coeff * (n + 1)^degree`.
    pub fn step_bound(&self, n: u64) -> u64 {
        self.coeff.saturating_mul((n + 1).saturating_pow(self.degree))
    }
}

/// Program prefix `w` such that `w ++ encode_argument(n)` emits the index of
/// the generator's `n`-th sentence.
pub fn assemble_sequence_emitter(gen: &str) -> Result<Vec<bool>, EmitterError> {
    Ok(build_emitter(gen)?.bits)
}

pub fn build_emitter(gen: &str) -> Result<Emitter, EmitterError> {
    match template(gen)? {
        Template::Constant(k) => Ok(Emitter { bits: assemble_emit_one(&k), coeff: 1, degree: 0 }),
        Template::Linear { value, nots } => {
            let (m, add) = wrap_constants(0, nots);
            let mut a = Assembler::new();
            read_argument(&mut a);
            // r2 = alpha * n + beta
            a.label("lin").jz(1, "lin_end").dec(1).inc(2, value.0).jz(3, "lin").label("lin_end").inc(2, value.1);
            // r0 = m * r2 + add
            a.label("mul").jz(2, "mul_end").dec(2).inc(0, m).jz(1, "mul").label("mul_end").inc(0, add);
            a.op(Instruction::Out(0));
            let c = value.0 + value.1;
            Ok(Emitter { bits: a.finish(BigUint::default())?.encode(), coeff: 64 * c * m, degree: 1 })
        }
        Template::Pair { tag, left, right, nots } => {
            // index = m * pair(x, y) + add
            let (m, add) = wrap_constants(tag + 1, nots);
            let m = m * 5;
            let mut a = Assembler::new();
            read_argument(&mut a);
            // r2 = x + y, r3 = y
            a.label("p1")
                .jz(1, "p1_end")
                .dec(1)
                .inc(2, left.0 + right.0)
                .inc(3, right.0)
                .jz(0, "p1")
                .label("p1_end")
                .inc(2, left.1 + right.1)
                .inc(3, right.1);
            // r0 = m * y
            a.label("p2").jz(3, "p2_end").dec(3).inc(0, m).jz(1, "p2").label("p2_end");
            // r0 += m * (s + (s-1) + ... + 1), shuttling the counter between r2 and r1
            a.label("ta")
                .jz(2, "t_done")
                .label("ta_loop")
                .jz(2, "ta_end")
                .dec(2)
                .inc(1, 1)
                .inc(0, m)
                .jz(3, "ta_loop")
                .label("ta_end")
                .dec(1)
                .jz(1, "t_done")
                .label("tb_loop")
                .jz(1, "tb_end")
                .dec(1)
                .inc(2, 1)
                .inc(0, m)
                .jz(3, "tb_loop")
                .label("tb_end")
                .dec(2)
                .jz(3, "ta")
                .label("t_done")
                .inc(0, add)
                .op(Instruction::Out(0));
            let c = left.0 + left.1 + right.0 + right.1;
            Ok(Emitter { bits: a.finish(BigUint::default())?.encode(), coeff: 8 * c * c * m, degree: 2 })
        }
    }
}

/// Multiplier and offset of `nots` negations applied to `5 * v + base`
/// (`base = 0` means no outer connective: the result is `m * v + add`).
fn wrap_constants(base: u64, nots: u32) -> (u64, u64) {
    let mut add = base;
    for _ in 0..nots {
        add = 5 * add + 2;
    }
    (5u64.pow(nots), add)
}

/// Decodes `gamma(n + 1)` from the data bits into r1; r0, r2, r3 stay 0.
fn read_argument(a: &mut Assembler) {
    a.label("count")
        .op(Instruction::LoadBit(1))
        .jz(1, "zero")
        .jz(3, "body")
        .label("zero")
        .inc(2, 1)
        .jz(3, "count")
        .label("body")
        .jz(2, "done")
        .dec(2)
        .op(Instruction::LoadBit(1))
        .jz(3, "body")
        .label("done")
        .dec(1);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{enumerate, Sentence};
    use crate::machine::{decode_program, run_bounded, BitSource};

    fn run_emitter(e: &Emitter, n: u64) -> (Vec<SentenceIndex>, u64) {
        let mut bits = e.bits.clone();
        bits.extend(encode_argument(n));
        let mut src = BitSource::finite(bits);
        let p = decode_program(&mut src).unwrap();
        let trace = run_bounded(&p, &mut src, u64::MAX);
        assert!(trace.halted);
        (trace.emitted, trace.steps_used)
    }

    #[test]
    fn emit_one_examples() {
        for k in [0u64, 1, 2, 77, 65535] {
            let w = assemble_emit_one(&SentenceIndex::new(k));
            let bitlen = 64 - u64::from(k.leading_zeros());
            assert!(w.len() as u64 <= EMIT_ONE_OVERHEAD + 2 * bitlen);
            let mut src = BitSource::finite(w);
            let p = decode_program(&mut src).unwrap();
            let t = run_bounded(&p, &mut src, 10);
            assert_eq!(t.emitted, vec![SentenceIndex::new(k)]);
            assert!(t.halted);
        }
        assert_eq!(assemble_emit_one(&SentenceIndex::new(0)).len(), 8);
    }

    #[test]
    fn constant_bottom_ignores_argument() {
        let e = build_emitter("constant:_|_").unwrap();
        for n in 0..5 {
            assert_eq!(run_emitter(&e, n).0, vec![SentenceIndex::new(0)]);
        }
    }

    #[test]
    fn tautology_chain_at_three() {
        let e = build_emitter("tautology_chain").unwrap();
        let (out, _) = run_emitter(&e, 3);
        let a3 = Sentence::atom(3);
        assert_eq!(out, vec![sentence_index(&Sentence::or(a3.clone(), Sentence::not(a3)))]);
    }

    #[test]
    fn linear_emitters() {
        let e = build_emitter("equiv_pair.right").unwrap();
        for n in 0..6 {
            let (out, _) = run_emitter(&e, n);
            assert_eq!(enumerate(&out[0]), Sentence::not(Sentence::not(Sentence::atom(n))));
        }
    }

    #[test]
    fn unknown_ids() {
        assert_eq!(build_emitter("nope"), Err(EmitterError::UnknownGenerator("nope".into())));
        assert!(matches!(build_emitter("constant:a0 &"), Err(EmitterError::BadConstant(_))));
    }
}

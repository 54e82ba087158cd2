//! A four-register counter machine with a prefix-free program encoding.
//!
//! # Encoding
//!
//! Bits are read most significant first.
//!
//! ```text
//! program  := gamma(N) instr{N} gamma(r0 + 1)
//! instr    := opcode:4 reg:2 [offset:8 if JZ]
//! gamma(m) := (bitlen(m) - 1) zeros, then m in binary        (m >= 1)
//! ```
//!
//! The instruction is `opcode mod 8`:
//!
//! | code | instruction | effect                                   |
//! |------|-------------|------------------------------------------|
//! | 0    | `INC r`     | `r += 1`                                 |
//! | 1    | `DEC r`     | `r -= 1`, saturating at 0                |
//! | 2    | `JZ r off`  | if `r == 0` jump to `pc + off`           |
//! | 3    | `OUT r`     | emit `r` as a sentence index             |
//! | 4    | `HALT`      | stop                                     |
//! | 5    | `LOADBIT r` | `r = 2r + next data bit`                 |
//! | 6    | `SHL r`     | `r = 2r`                                 |
//! | 7    | `NOP`       |                                          |
//!
//! The register field is present on every instruction and ignored by `HALT`
//! and `NOP`. `off` is an 8-bit two's-complement displacement relative to the
//! jump itself; the target must lie in `0..=N` (jumping to `N` halts) or the
//! program is rejected at decode time. Registers `r1..r3` start at zero and
//! `r0` at the value in the trailing gamma code.
//!
//! Everything after the program is data, consumed only by `LOADBIT`. Running
//! out of data stops the machine without discarding what it already emitted.

mod asm;
mod bits;
mod reg;

pub use asm::{
    assemble_emit_one, assemble_sequence_emitter, build_emitter, emitter_ids, encode_argument, Assembler, Emitter, EmitterError,
    EMIT_ONE_OVERHEAD,
};
pub use bits::{format_bits, gamma_decode, gamma_encode, parse_bits, BitSource};

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::logic::SentenceIndex;
use reg::Reg;

pub const REGISTERS: usize = 4;

/// Gamma codes longer than this are rejected instead of read to the end.
pub const MAX_GAMMA_ZEROS: u32 = 4096;

/// Programs are limited to fewer than `2^(MAX_COUNT_ZEROS + 1)` instructions.
pub const MAX_COUNT_ZEROS: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Instruction {
    Inc(u8),
    Dec(u8),
    Jz(u8, i8),
    Out(u8),
    Halt,
    LoadBit(u8),
    Shl(u8),
    Nop,
}

impl Instruction {
    fn opcode(&self) -> u8 {
        match self {
            Instruction::Inc(_) => 0,
            Instruction::Dec(_) => 1,
            Instruction::Jz(..) => 2,
            Instruction::Out(_) => 3,
            Instruction::Halt => 4,
            Instruction::LoadBit(_) => 5,
            Instruction::Shl(_) => 6,
            Instruction::Nop => 7,
        }
    }

    fn register(&self) -> u8 {
        match *self {
            Instruction::Inc(r)
            | Instruction::Dec(r)
            | Instruction::Jz(r, _)
            | Instruction::Out(r)
            | Instruction::LoadBit(r)
            | Instruction::Shl(r) => r,
            Instruction::Halt | Instruction::Nop => 0,
        }
    }

    pub fn encoded_len(&self) -> usize {
        match self {
            Instruction::Jz(..) => 14,
            _ => 6,
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Inc(r) => write!(f, "INC r{r}"),
            Instruction::Dec(r) => write!(f, "DEC r{r}"),
            Instruction::Jz(r, off) => write!(f, "JZ r{r} {off:+}"),
            Instruction::Out(r) => write!(f, "OUT r{r}"),
            Instruction::Halt => write!(f, "HALT"),
            Instruction::LoadBit(r) => write!(f, "LOADBIT r{r}"),
            Instruction::Shl(r) => write!(f, "SHL r{r}"),
            Instruction::Nop => write!(f, "NOP"),
        }
    }
}

/// A decoded program: instruction list plus initial register contents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    pub instructions: Vec<Instruction>,
    pub registers: [BigUint; REGISTERS],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("bit source exhausted after {read} bits")]
    Incomplete { read: u64 },
    #[error("instruction {at} jumps to {target}, outside 0..={len}")]
    JumpOutOfRange { at: usize, target: i64, len: usize },
    #[error("gamma code exceeds its length cap")]
    CodeTooLong,
}

impl Program {
    /// Program with `r0` preset to `r0` and the other registers zero.
    ///
    /// Panics if a jump leaves the instruction list, since such a program has
    /// no encoding.
    pub fn new(instructions: Vec<Instruction>, r0: BigUint) -> Self {
        assert!(!instructions.is_empty(), "a program has at least one instruction");
        let len = instructions.len();
        for (at, ins) in instructions.iter().enumerate() {
            if let Instruction::Jz(_, off) = ins {
                let target = at as i64 + i64::from(*off);
                assert!((0..=len as i64).contains(&target), "jump at {at} leaves the program");
            }
            assert!(ins.register() < REGISTERS as u8, "register out of range");
        }
        let zero = BigUint::default();
        Program { instructions, registers: [r0, zero.clone(), zero.clone(), zero] }
    }

    /// The canonical bit encoding (opcodes with a clear high bit).
    pub fn encode(&self) -> Vec<bool> {
        let mut out = gamma_encode(&BigUint::from(self.instructions.len()));
        for ins in &self.instructions {
            push_bits(&mut out, u64::from(ins.opcode()), 4);
            push_bits(&mut out, u64::from(ins.register()), 2);
            if let Instruction::Jz(_, off) = ins {
                push_bits(&mut out, u64::from(*off as u8), 8);
            }
        }
        out.extend(gamma_encode(&(&self.registers[0] + 1u32)));
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "; r0 = {}", self.registers[0])?;
        for (i, ins) in self.instructions.iter().enumerate() {
            writeln!(f, "{i:4}  {ins}")?;
        }
        Ok(())
    }
}

fn push_bits(out: &mut Vec<bool>, value: u64, width: u32) {
    for i in (0..width).rev() {
        out.push((value >> i) & 1 == 1);
    }
}

fn read_bits(src: &mut BitSource, width: u32, start: u64) -> Result<u64, DecodeError> {
    let mut v = 0;
    for _ in 0..width {
        let b = src.next_bit().ok_or(DecodeError::Incomplete { read: src.cursor() - start })?;
        v = (v << 1) | u64::from(b);
    }
    Ok(v)
}

/// Reads one program from the front of `src`, leaving the cursor on the
/// first data bit.
pub fn decode_program(src: &mut BitSource) -> Result<Program, DecodeError> {
    let start = src.cursor();
    let count = gamma_decode(src, MAX_COUNT_ZEROS).map_err(|e| relabel(e, src, start))?;
    let count = count as usize;
    let mut instructions = Vec::with_capacity(count.min(1024));
    for at in 0..count {
        let opcode = read_bits(src, 4, start)? & 7;
        let r = read_bits(src, 2, start)? as u8;
        let ins = match opcode {
            0 => Instruction::Inc(r),
            1 => Instruction::Dec(r),
            2 => {
                let off = read_bits(src, 8, start)? as u8 as i8;
                let target = at as i64 + i64::from(off);
                if !(0..=count as i64).contains(&target) {
                    return Err(DecodeError::JumpOutOfRange { at, target, len: count });
                }
                Instruction::Jz(r, off)
            }
            3 => Instruction::Out(r),
            4 => Instruction::Halt,
            5 => Instruction::LoadBit(r),
            6 => Instruction::Shl(r),
            _ => Instruction::Nop,
        };
        instructions.push(ins);
    }
    let r0 = gamma_decode_big(src).map_err(|e| relabel(e, src, start))? - 1u32;
    Ok(Program::new(instructions, r0))
}

fn relabel(e: DecodeError, src: &BitSource, start: u64) -> DecodeError {
    match e {
        DecodeError::Incomplete { .. } => DecodeError::Incomplete { read: src.cursor() - start },
        other => other,
    }
}

fn gamma_decode_big(src: &mut BitSource) -> Result<BigUint, DecodeError> {
    let mut zeros = 0u32;
    loop {
        match src.next_bit() {
            None => return Err(DecodeError::Incomplete { read: 0 }),
            Some(true) => break,
            Some(false) => {
                zeros += 1;
                if zeros > MAX_GAMMA_ZEROS {
                    return Err(DecodeError::CodeTooLong);
                }
            }
        }
    }
    let mut v = BigUint::from(1u32);
    for _ in 0..zeros {
        let b = src.next_bit().ok_or(DecodeError::Incomplete { read: 0 })?;
        v <<= 1u32;
        if b {
            v += 1u32;
        }
    }
    Ok(v)
}

/// Result of a bounded run.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct OutputTrace {
    pub emitted: Vec<SentenceIndex>,
    pub steps_used: u64,
    /// Stopped by `HALT` or by running off the end of the program.
    pub halted: bool,
    /// Data bits consumed; program bits are not counted.
    pub bits_read: u64,
    /// Stopped because `LOADBIT` found no data left.
    pub starved: bool,
}

#[derive(Clone, PartialEq, Eq)]
struct Snapshot {
    regs: [Reg; REGISTERS],
    bits_read: u64,
    emitted: usize,
}

/// Runs `p` for at most `t` steps, reading data from `data`.
///
/// A taken backward jump that revisits the exact register state of its
/// previous visit without reading data or emitting in between can never make
/// progress, so the run is charged the remaining budget and stopped early.
pub fn run_bounded(p: &Program, data: &mut BitSource, t: u64) -> OutputTrace {
    let mut regs: [Reg; REGISTERS] = std::array::from_fn(|i| Reg::from_big(&p.registers[i]));
    let mut trace = OutputTrace::default();
    let mut seen: Vec<Option<Snapshot>> = vec![None; p.instructions.len()];
    let len = p.instructions.len();
    let mut pc = 0usize;
    while trace.steps_used < t {
        if pc == len {
            trace.halted = true;
            return trace;
        }
        let ins = p.instructions[pc];
        match ins {
            Instruction::Inc(r) => regs[r as usize].inc(),
            Instruction::Dec(r) => regs[r as usize].dec(),
            Instruction::Jz(r, off) => {
                if regs[r as usize].is_zero() {
                    let target = (pc as i64 + i64::from(off)) as usize;
                    if target <= pc {
                        let snap = Snapshot { regs: regs.clone(), bits_read: trace.bits_read, emitted: trace.emitted.len() };
                        if seen[pc].as_ref() == Some(&snap) {
                            trace.steps_used = t;
                            return trace;
                        }
                        seen[pc] = Some(snap);
                    }
                    trace.steps_used += 1;
                    pc = target;
                    continue;
                }
            }
            Instruction::Out(r) => trace.emitted.push(SentenceIndex(regs[r as usize].to_big())),
            Instruction::Halt => {
                trace.steps_used += 1;
                trace.halted = true;
                return trace;
            }
            Instruction::LoadBit(r) => match data.next_bit() {
                Some(b) => {
                    regs[r as usize].load_bit(b);
                    trace.bits_read += 1;
                }
                None => {
                    trace.starved = true;
                    return trace;
                }
            },
            Instruction::Shl(r) => regs[r as usize].shl(),
            Instruction::Nop => {}
        }
        trace.steps_used += 1;
        pc += 1;
    }
    if pc == len {
        trace.halted = true;
    }
    trace
}

/// Decodes a program from the front of `bits` and runs it on the rest.
/// An incomplete or invalid program emits nothing.
pub fn run_bits(src: &mut BitSource, t: u64) -> OutputTrace {
    match decode_program(src) {
        Ok(p) => run_bounded(&p, src, t),
        Err(_) => OutputTrace::default(),
    }
}

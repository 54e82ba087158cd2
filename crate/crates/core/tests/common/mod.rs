#![allow(dead_code)]

use mstar_core::logic::Sentence;
use proptest::prelude::*;

/// Sentences over atoms `0..atoms` of depth at most `depth`.
pub fn arb_sentence(atoms: u64, depth: u32) -> impl Strategy<Value = Sentence> {
    let leaf = prop_oneof![
        1 => Just(Sentence::Bottom),
        6 => (0..atoms).prop_map(Sentence::atom),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Sentence::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Sentence::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Sentence::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Sentence::implies(a, b)),
        ]
    })
}

/// Every sentence over atoms `0..atoms` with depth at most `depth`.
pub fn all_sentences(atoms: u64, depth: u32) -> Vec<Sentence> {
    let mut level: Vec<Sentence> = std::iter::once(Sentence::Bottom).chain((0..atoms).map(Sentence::atom)).collect();
    for _ in 0..depth {
        let mut next = level.clone();
        for a in &level {
            next.push(Sentence::not(a.clone()));
            for b in &level {
                next.push(Sentence::and(a.clone(), b.clone()));
                next.push(Sentence::or(a.clone(), b.clone()));
                next.push(Sentence::implies(a.clone(), b.clone()));
            }
        }
        next.sort();
        next.dedup();
        level = next;
    }
    level
}

/// Brute-force satisfiability over every assignment of atoms `0..atoms`.
pub fn brute_sat(set: &[Sentence], atoms: u64) -> bool {
    (0u64..1 << atoms).any(|row| {
        set.iter().all(|s| {
            s.eval(&|k| {
                let k: u64 = k.try_into().expect("small atom");
                row >> k & 1 == 1
            })
        })
    })
}

/// Outcome of the reference machine: program length in bits, emitted
/// values, and whether it halted or ran out of data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefRun {
    pub program_bits: usize,
    pub emitted: Vec<num_bigint::BigUint>,
    pub halted: bool,
    pub starved: bool,
}

/// A direct transcription of the machine's encoding table and semantics,
/// without loop detection. `None` when no complete valid program is present.
pub fn reference_run(bits: &[bool], t: u64) -> Option<RefRun> {
    use num_bigint::BigUint;
    let mut pos = 0;
    let mut next = |pos: &mut usize| -> Option<bool> {
        let b = bits.get(*pos).copied();
        *pos += 1;
        b
    };
    let gamma = |pos: &mut usize, max_zeros: u32, next: &mut dyn FnMut(&mut usize) -> Option<bool>| -> Option<BigUint> {
        let mut zeros = 0;
        while !next(pos)? {
            zeros += 1;
            if zeros > max_zeros {
                return None;
            }
        }
        let mut v = BigUint::from(1u32);
        for _ in 0..zeros {
            v = v * 2u32 + u32::from(next(pos)?);
        }
        Some(v)
    };
    let field = |pos: &mut usize, width: u32, next: &mut dyn FnMut(&mut usize) -> Option<bool>| -> Option<u32> {
        let mut v = 0;
        for _ in 0..width {
            v = v * 2 + u32::from(next(pos)?);
        }
        Some(v)
    };
    let n: usize = gamma(&mut pos, 24, &mut next)?.try_into().ok()?;
    // (opcode, register, jump target)
    let mut code = Vec::new();
    for at in 0..n {
        let op = field(&mut pos, 4, &mut next)? % 8;
        let r = field(&mut pos, 2, &mut next)? as usize;
        let mut target = 0;
        if op == 2 {
            let off = field(&mut pos, 8, &mut next)? as u8 as i8;
            let t = at as i64 + off as i64;
            if t < 0 || t > n as i64 {
                return None;
            }
            target = t as usize;
        }
        code.push((op, r, target));
    }
    let r0 = gamma(&mut pos, 4096, &mut next)? - 1u32;
    let program_bits = pos;
    let mut regs = [r0, BigUint::default(), BigUint::default(), BigUint::default()];
    let mut run = RefRun { program_bits, emitted: Vec::new(), halted: false, starved: false };
    let mut pc = 0;
    let mut steps = 0;
    while steps < t {
        if pc == n {
            run.halted = true;
            return Some(run);
        }
        let (op, r, target) = code[pc];
        pc += 1;
        match op {
            0 => regs[r] += 1u32,
            1 => {
                if regs[r] > BigUint::default() {
                    regs[r] -= 1u32;
                }
            }
            2 => {
                if regs[r] == BigUint::default() {
                    pc = target;
                }
            }
            3 => run.emitted.push(regs[r].clone()),
            4 => {
                run.halted = true;
                return Some(run);
            }
            5 => match next(&mut pos) {
                Some(b) => regs[r] = &regs[r] * 2u32 + u32::from(b),
                None => {
                    run.starved = true;
                    return Some(run);
                }
            },
            6 => regs[r] *= 2u32,
            _ => {}
        }
        steps += 1;
    }
    run.halted = pc == n;
    Some(run)
}

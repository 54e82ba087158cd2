//! Exhaustive truth-table semantics over at most [`MAX_ORACLE_ATOMS`] atoms.
//!
//! Each sentence is evaluated to a bitset with one bit per assignment, so a
//! whole set is checked with word-wide `&`/`|`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use thiserror::Error;

use crate::logic::Sentence;

pub const MAX_ORACLE_ATOMS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{atoms} distinct atoms exceed the truth-table cap of {cap}")]
    TooManyAtoms { atoms: usize, cap: usize },
}

/// Truth tables of sentences over a fixed, ordered atom universe.
#[derive(Debug, Clone)]
pub struct TruthTable {
    atoms: Vec<BigUint>,
    words: usize,
    tail_mask: u64,
}

impl TruthTable {
    pub fn new(atoms: Vec<BigUint>) -> Result<Self, OracleError> {
        if atoms.len() > MAX_ORACLE_ATOMS {
            return Err(OracleError::TooManyAtoms { atoms: atoms.len(), cap: MAX_ORACLE_ATOMS });
        }
        let rows = 1usize << atoms.len();
        let words = rows.div_ceil(64);
        let tail_mask = if rows >= 64 { u64::MAX } else { (1u64 << rows) - 1 };
        Ok(TruthTable { atoms, words, tail_mask })
    }

    /// Universe made of every atom mentioned by `sentences`.
    pub fn covering<'a>(sentences: impl IntoIterator<Item = &'a Sentence>) -> Result<Self, OracleError> {
        let mut set = BTreeSet::new();
        for s in sentences {
            s.for_each_atom(&mut |k| {
                set.insert(k.clone());
            });
        }
        TruthTable::new(set.into_iter().collect())
    }

    pub fn atoms(&self) -> &[BigUint] {
        &self.atoms
    }

    fn full(&self) -> Vec<u64> {
        let mut v = vec![u64::MAX; self.words];
        if let Some(last) = v.last_mut() {
            *last &= self.tail_mask;
        }
        v
    }

    fn atom_column(&self, position: usize) -> Vec<u64> {
        const LOW: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        let mut v = vec![0u64; self.words];
        for (w, word) in v.iter_mut().enumerate() {
            *word = if position < 6 {
                LOW[position]
            } else if ((w << 6) >> position) & 1 == 1 {
                u64::MAX
            } else {
                0
            };
        }
        if let Some(last) = v.last_mut() {
            *last &= self.tail_mask;
        }
        v
    }

    /// Rows (assignments) satisfying `s`; `None` if `s` mentions an atom
    /// outside the universe.
    pub fn models(&self, s: &Sentence) -> Option<Vec<u64>> {
        Some(match s {
            Sentence::Bottom => vec![0; self.words],
            Sentence::Atom(k) => {
                let position = self.atoms.iter().position(|a| a == k)?;
                self.atom_column(position)
            }
            Sentence::Not(a) => {
                let mut v = self.models(a)?;
                let full = self.full();
                for (x, f) in v.iter_mut().zip(full) {
                    *x = !*x & f;
                }
                v
            }
            Sentence::And(a, b) => zip(self.models(a)?, self.models(b)?, |x, y| x & y),
            Sentence::Or(a, b) => zip(self.models(a)?, self.models(b)?, |x, y| x | y),
            Sentence::Implies(a, b) => {
                let full = self.full();
                let na: Vec<u64> = self.models(a)?.into_iter().zip(full).map(|(x, f)| !x & f).collect();
                zip(na, self.models(b)?, |x, y| x | y)
            }
        })
    }

    /// Rows satisfying every sentence.
    pub fn joint_models<'a>(&self, sentences: impl IntoIterator<Item = &'a Sentence>) -> Option<Vec<u64>> {
        let mut acc = self.full();
        for s in sentences {
            let m = self.models(s)?;
            for (x, y) in acc.iter_mut().zip(m) {
                *x &= y;
            }
        }
        Some(acc)
    }

    pub fn rows(&self) -> usize {
        1 << self.atoms.len()
    }
}

fn zip(a: Vec<u64>, b: Vec<u64>, f: impl Fn(u64, u64) -> u64) -> Vec<u64> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

pub(crate) fn any_set(bits: &[u64]) -> bool {
    bits.iter().any(|&w| w != 0)
}

/// True iff some assignment satisfies every sentence.
pub fn semantic_consistent(sentences: &[Sentence]) -> Result<bool, OracleError> {
    let table = TruthTable::covering(sentences)?;
    let models = table.joint_models(sentences).expect("universe covers all atoms");
    Ok(any_set(&models))
}

/// True iff every model of `premises` satisfies `goal`.
pub fn entails(premises: &[Sentence], goal: &Sentence) -> Result<bool, OracleError> {
    let mut all: Vec<Sentence> = premises.to_vec();
    all.push(Sentence::not(goal.clone()));
    semantic_consistent(&all).map(|c| !c)
}

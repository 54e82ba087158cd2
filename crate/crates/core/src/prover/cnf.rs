//! Polarity-aware Tseitin translation.
//!
//! Top-level conjunctions are split, disjunctions of literals become plain
//! clauses, and only a conjunctive subformula sitting under a disjunction is
//! named by a fresh variable. Fresh variables live in their own namespace
//! ([`Var::Fresh`]) so they can never collide with user atoms, whose indices
//! are unbounded.
//!
//! A subformula is named at most once per translation, and its defining
//! clauses depend only on the subformula and its polarity. Translating a
//! superset of sentences therefore yields a superset of clauses up to a
//! renaming of fresh variables, which keeps bounded refutation monotone.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::logic::Sentence;

/// Encoded literal: `var << 1 | negated`.
pub(crate) type Lit = u32;

pub(crate) fn lit(var: u32, positive: bool) -> Lit {
    (var << 1) | u32::from(!positive)
}

pub(crate) fn var_of(l: Lit) -> u32 {
    l >> 1
}

pub(crate) fn is_positive(l: Lit) -> bool {
    l & 1 == 0
}

/// Variable of a clause in the public clause representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Atom(BigUint),
    Fresh(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: Var,
    pub positive: bool,
}

/// A disjunction of literals; the empty clause is unsatisfiable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause(pub Vec<Literal>);

impl Clause {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Origin {
    Atom,
    Fresh(u32),
}

/// Clause database produced by translating a set of sentences.
#[derive(Default)]
pub(crate) struct Cnf {
    pub clauses: Vec<Vec<Lit>>,
    atoms: HashMap<BigUint, u32>,
    names: HashMap<(Sentence, bool), u32>,
    origins: Vec<Origin>,
    atom_keys: Vec<Option<BigUint>>,
    fresh_count: u32,
}

impl Cnf {
    pub fn from_sentences<'a>(sentences: impl IntoIterator<Item = &'a Sentence>) -> Self {
        let mut cnf = Cnf::default();
        for s in sentences {
            cnf.add(s);
        }
        cnf
    }

    pub fn num_vars(&self) -> usize {
        self.origins.len()
    }

    pub fn add(&mut self, s: &Sentence) {
        let mut out = Vec::new();
        self.conjuncts(s, true, &mut out);
        self.clauses.extend(out);
    }

    fn atom_var(&mut self, k: &BigUint) -> u32 {
        if let Some(&v) = self.atoms.get(k) {
            return v;
        }
        let v = self.origins.len() as u32;
        self.origins.push(Origin::Atom);
        self.atom_keys.push(Some(k.clone()));
        self.atoms.insert(k.clone(), v);
        v
    }

    /// Clauses whose conjunction is `s` (if `positive`) or `!s`.
    fn conjuncts(&mut self, s: &Sentence, positive: bool, out: &mut Vec<Vec<Lit>>) {
        match (s, positive) {
            (Sentence::Not(a), _) => self.conjuncts(a, !positive, out),
            (Sentence::And(a, b), true) => {
                self.conjuncts(a, true, out);
                self.conjuncts(b, true, out);
            }
            (Sentence::Or(a, b), false) => {
                self.conjuncts(a, false, out);
                self.conjuncts(b, false, out);
            }
            (Sentence::Implies(a, b), false) => {
                self.conjuncts(a, true, out);
                self.conjuncts(b, false, out);
            }
            (Sentence::Bottom, true) => out.push(Vec::new()),
            (Sentence::Bottom, false) => {}
            _ => {
                let mut clause = Vec::new();
                if self.disjuncts(s, positive, &mut clause) {
                    clause.sort_unstable();
                    clause.dedup();
                    if !is_tautology(&clause) {
                        out.push(clause);
                    }
                }
            }
        }
    }

    /// Appends literals whose disjunction is `s` (or `!s`); returns false if
    /// the disjunction is trivially true.
    fn disjuncts(&mut self, s: &Sentence, positive: bool, clause: &mut Vec<Lit>) -> bool {
        match (s, positive) {
            (Sentence::Atom(k), _) => {
                let v = self.atom_var(k);
                clause.push(lit(v, positive));
                true
            }
            (Sentence::Not(a), _) => self.disjuncts(a, !positive, clause),
            (Sentence::Bottom, true) => true,
            (Sentence::Bottom, false) => false,
            (Sentence::Or(a, b), true) => self.disjuncts(a, true, clause) && self.disjuncts(b, true, clause),
            (Sentence::And(a, b), false) => self.disjuncts(a, false, clause) && self.disjuncts(b, false, clause),
            (Sentence::Implies(a, b), true) => self.disjuncts(a, false, clause) && self.disjuncts(b, true, clause),
            _ => {
                let v = self.name(s, positive);
                clause.push(lit(v, true));
                true
            }
        }
    }

    /// Fresh variable `t` with clauses for `t -> s` (or `t -> !s`).
    fn name(&mut self, s: &Sentence, positive: bool) -> u32 {
        let key = (s.clone(), positive);
        if let Some(&v) = self.names.get(&key) {
            return v;
        }
        let v = self.origins.len() as u32;
        self.origins.push(Origin::Fresh(self.fresh_count));
        self.atom_keys.push(None);
        self.fresh_count += 1;
        self.names.insert(key, v);
        let mut body = Vec::new();
        self.conjuncts(s, positive, &mut body);
        for mut c in body {
            c.push(lit(v, false));
            c.sort_unstable();
            c.dedup();
            if !is_tautology(&c) {
                self.clauses.push(c);
            }
        }
        v
    }

    pub fn to_public(&self, clause: &[Lit]) -> Clause {
        Clause(
            clause
                .iter()
                .map(|&l| {
                    let v = var_of(l) as usize;
                    let var = match self.origins[v] {
                        Origin::Atom => Var::Atom(self.atom_keys[v].clone().expect("atom key")),
                        Origin::Fresh(i) => Var::Fresh(i),
                    };
                    Literal { var, positive: is_positive(l) }
                })
                .collect(),
        )
    }
}

/// Sorted clause containing both a literal and its negation.
pub(crate) fn is_tautology(sorted: &[Lit]) -> bool {
    sorted.windows(2).any(|w| w[0] ^ 1 == w[1])
}

/// Equisatisfiable clause set for a single sentence.
pub fn clausify(s: &Sentence) -> Vec<Clause> {
    let cnf = Cnf::from_sentences([s]);
    let mut out: Vec<Clause> = cnf.clauses.iter().map(|c| cnf.to_public(c)).collect();
    out.sort();
    out.dedup();
    out
}

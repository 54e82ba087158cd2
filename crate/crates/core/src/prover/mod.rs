//! Bounded refutation proving.
//!
//! The budget of a refutation is its resolution depth: a set is refuted at
//! budget `b` when the empty clause has a derivation whose longest chain of
//! inferences is at most `b`. That measure is monotone both in the budget and
//! in the premise set (a proof from `S` is a proof from every superset), which
//! the closure argument of the consistency check relies on. The exact mapping
//! from this budget to any other notion of proof length is a modelling
//! choice; finite-stage behaviour depends on it.

mod cnf;
mod dpll;
pub mod oracle;
mod resolution;

pub use cnf::{clausify, Clause, Literal, Var};
pub use oracle::{entails, semantic_consistent, OracleError, TruthTable, MAX_ORACLE_ATOMS};

use serde::{Deserialize, Serialize};

use crate::logic::{Sentence, Theory};
use cnf::Cnf;
use resolution::{saturate, Saturation};

/// Maximum resolution depth a refutation may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProofBudget {
    pub max_steps: u64,
}

impl ProofBudget {
    pub const fn new(max_steps: u64) -> Self {
        ProofBudget { max_steps }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RefutationResult {
    Refuted { steps_used: u64 },
    Unknown,
}

impl RefutationResult {
    pub fn is_refuted(&self) -> bool {
        matches!(self, RefutationResult::Refuted { .. })
    }
}

/// Searches for a resolution refutation of `sentences` within `budget`.
///
/// `Refuted` implies the set is unsatisfiable; `Unknown` only says no
/// refutation exists within the budget.
pub fn refute_bounded<'a>(sentences: impl IntoIterator<Item = &'a Sentence>, budget: ProofBudget) -> RefutationResult {
    let cnf = Cnf::from_sentences(sentences);
    match saturate(&cnf.clauses, budget.max_steps) {
        Saturation::Refuted(depth) => RefutationResult::Refuted { steps_used: depth },
        Saturation::Saturated | Saturation::Exhausted => RefutationResult::Unknown,
    }
}

/// Exact satisfiability through DPLL on the clause translation.
pub fn satisfiable<'a>(sentences: impl IntoIterator<Item = &'a Sentence>) -> bool {
    let cnf = Cnf::from_sentences(sentences);
    dpll::satisfiable(&cnf.clauses, cnf.num_vars())
}

/// `phi` follows from the first `n_axioms` axioms by a refutation of
/// `axioms + !phi` within `budget`.
pub fn is_theorem_bounded(phi: &Sentence, theory: &Theory, n_axioms: u64, budget: ProofBudget) -> bool {
    let mut premises = theory.first_axioms(n_axioms);
    premises.push(Sentence::not(phi.clone()));
    refute_bounded(&premises, budget).is_refuted()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_sentence;

    fn set(xs: &[&str]) -> Vec<Sentence> {
        xs.iter().map(|x| parse_sentence(x).unwrap()).collect()
    }

    #[test]
    fn complementary_pair() {
        let r = refute_bounded(&set(&["a0", "!a0"]), ProofBudget::new(4));
        assert_eq!(r, RefutationResult::Refuted { steps_used: 1 });
    }

    #[test]
    fn satisfiable_is_unknown() {
        for b in [0, 1, 10, 10_000] {
            assert_eq!(refute_bounded(&set(&["a0"]), ProofBudget::new(b)), RefutationResult::Unknown);
        }
    }

    #[test]
    fn modus_ponens_chain() {
        let s = set(&["a0 -> a1", "a0", "!a1"]);
        assert!(!semantic_consistent(&s).unwrap());
        let r = refute_bounded(&s, ProofBudget::new(16));
        assert_eq!(r, RefutationResult::Refuted { steps_used: 2 });
        assert_eq!(refute_bounded(&s, ProofBudget::new(1)), RefutationResult::Unknown);
    }

    #[test]
    fn bottom_is_refuted_without_inference() {
        let r = refute_bounded(&set(&["_|_"]), ProofBudget::new(0));
        assert_eq!(r, RefutationResult::Refuted { steps_used: 0 });
    }

    #[test]
    fn theorem_examples() {
        let empty = Theory::empty();
        let taut = parse_sentence("a0 | !a0").unwrap();
        assert!(is_theorem_bounded(&taut, &empty, 0, ProofBudget::new(8)));
        assert!(is_theorem_bounded(&taut, &empty, 3, ProofBudget::new(8)));
        for b in [0, 8, 1000] {
            assert!(!is_theorem_bounded(&Sentence::atom(0), &empty, 4, ProofBudget::new(b)));
        }
        let t = Theory::from_axioms("mp", set(&["a0 -> a1", "a0"]));
        assert!(is_theorem_bounded(&Sentence::atom(1), &t, 2, ProofBudget::new(16)));
        assert!(!is_theorem_bounded(&Sentence::atom(1), &t, 1, ProofBudget::new(16)));
    }

    #[test]
    fn dpll_agrees_with_truth_tables_on_examples() {
        for xs in [&["a0", "!a0"][..], &["a0 | a1", "!a0", "!a1"], &["(a0 & a1) | a2", "!a2"], &[]] {
            let s = set(xs);
            assert_eq!(satisfiable(&s), semantic_consistent(&s).unwrap(), "{xs:?}");
        }
    }
}

mod common;

use std::collections::BTreeMap;

use common::{all_sentences, arb_sentence, brute_sat};
use mstar_core::logic::{Sentence, Theory};
use mstar_core::prover::{
    clausify, entails, is_theorem_bounded, refute_bounded, satisfiable, semantic_consistent, Clause, ProofBudget, Var,
};
use proptest::prelude::*;

const FULL: ProofBudget = ProofBudget::new(10_000);

fn agree(set: &[Sentence]) {
    let truth = brute_sat(set, 3);
    assert_eq!(semantic_consistent(set).unwrap(), truth, "{set:?}");
    assert_eq!(satisfiable(set), truth, "{set:?}");
    assert_eq!(refute_bounded(set, FULL).is_refuted(), !truth, "{set:?}");
}

#[test]
fn exhaustive_shallow_sets_agree_with_brute_force() {
    let universe = all_sentences(3, 1);
    assert_eq!(universe.len(), 56);
    for (i, a) in universe.iter().enumerate() {
        agree(std::slice::from_ref(a));
        for (j, b) in universe.iter().enumerate().skip(i) {
            agree(&[a.clone(), b.clone()]);
            for c in &universe[j..] {
                agree(&[a.clone(), b.clone(), c.clone()]);
            }
        }
    }
}

#[test]
fn exhaustive_depth_two_singletons() {
    let universe = all_sentences(3, 2);
    // 56 shallower sentences, 52 negations of depth-one ones, 3 * (56^2 - 4^2) binaries
    assert_eq!(universe.len(), 9468);
    for s in &universe {
        agree(std::slice::from_ref(s));
    }
}

/// Satisfiability of a clause set by trying every assignment to its variables.
fn brute_clauses(clauses: &[Clause]) -> bool {
    let mut vars: BTreeMap<Var, usize> = BTreeMap::new();
    for c in clauses {
        for l in &c.0 {
            let next = vars.len();
            vars.entry(l.var.clone()).or_insert(next);
        }
    }
    assert!(vars.len() <= 20, "too many variables to enumerate");
    (0u32..1 << vars.len()).any(|row| clauses.iter().all(|c| c.0.iter().any(|l| (row >> vars[&l.var] & 1 == 1) == l.positive)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn random_small_sets_agree(set in prop::collection::vec(arb_sentence(3, 3), 0..=3)) {
        agree(&set);
    }

    #[test]
    fn clausify_is_equisatisfiable(s in arb_sentence(3, 3)) {
        prop_assert_eq!(brute_clauses(&clausify(&s)), brute_sat(std::slice::from_ref(&s), 3));
    }

    #[test]
    fn refutation_is_monotone(
        set in prop::collection::vec(arb_sentence(3, 3), 1..=4),
        extra in arb_sentence(3, 2),
        b in 0u64..6,
    ) {
        let r = refute_bounded(&set, ProofBudget::new(b));
        if let Some(steps) = match r { mstar_core::RefutationResult::Refuted { steps_used } => Some(steps_used), _ => None } {
            prop_assert!(steps <= b);
            prop_assert!(!brute_sat(&set, 3));
            prop_assert!(refute_bounded(&set, ProofBudget::new(b + 1)).is_refuted());
            let mut bigger = set.clone();
            bigger.push(extra);
            prop_assert!(refute_bounded(&bigger, ProofBudget::new(b)).is_refuted());
        }
    }

    #[test]
    fn theorems_match_entailment(axioms in prop::collection::vec(arb_sentence(3, 2), 0..=3), phi in arb_sentence(3, 2)) {
        let theory = Theory::from_axioms("t", axioms.clone());
        let proved = is_theorem_bounded(&phi, &theory, axioms.len() as u64, FULL);
        prop_assert_eq!(proved, entails(&axioms, &phi).unwrap());
    }
}

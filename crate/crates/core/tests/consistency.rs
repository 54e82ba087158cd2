mod common;

use std::collections::{BTreeSet, HashMap};

use common::{all_sentences, arb_sentence, brute_sat};
use mstar_core::consistency::{con_monotone_check, con_n, probe_pool, ClaimSet, ConChecker, ConParams};
use mstar_core::logic::Sentence;
use mstar_core::prover::{refute_bounded, ProofBudget};
use proptest::prelude::*;

/// The recursive definition read literally, as a least fixed point: `X` is
/// rejected when refuted, or when for some subset `S` of `X` and probe `p`
/// with `p, !p` not in `S`, both `S + p` and `S + !p` are rejected. Sets are
/// bitmasks over the claims plus every probe and its negation.
fn reference_accepts(phi: &[Sentence], params: ConParams) -> bool {
    let mut items: Vec<Sentence> = Vec::new();
    let bit = |s: Sentence, items: &mut Vec<Sentence>| match items.iter().position(|x| *x == s) {
        Some(i) => i,
        None => {
            items.push(s);
            items.len() - 1
        }
    };
    let start = phi.iter().fold(0u32, |m, s| m | 1 << bit(s.clone(), &mut items));
    let pairs: Vec<(usize, usize)> =
        probe_pool(&params).into_iter().map(|p| (bit(p.clone(), &mut items), bit(Sentence::not(p), &mut items))).collect();
    assert!(items.len() <= 24);

    let submasks = |x: u32| {
        let mut out = vec![x];
        let mut s = x;
        while s != 0 {
            s = (s - 1) & x;
            out.push(s);
        }
        out
    };
    let mut reach = BTreeSet::from([start]);
    let mut todo = vec![start];
    while let Some(x) = todo.pop() {
        for s in submasks(x) {
            for &(p, n) in &pairs {
                if s >> p & 1 == 0 && s >> n & 1 == 0 {
                    for y in [s | 1 << p, s | 1 << n] {
                        if reach.insert(y) {
                            todo.push(y);
                        }
                    }
                }
            }
        }
    }
    let members = |x: u32| -> Vec<Sentence> { (0..items.len()).filter(|i| x >> i & 1 == 1).map(|i| items[i].clone()).collect() };
    let mut rej: HashMap<u32, bool> =
        reach.iter().map(|&x| (x, refute_bounded(&members(x), params.proof_budget).is_refuted())).collect();
    loop {
        let mut changed = false;
        for &x in &reach {
            if rej[&x] {
                continue;
            }
            let derived = submasks(x).into_iter().any(|s| {
                pairs.iter().any(|&(p, n)| s >> p & 1 == 0 && s >> n & 1 == 0 && rej[&(s | 1 << p)] && rej[&(s | 1 << n)])
            });
            if derived {
                rej.insert(x, true);
                changed = true;
            }
        }
        if !changed {
            return !rej[&start];
        }
    }
}

fn tiny_params(budget: u64) -> ConParams {
    ConParams { proof_budget: ProofBudget::new(budget), sentence_size_cap: 2, probe_pool_cap: 8 }
}

#[test]
fn tiny_pool_is_as_expected() {
    let pool: Vec<String> = probe_pool(&tiny_params(1)).iter().map(|s| s.to_string()).collect();
    assert_eq!(pool, ["_|_", "a0", "!_|_", "a1"]);
}

#[test]
fn spec_examples() {
    let p = ConParams { proof_budget: ProofBudget::new(64), ..ConParams::default() };
    assert!(!con_n(&[Sentence::Bottom].into_iter().collect(), &p).unwrap());
    assert!(con_n(&ClaimSet::new(), &p).unwrap());
    let s = |x: &str| x.parse::<Sentence>().unwrap();
    let phi: ClaimSet = [s("a0 | a1"), s("!a0"), s("!a1")].into_iter().collect();
    assert!(!con_n(&phi, &p).unwrap());
    assert!(con_monotone_check(&[Sentence::Bottom].into_iter().collect(), &Sentence::atom(0), &p).unwrap());
    assert!(con_monotone_check(&ClaimSet::new(), &Sentence::atom(0), &p).unwrap());
}

#[test]
fn exhaustive_soundness_over_shallow_sets() {
    let universe = all_sentences(3, 1);
    let checker = ConChecker::new(ConParams { proof_budget: ProofBudget::new(2), ..ConParams::default() });
    let mut rejected = 0;
    for (i, a) in universe.iter().enumerate() {
        for (j, b) in universe.iter().enumerate().skip(i) {
            for c in &universe[j..] {
                let set = [a.clone(), b.clone(), c.clone()];
                let phi: ClaimSet = set.iter().cloned().collect();
                if !checker.check(&phi).unwrap() {
                    rejected += 1;
                    assert!(!brute_sat(&set, 3), "{set:?} rejected but satisfiable");
                }
            }
        }
    }
    assert!(rejected > 1000, "only {rejected} rejections; check exercises nothing");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn agrees_with_literal_definition(set in prop::collection::vec(arb_sentence(2, 2), 0..=3), budget in 0u64..4) {
        let params = tiny_params(budget);
        let phi: ClaimSet = set.iter().cloned().collect();
        let want = reference_accepts(&set, params);
        prop_assert_eq!(ConChecker::new(params).check(&phi).unwrap(), want);
        prop_assert_eq!(ConChecker::without_memo(params).check(&phi).unwrap(), want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rejection_implies_unsatisfiable(set in prop::collection::vec(arb_sentence(4, 3), 0..=5), budget in 0u64..6) {
        let params = ConParams { proof_budget: ProofBudget::new(budget), ..ConParams::default() };
        if !con_n(&set.iter().cloned().collect(), &params).unwrap() {
            prop_assert!(!brute_sat(&set, 4));
        }
    }

    #[test]
    fn rejection_survives_supersets(
        set in prop::collection::vec(arb_sentence(4, 3), 0..=4),
        extra in arb_sentence(4, 3),
        budget in 0u64..6,
    ) {
        let params = ConParams { proof_budget: ProofBudget::new(budget), ..ConParams::default() };
        prop_assert!(con_monotone_check(&set.iter().cloned().collect(), &extra, &params).unwrap());
    }

    #[test]
    fn larger_budgets_never_accept_more(set in prop::collection::vec(arb_sentence(3, 3), 0..=4), budget in 0u64..5) {
        let phi: ClaimSet = set.into_iter().collect();
        let base = ConParams { proof_budget: ProofBudget::new(budget), sentence_size_cap: 4, probe_pool_cap: 32 };
        let looser = [
            ConParams { proof_budget: ProofBudget::new(budget + 1), ..base },
            ConParams { sentence_size_cap: 8, ..base },
            ConParams { probe_pool_cap: 64, ..base },
        ];
        if !con_n(&phi, &base).unwrap() {
            for p in looser {
                prop_assert!(!con_n(&phi, &p).unwrap(), "{:?}", p);
            }
        }
    }
}

mod common;

use std::collections::HashSet;

use common::arb_sentence;
use mstar_core::logic::{enumerate, pair, parse_sentence, render_sentence, sentence_index, unpair, Sentence, SentenceIndex};
use num_bigint::BigUint;
use proptest::prelude::*;

#[test]
fn first_indices_are_distinct_and_invert() {
    let mut seen = HashSet::new();
    for k in 0..20_000u64 {
        let s = enumerate(&SentenceIndex::new(k));
        assert_eq!(sentence_index(&s), SentenceIndex::new(k));
        assert!(seen.insert(s));
    }
}

#[test]
fn atom_and_negated_atom_indices() {
    for n in 0..500u64 {
        assert_eq!(sentence_index(&Sentence::atom(n)), SentenceIndex::new(5 * n + 1));
        assert_eq!(sentence_index(&Sentence::not(Sentence::atom(n))), SentenceIndex::new(25 * n + 7));
    }
}

/// Cantor pairing by counting along diagonals.
#[test]
fn pairing_matches_diagonal_walk() {
    let mut z = 0u64;
    for d in 0..60u64 {
        for y in 0..=d {
            let x = d - y;
            assert_eq!(pair(&BigUint::from(x), &BigUint::from(y)), BigUint::from(z));
            z += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn sentences_roundtrip_through_indices(s in arb_sentence(40, 6)) {
        prop_assert_eq!(enumerate(&sentence_index(&s)), s);
    }

    #[test]
    fn big_indices_roundtrip(bytes in prop::collection::vec(any::<u8>(), 0..48)) {
        let k = SentenceIndex(BigUint::from_bytes_be(&bytes));
        prop_assert_eq!(sentence_index(&enumerate(&k)), k);
    }

    #[test]
    fn rendering_parses_back(s in arb_sentence(40, 6)) {
        prop_assert_eq!(parse_sentence(&render_sentence(&s)).unwrap(), s);
    }

    #[test]
    fn unpair_inverts_pair(x in any::<u128>(), y in any::<u128>()) {
        let (x, y) = (BigUint::from(x), BigUint::from(y));
        prop_assert_eq!(unpair(&pair(&x, &y)), (x, y));
    }
}

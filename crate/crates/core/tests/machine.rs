mod common;

use std::collections::BTreeMap;

use common::reference_run;
use mstar_core::logic::SentenceIndex;
use mstar_core::machine::{
    assemble_emit_one, decode_program, run_bits, run_bounded, BitSource, Instruction, Program, EMIT_ONE_OVERHEAD,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn bits_of(word: u64, len: usize) -> Vec<bool> {
    (0..len).rev().map(|i| word >> i & 1 == 1).collect()
}

fn agree_with_reference(bits: &[bool], t: u64) {
    let mut src = BitSource::finite(bits.to_vec());
    let trace = run_bits(&mut src, t);
    match reference_run(bits, t) {
        None => assert!(trace.emitted.is_empty() && !trace.halted, "{bits:?}"),
        Some(r) => {
            let got: Vec<BigUint> = trace.emitted.iter().map(|k| k.0.clone()).collect();
            assert_eq!(got, r.emitted, "{bits:?}");
            assert_eq!((trace.halted, trace.starved), (r.halted, r.starved), "{bits:?}");
            assert!(trace.steps_used <= t);
        }
    }
}

#[test]
fn every_short_string_matches_the_reference() {
    for len in [12usize, 14] {
        for w in 0..1u64 << len {
            agree_with_reference(&bits_of(w, len), 24);
        }
    }
}

/// Every decodable program is hit by exactly the strings extending it, so
/// each complete program of length `l` carries mass `2^-l`.
#[test]
fn program_prefixes_partition_the_cube() {
    const LEN: usize = 14;
    let mut by_prefix: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
    for w in 0..1u64 << LEN {
        let bits = bits_of(w, LEN);
        let mut src = BitSource::finite(bits.clone());
        if decode_program(&mut src).is_ok() {
            *by_prefix.entry(bits[..src.cursor() as usize].to_vec()).or_default() += 1;
        }
    }
    assert!(!by_prefix.is_empty());
    let mut mass = 0.0;
    for (p, count) in &by_prefix {
        assert_eq!(*count, 1 << (LEN - p.len()), "prefix {p:?}");
        mass += (-(p.len() as f64)).exp2();
    }
    assert!(mass <= 1.0);
    let keys: Vec<&Vec<bool>> = by_prefix.keys().collect();
    for w in keys.windows(2) {
        assert!(!w[1].starts_with(w[0]), "{:?} extends {:?}", w[1], w[0]);
    }
}

fn arb_program() -> impl Strategy<Value = Program> {
    (1usize..10, 0u64..5000).prop_flat_map(|(n, r0)| {
        let ins = (0..n)
            .map(move |at| {
                prop_oneof![
                    (0u8..4).prop_map(Instruction::Inc),
                    (0u8..4).prop_map(Instruction::Dec),
                    (0u8..4, 0..=n).prop_map(move |(r, t)| Instruction::Jz(r, (t as i64 - at as i64) as i8)),
                    (0u8..4).prop_map(Instruction::Out),
                    Just(Instruction::Halt),
                    (0u8..4).prop_map(Instruction::LoadBit),
                    (0u8..4).prop_map(Instruction::Shl),
                    Just(Instruction::Nop),
                ]
                .boxed()
            })
            .collect::<Vec<_>>();
        ins.prop_map(move |ins| Program::new(ins, BigUint::from(r0)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn encode_decode_roundtrip(p in arb_program(), tail in prop::collection::vec(any::<bool>(), 0..20)) {
        let mut bits = p.encode();
        let len = bits.len() as u64;
        bits.extend(tail);
        let mut src = BitSource::finite(bits);
        prop_assert_eq!(decode_program(&mut src).unwrap(), p);
        prop_assert_eq!(src.cursor(), len);
    }

    #[test]
    fn random_programs_match_the_reference(p in arb_program(), data in prop::collection::vec(any::<bool>(), 0..16), t in 0u64..300) {
        let mut bits = p.encode();
        bits.extend(data);
        agree_with_reference(&bits, t);
    }

    #[test]
    fn runs_extend_with_budget(p in arb_program(), data in prop::collection::vec(any::<bool>(), 0..16), t in 0u64..200, more in 0u64..200) {
        let short = run_bounded(&p, &mut BitSource::finite(data.clone()), t);
        let long = run_bounded(&p, &mut BitSource::finite(data), t + more);
        prop_assert!(long.emitted.starts_with(&short.emitted));
        prop_assert!(short.steps_used <= t);
        prop_assert!(short.bits_read <= short.steps_used && long.bits_read <= long.steps_used);
        prop_assert!(long.bits_read >= short.bits_read);
    }

    #[test]
    fn emit_one_emits_exactly_k(k in any::<u128>()) {
        let k = SentenceIndex(BigUint::from(k));
        let bits = assemble_emit_one(&k);
        let expected = EMIT_ONE_OVERHEAD + 2 * ((&k.0 + 1u32).bits() - 1);
        prop_assert_eq!(bits.len() as u64, expected);
        let trace = run_bits(&mut BitSource::finite(bits), 10);
        prop_assert_eq!(trace.emitted, vec![k]);
        prop_assert!(trace.halted);
    }
}

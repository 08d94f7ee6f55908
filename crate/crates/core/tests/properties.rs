//! Invariants checked on randomly generated constraints against the
//! brute-force oracle.

use std::collections::BTreeMap;

use kempner_lab::harmonic::{
    block_bracket, block_lower_estimate, block_range_sum, block_sum_exact, one_minus_product,
    partial_sum_exact_with, tail_upper_estimate, weierstrass_lower,
};
use kempner_lab::oracle::{oracle_members, oracle_sum};
use kempner_lab::{
    cmp_exact, DigitConstraint, DigitSet, Exec, Extension, IndexSet, QuotientSequence, Rational,
};
use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use proptest::prelude::*;

/// Blocks past this value are not scanned by the oracle in these tests.
const SCAN: u64 = 20_000;

fn sequence() -> impl Strategy<Value = QuotientSequence> {
    prop_oneof![
        (2u64..=10).prop_map(|d| QuotientSequence::constant(d).unwrap()),
        (2u64..=4).prop_map(|b| QuotientSequence::power(b).unwrap()),
        Just(QuotientSequence::factorial()),
        (prop::collection::vec(2u64..=6, 1..5), any::<bool>()).prop_map(|(values, cycle)| {
            let ext = if cycle { Extension::Cycle } else { Extension::RepeatLast };
            QuotientSequence::explicit(values, ext).unwrap()
        }),
    ]
}

fn index_set() -> impl Strategy<Value = IndexSet> {
    prop_oneof![
        Just(IndexSet::All),
        prop::collection::btree_set(0usize..10, 0..6).prop_map(IndexSet::Explicit),
        (0usize..4, 1usize..4).prop_map(|(first, step)| IndexSet::Arithmetic { first, step }),
        (2u64..=3).prop_map(IndexSet::PowersOf),
        prop::collection::btree_set(0usize..6, 0..4).prop_map(|s| IndexSet::complement(IndexSet::Explicit(s))),
    ]
}

/// A valid constraint: single-digit default from {0, 1}, plus overrides at
/// a few early constrained positions, some of them full.
fn constraint() -> impl Strategy<Value = DigitConstraint> {
    (sequence(), index_set(), 0u64..2, prop::collection::vec((0usize..8, any::<u64>(), 0u8..4), 0..3)).prop_map(
        |(seq, set, digit, picks)| {
            let mut overrides = BTreeMap::new();
            for (i, seed, kind) in picks {
                if !set.contains(i) {
                    continue;
                }
                let d = seq.quotient_u64(i).unwrap();
                let u = match kind {
                    0 => DigitSet::NonZero,
                    // A random proper nonempty subset of [0, min(d, 16)).
                    _ => {
                        let w = d.min(16);
                        let mask = seed % ((1 << w) - 2) + 1;
                        DigitSet::listed((0..w).filter(|b| mask >> b & 1 == 1))
                    }
                };
                overrides.insert(i, u);
            }
            DigitConstraint::new(seq, set, DigitSet::listed([digit]), overrides).unwrap()
        },
    )
}

fn g(c: &DigitConstraint, k: usize) -> Option<u64> {
    u64::try_from(c.sequence().base_value(k)).ok()
}

fn le(a: &Rational, b: &Rational) -> bool {
    cmp_exact(a, b).is_le()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn digits_round_trip(seq in sequence(), n in 1u64..u64::MAX) {
        let n = BigUint::from(n);
        let numeral = seq.to_digits(&n).unwrap();
        numeral.validate().unwrap();
        prop_assert_eq!(seq.from_digits(numeral.into_digits()).unwrap(), n);
    }

    #[test]
    fn block_of_brackets_value(seq in sequence(), n in 1u64..1_000_000_000) {
        let k = seq.block_of(&BigUint::from(n)).unwrap();
        prop_assert!(seq.base_value(k) <= BigUint::from(n));
        prop_assert!(BigUint::from(n) < seq.base_value(k + 1));
    }

    #[test]
    fn counts_match_oracle(c in constraint(), n in 1u64..SCAN) {
        let members = oracle_members(&c, 1, n).unwrap();
        prop_assert_eq!(c.count_upto(&BigUint::from(n)), BigUint::from(members.len()));
        for &m in members.iter().take(50) {
            prop_assert!(c.is_member(&BigUint::from(m)).unwrap());
        }
    }

    #[test]
    fn block_counts_obey_lemma(c in constraint()) {
        for k in 0..8 {
            let bc = c.block_count_exact(k);
            prop_assert!(bc.within_product_bound());
            prop_assert_eq!(bc.empty, c.block_is_forced_empty(k));
            let Some(hi) = g(&c, k + 1).filter(|&h| h <= SCAN) else { break };
            let lo = g(&c, k).unwrap();
            let n = oracle_members(&c, lo, hi - 1).unwrap().len();
            prop_assert_eq!(bc.exact, BigUint::from(n));
        }
    }

    #[test]
    fn enumeration_is_sorted_block_members(c in constraint()) {
        for k in 0..6 {
            let Some(hi) = g(&c, k + 1).filter(|&h| h <= SCAN) else { break };
            let lo = g(&c, k).unwrap();
            let listed: Vec<u64> = c
                .collect_block(k, SCAN)
                .unwrap()
                .iter()
                .map(|v| u64::try_from(v).unwrap())
                .collect();
            prop_assert_eq!(listed, oracle_members(&c, lo, hi - 1).unwrap());
        }
    }

    #[test]
    fn sums_match_oracle(c in constraint(), n in 1u64..5_000) {
        let seq = partial_sum_exact_with(&c, &BigUint::from(n), u64::MAX, Exec::Sequential);
        let par = partial_sum_exact_with(&c, &BigUint::from(n), u64::MAX, Exec::Parallel);
        prop_assert!(!seq.truncated);
        prop_assert_eq!(&seq, &par);
        let oracle = oracle_sum(&c, 1, n).unwrap();
        prop_assert!(cmp_exact(&seq.value, &oracle).is_eq());
    }

    #[test]
    fn truncation_keeps_smallest_members(c in constraint(), budget in 0u64..200) {
        let s = partial_sum_exact_with(&c, &BigUint::from(SCAN), budget, Exec::Parallel);
        let members = oracle_members(&c, 1, SCAN).unwrap();
        let take = members.len().min(budget as usize);
        prop_assert_eq!(s.terms as usize, take);
        prop_assert_eq!(s.truncated, members.len() > take);
        let expect = match take {
            0 => Rational::from_integer(0.into()),
            _ => oracle_sum(&c, 1, members[take - 1]).unwrap(),
        };
        prop_assert!(cmp_exact(&s.value, &expect).is_eq());
    }

    #[test]
    fn block_sums_within_bracket_and_above_survival(c in constraint()) {
        for k in 0..6 {
            let bc = c.block_count_exact(k);
            if bc.exact > BigUint::from(20_000u32) {
                break;
            }
            let sum = block_sum_exact(&c, k, 20_000, Exec::default()).unwrap();
            let br = block_bracket(&c, k);
            prop_assert!(le(&br.bracket_lo, &sum) && le(&sum, &br.bracket_hi));
            if !bc.empty {
                prop_assert!(le(&block_lower_estimate(&c, k), &sum));
            }
        }
    }

    #[test]
    fn bounded_tail_estimate_dominates(d in 2u64..=10, digit in 0u64..2, k_max in 1usize..=3) {
        let seq = QuotientSequence::constant(d).unwrap().with_bound_hint(d).unwrap();
        let c = DigitConstraint::uniform(seq, IndexSet::All, DigitSet::listed([digit])).unwrap();
        for k0 in 1..=k_max {
            let s = block_range_sum(&c, k0, k_max, u64::MAX, Exec::default());
            prop_assert!(le(&s.value, &tail_upper_estimate(&c, k0, k_max).unwrap()));
        }
    }

    #[test]
    fn weierstrass_inequality(xs in prop::collection::vec((0u64..1000, 1u64..1000), 0..20)) {
        let xs: Vec<Rational> = xs
            .into_iter()
            .map(|(n, d)| Ratio::new(BigInt::from(n % d), BigInt::from(d)))
            .collect();
        prop_assert!(one_minus_product(&xs).unwrap() >= weierstrass_lower(&xs).unwrap());
    }
}

#[test]
fn factorial_digits_example() {
    // 23 = 1*1 + 2*2 + 3*6 in the factorial system.
    let seq = QuotientSequence::factorial();
    let digits: Vec<u64> = seq.to_digits(&BigUint::from(23u32)).unwrap().digits_u64().unwrap();
    assert_eq!(digits, [1, 2, 3]);
}

#[test]
fn power2_block_counts() {
    let c = DigitConstraint::uniform(QuotientSequence::power(2).unwrap(), IndexSet::All, DigitSet::listed([0])).unwrap();
    let counts: Vec<BigUint> = c.block_counts(3).into_iter().map(|b| b.exact).collect();
    assert_eq!(counts, [1u32, 3, 21, 315].map(BigUint::from));
}

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use proptest::prelude::*;

use denumerant::direct::{count_eq_termwise, count_eq_with, count_leq_with, DirectOptions};
use denumerant::table::{table_from_str, table_to_string};
use denumerant::{
    bounded_profile, build_table, c_poly, count_bounded_dp, count_dp, count_eq_direct,
    count_leq_direct, stars_and_bars, EquationSpec, MixedRadixCursor, Oracle,
};

fn coefficients(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..=12, 1..=max_len)
}

fn spec(a: &[u64]) -> EquationSpec {
    EquationSpec::new(a.to_vec(), None).unwrap()
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn direct_matches_oracle(a in coefficients(4), b in 0u64..=300) {
        let s = spec(&a);
        prop_assert_eq!(count_eq_direct(&s, &big(b), None).unwrap(), count_dp(&a, b).unwrap());
    }

    #[test]
    fn direct_matches_termwise(a in coefficients(3), b in 0u64..=200) {
        let s = spec(&a);
        prop_assume!(s.term_count() <= big(200_000));
        prop_assert_eq!(
            count_eq_direct(&s, &big(b), None).unwrap(),
            count_eq_termwise(&s, &big(b), u64::MAX).unwrap()
        );
    }

    #[test]
    fn permutation_invariant(a in coefficients(4), b in 0u64..=300, seed in any::<u64>()) {
        let mut shuffled = a.clone();
        let len = shuffled.len();
        for i in (1..len).rev() {
            shuffled.swap(i, (seed as usize).wrapping_mul(i + 7) % (i + 1));
        }
        let big_b = BigUint::from(10u32).pow(20) + b;
        for rhs in [big(b), big_b] {
            prop_assert_eq!(
                count_eq_direct(&spec(&a), &rhs, None).unwrap(),
                count_eq_direct(&spec(&shuffled), &rhs, None).unwrap()
            );
        }
    }

    #[test]
    fn inequality_is_cumulative(a in coefficients(3), b in 0u64..=100) {
        let s = spec(&a);
        let cumulative: BigUint = (0..=b).map(|c| count_eq_direct(&s, &big(c), None).unwrap()).sum();
        let leq = count_leq_direct(&s, &big(b), None).unwrap();
        prop_assert_eq!(&leq, &cumulative);
        prop_assert!(count_leq_direct(&s, &big(b + 1), None).unwrap() >= leq);
    }

    #[test]
    fn modulus_override_invariant(a in coefficients(4), b in 0u64..=300, k in 2u32..=3) {
        let base = spec(&a);
        let scaled = EquationSpec::new(a.clone(), Some(base.modulus() * k)).unwrap();
        prop_assert_eq!(
            count_eq_direct(&base, &big(b), None).unwrap(),
            count_eq_direct(&scaled, &big(b), None).unwrap()
        );
    }

    #[test]
    fn pruning_and_partitioning_are_transparent(a in coefficients(4), b in 0u64..=400) {
        let s = spec(&a);
        let reference = count_eq_direct(&s, &big(b), None).unwrap();
        for prune in [false, true] {
            for partitions in [2, 4, 8] {
                let opts = DirectOptions { budget: u64::MAX, prune, partitions };
                prop_assert_eq!(&count_eq_with(&s, &big(b), &opts).unwrap(), &reference);
                prop_assert_eq!(
                    count_leq_with(&s, &big(b), &opts).unwrap(),
                    count_leq_direct(&s, &big(b), None).unwrap()
                );
            }
        }
    }

    #[test]
    fn table_matches_direct(a in coefficients(4), b in 0u64..=300) {
        let s = spec(&a);
        let table = build_table(&s).unwrap();
        prop_assert_eq!(table.query(&big(b)), count_eq_direct(&s, &big(b), None).unwrap());
    }

    #[test]
    fn profile_invariants(a in coefficients(4)) {
        let s = spec(&a);
        let profile = bounded_profile(&s).unwrap();
        prop_assert_eq!(profile.total(), s.term_count());
        let bound = s.support_bound().to_u64().unwrap();
        prop_assert!(profile.get(bound) >= big(1));
        prop_assert_eq!(profile.get(bound + 1), big(0));
        let unbounded = Oracle::default().counts_up_to(&a, bound).unwrap();
        for (c, p) in profile.counts().iter().enumerate() {
            prop_assert!(p <= &unbounded[c]);
        }
    }

    #[test]
    fn profile_matches_capped_oracle(a in coefficients(3)) {
        let s = spec(&a);
        let profile = bounded_profile(&s).unwrap();
        let limits: Vec<u64> = s.small_radices().unwrap().iter().map(|d| d - 1).collect();
        let bound = profile.support_bound();
        for c in (0..=bound).step_by(1 + bound as usize / 40) {
            prop_assert_eq!(profile.get(c), count_bounded_dp(&a, &limits, c).unwrap());
        }
    }

    #[test]
    fn table_text_round_trip(a in coefficients(4)) {
        let table = build_table(&spec(&a)).unwrap();
        let text = table_to_string(&table);
        let loaded = table_from_str(&text).unwrap();
        prop_assert_eq!(&loaded, &table);
        prop_assert_eq!(table_to_string(&loaded), text);
    }

    #[test]
    fn stars_and_bars_is_shifted_c_poly(m in 0i64..500, n in 1u64..8) {
        prop_assert_eq!(
            stars_and_bars(&BigInt::from(m), n).unwrap(),
            c_poly(&BigInt::from(m + 1), n - 1)
        );
    }
}

/// Histogram of `sum a_i t_i` over the whole index box by literal enumeration.
fn enumerated_profile(s: &EquationSpec) -> HashMap<u64, u64> {
    let mut hist = HashMap::new();
    let mut cursor = s.cursor().unwrap();
    while !cursor.is_exhausted() {
        *hist.entry(cursor.running_sum() as u64).or_insert(0) += 1;
        cursor.advance().unwrap();
    }
    hist
}

#[test]
fn profile_matches_enumeration() {
    for a in [
        vec![2u64, 3],
        vec![1, 1, 2],
        vec![3, 4, 6, 8],
        vec![5, 7, 2],
        vec![9, 10, 12],
        vec![11],
    ] {
        let s = spec(&a);
        assert!(s.term_count() <= big(1_000_000));
        let profile = bounded_profile(&s).unwrap();
        let hist = enumerated_profile(&s);
        for c in 0..=profile.support_bound() + 2 {
            assert_eq!(
                profile.get(c),
                big(*hist.get(&c).unwrap_or(&0)),
                "a={a:?} c={c}"
            );
        }
    }
}

#[test]
fn divisible_terms_are_nonnegative_beyond_threshold() {
    for a in [vec![2u64, 3], vec![4, 6, 5], vec![1, 1, 2], vec![3, 7]] {
        let s = spec(&a);
        let m = s.modulus().to_u64().unwrap() as i128;
        let threshold = s.support_bound().to_u64().unwrap();
        for b in threshold..threshold + 3 * m as u64 {
            let mut cursor = s.cursor().unwrap();
            while !cursor.is_exhausted() {
                let rest = b as i128 - cursor.running_sum() as i128;
                if rest.rem_euclid(m) == 0 {
                    assert!(rest >= 0, "a={a:?} b={b} digits={:?}", cursor.digits());
                }
                cursor.advance().unwrap();
            }
        }
    }
}

#[test]
fn range_partitions_cover_the_box() {
    let a = vec![2u64, 3, 5];
    let d = vec![15u64, 10, 6];
    let total = 900u128;
    for parts in [2u128, 4, 8] {
        let mut seen = Vec::new();
        for k in 0..parts {
            let (lo, hi) = (total * k / parts, total * (k + 1) / parts);
            let mut c = MixedRadixCursor::at_rank(a.clone(), d.clone(), lo).unwrap();
            while !c.is_exhausted() && c.rank() < hi {
                seen.push(c.digits().to_vec());
                c.advance().unwrap();
            }
        }
        let mut whole = Vec::new();
        let mut c = MixedRadixCursor::new(a.clone(), d.clone()).unwrap();
        while !c.is_exhausted() {
            whole.push(c.digits().to_vec());
            c.advance().unwrap();
        }
        assert_eq!(seen, whole);
    }
}

#[test]
fn huge_right_hand_side_is_exact() {
    // x + y = b has b + 1 solutions
    let s = spec(&[1, 1]);
    let b = BigUint::from(10u32).pow(40) + 12345u32;
    assert_eq!(count_eq_direct(&s, &b, None).unwrap(), &b + 1u32);
    assert_eq!(build_table(&s).unwrap().query(&b), &b + 1u32);
}

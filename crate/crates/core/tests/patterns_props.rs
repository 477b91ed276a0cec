mod common;

use proptest::prelude::*;
use rand::Rng;
use zonekit::hs::{hart_sharir, HsParams, DEFAULT_BUDGET};
use zonekit::patterns::{
    contains_isomorphic, has_alternation, has_adjacent_repeat, is_ds_order3, max_ds_length,
    structurally_contains,
};
use zonekit::{Seq, Sym};

fn p(s: &str) -> Seq {
    Seq::parse_plain(s).unwrap()
}

/// Enumerates every sequence on up to `n` symbols in canonical form
/// (first occurrences in increasing order) and keeps the longest one
/// avoiding `forbidden` with no adjacent repeats. Independent of the
/// library's search.
fn naive_ex(forbidden: &[Seq], n: u64, max_len: usize) -> usize {
    fn extend(cur: &mut Vec<Sym>, used: u64, n: u64, max_len: usize, f: &[Seq], best: &mut usize) {
        *best = (*best).max(cur.len());
        if cur.len() == max_len {
            return;
        }
        for x in 1..=(used + 1).min(n) {
            if cur.last() == Some(&Sym(x)) {
                continue;
            }
            cur.push(Sym(x));
            let s = Seq::from_symbols(cur.iter().copied());
            if f.iter().all(|u| contains_isomorphic(&s, u).unwrap().is_none()) {
                extend(cur, used.max(x), n, max_len, f, best);
            }
            cur.pop();
        }
    }
    let mut best = 0;
    extend(&mut Vec::new(), 0, n, max_len, forbidden, &mut best);
    best
}

#[test]
fn lambda_one_and_two() {
    for n in 1..=5 {
        assert_eq!(max_ds_length(&[p("aba")], n).unwrap().max_length, n);
        assert_eq!(max_ds_length(&[p("abab")], n).unwrap().max_length, 2 * n - 1);
    }
}

#[test]
fn lambda_three_matches_naive_enumeration() {
    for n in 1..=4 {
        let lib = max_ds_length(&[p("ababa")], n).unwrap();
        assert!(is_ds_order3(&lib.witness));
        assert_eq!(lib.max_length, naive_ex(&[p("ababa")], n as u64, 16), "n = {n}");
    }
}

#[test]
fn structural_witnesses_in_larger_sequences() {
    let s22 = hart_sharir(HsParams::new(2, 2).unwrap(), DEFAULT_BUDGET).unwrap();
    for (k, m) in [(2, 3), (2, 4), (3, 2)] {
        let big = hart_sharir(HsParams::new(k, m).unwrap(), DEFAULT_BUDGET).unwrap();
        let w = structurally_contains(&big, &s22, None).unwrap().expect("witness");
        assert!(w.verify(&big, &s22));
        assert!(contains_isomorphic(&big, &s22).unwrap().is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn alternation_matches_ds_check(seed: u64, n in 2u64..=5, len in 0usize..30) {
        let s = common::plain_seq(&mut common::rng(seed), n, len);
        prop_assert!(!has_adjacent_repeat(&s));
        let syms = s.symbols();
        let any = syms.iter().any(|&a| syms.iter().any(|&b| a != b && has_alternation(&s, a, b, 5)));
        prop_assert_eq!(!any, is_ds_order3(&s));
    }

    #[test]
    fn containment_is_monotone(seed: u64, n in 2u64..=5, len in 0usize..24, plen in 1usize..6) {
        let mut r = common::rng(seed);
        let s = common::plain_seq(&mut r, n, len);
        let sub = Seq::from_symbols(s.tokens().iter().copied().filter(|_| r.gen_bool(0.6)));
        let u = common::plain_seq(&mut r, 3, plen);
        if let Some(w) = contains_isomorphic(&sub, &u).unwrap() {
            prop_assert!(w.verify(&sub, &u));
            let big = contains_isomorphic(&s, &u).unwrap();
            prop_assert!(big.is_some());
            prop_assert!(big.unwrap().verify(&s, &u));
        }
    }

    #[test]
    fn structural_implies_plain(seed: u64, k in 1usize..=3, m in 1usize..=2, bk in 1usize..=4, bm in 1usize..=3) {
        let mut r = common::rng(seed);
        let a = common::blocked_seq(&mut r, k, m);
        let b = common::blocked_seq(&mut r, bk, bm);
        if let Some(w) = structurally_contains(&b, &a, None).unwrap() {
            prop_assert!(w.verify(&b, &a));
            prop_assert!(contains_isomorphic(&b, &a).unwrap().is_some());
        }
    }
}

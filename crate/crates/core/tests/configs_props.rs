mod common;

use proptest::prelude::*;
use rand::Rng;
use zonekit::configs::{
    build_config, forcing_certificate, Branch, ConfigKind, THM31_ORDER, THM31_PATTERN,
};
use zonekit::patterns::{eseq_contains, find_ababa};
use zonekit::seq::endpoint_seq;
use zonekit::{ESeq, Seq, Sym};

fn whiskers_by_depth(b: &Branch, depth: usize, out: &mut Vec<usize>) {
    if let Branch::Whisker { children, .. } = b {
        if out.len() <= depth {
            out.resize(depth + 1, 0);
        }
        out[depth] += 1;
        for c in children {
            whiskers_by_depth(c, depth + 1, out);
        }
    }
}

#[test]
fn t_n_counts() {
    for n in 1..=5u32 {
        let cfg = build_config(ConfigKind::T { n }).unwrap();
        let two_n = 1usize << n;
        assert_eq!(cfg.whiskers.len(), two_n - 1, "T_{n}");
        let numeric: usize = cfg.numeric_groups.iter().map(Vec::len).sum();
        assert_eq!(numeric, (n as usize + 1) * two_n, "T_{n}");
        assert_eq!(cfg.meta["blocks"], two_n as u64);
        assert_eq!(cfg.meta["block_length"], n as u64 + 1);
        // Whiskers at depth d come from the 2^d copies of Z_{2^(n-1-d)}.
        let mut depth = Vec::new();
        for root in &cfg.tree {
            whiskers_by_depth(root, 0, &mut depth);
        }
        let expected: Vec<usize> = (0..n).map(|d| 1 << d).collect();
        assert_eq!(depth, expected, "T_{n}");
        assert_eq!(cfg.symbols().len(), 3 * (two_n - 1) + numeric);
    }
}

#[test]
fn thm31_pattern_is_certified() {
    let (order, _) = ESeq::parse(THM31_ORDER).unwrap();
    let cfg = build_config(ConfigKind::Thm31).unwrap();
    assert!(cfg.eseq.same_order_as(&order.canonical()));
    let u = Seq::parse_plain(THM31_PATTERN).unwrap();
    let cert = forcing_certificate(&u, &cfg).unwrap();
    assert_eq!(cert.endpoint_match.len(), cfg.symbols().len());
}

/// An ababa-free, adjacent-distinct supersequence of `u`, built by random
/// insertions of old and fresh symbols.
fn supersequence(r: &mut rand_chacha::ChaCha8Rng, u: &Seq, inserts: usize) -> Seq {
    let mut s: Vec<Sym> = u.tokens().to_vec();
    let mut fresh = s.iter().map(|x| x.0).max().unwrap() + 1;
    for _ in 0..inserts {
        let new_sym = r.gen_bool(0.4);
        let x = if new_sym { Sym(fresh) } else { s[r.gen_range(0..s.len())] };
        let mut trial = s.clone();
        trial.insert(r.gen_range(0..=trial.len()), x);
        if new_sym {
            trial.insert(r.gen_range(0..=trial.len()), x);
        }
        let ok = trial.windows(2).all(|w| w[0] != w[1])
            && find_ababa(&Seq::from_symbols(trial.iter().copied())).is_none();
        if ok {
            s = trial;
            fresh += u64::from(new_sym);
        }
    }
    Seq::from_symbols(s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forced_order_survives_in_supersequences(seed: u64, inserts in 1usize..25) {
        let cfg = build_config(ConfigKind::Thm31).unwrap();
        let u = Seq::parse_plain(THM31_PATTERN).unwrap();
        prop_assert!(forcing_certificate(&u, &cfg).is_ok());
        let s = supersequence(&mut common::rng(seed), &u, inserts);
        prop_assert!(find_ababa(&s).is_none());
        let (eu, es) = (endpoint_seq(&u).unwrap(), endpoint_seq(&s).unwrap());
        let w = eseq_contains(&es, &eu);
        prop_assert!(w.is_some(), "E(u) missing from E(S) for S = {}", s);
    }
}

use proptest::prelude::*;
use zonekit::configs::{build_config, Config, ConfigKind};
use zonekit::geom::{intersection_order_class, is_wide, OrderClass};
use zonekit::realizer::{
    assign_check, search_realization, search_with, thm31_certificate, wide_descent,
    yf5_decomposition, Assignment, RealizerError, SearchOptions, Strategy,
};

fn chords_of(a: &Assignment, syms: &[zonekit::Sym]) -> Vec<zonekit::geom::Chord> {
    syms.iter().map(|&s| a.chord(s).unwrap().clone()).collect()
}

/// Same order, only the given groups.
fn relaxed(cfg: &Config, concave: Vec<Vec<zonekit::Sym>>, wide: Vec<Vec<zonekit::Sym>>) -> Config {
    let mut c = cfg.clone();
    c.concave_groups = concave;
    c.wide_groups = wide;
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn found_assignments_recheck(seed: u64, which in 0usize..4) {
        let kind = [
            ConfigKind::F { m: 3, wide: false },
            ConfigKind::F { m: 4, wide: true },
            ConfigKind::Z { m: 1 },
            ConfigKind::Y,
        ][which];
        let cfg = build_config(kind).unwrap();
        if let Some(a) = search_realization(&cfg, 20_000, seed) {
            prop_assert!(assign_check(&cfg, &a).unwrap().all_ok());
        }
    }
}

#[test]
fn positive_controls_are_found() {
    for kind in [ConfigKind::F { m: 3, wide: false }, ConfigKind::F { m: 4, wide: true }] {
        let cfg = build_config(kind).unwrap();
        assert!(search_realization(&cfg, 10_000, 1).is_some(), "{}", kind.name());
    }
}

#[test]
fn thm31_chain_holds_whenever_whiskers_are_concave() {
    let cfg = build_config(ConfigKind::Thm31).unwrap();
    let mut eligible = 0;
    let report = search_with(&cfg, &SearchOptions::new(30_000, 3).exhausting(), &mut |t| {
        if !t.verdict.order_ok {
            return;
        }
        match thm31_certificate(&cfg, &t.assignment()) {
            Ok(rep) => {
                eligible += 1;
                assert!(rep.chain_holds, "{rep:?}");
                assert!(rep.ps_equals_qr && rep.ps_equals_qr_prime);
                assert!(!rep.ratios_decreasing);
            }
            Err(RealizerError::Precondition(_)) => {}
            Err(e) => panic!("{e}"),
        }
    });
    assert!(report.found.is_none());
    assert!(eligible > 100, "only {eligible} trials met the preconditions");
}

#[test]
fn yf5_chains_refute_the_triple() {
    let cfg = build_config(ConfigKind::YF { m: 5 }).unwrap();
    let nums = cfg.wide_groups[0].clone();
    let def = cfg.concave_groups.iter().find(|g| g.len() == 3).unwrap().clone();
    let sub = relaxed(&cfg, vec![nums.clone()], vec![nums]);
    let mut near = 0;
    let opts = SearchOptions::new(40_000, 5).with_strategies(&[Strategy::Anneal]).exhausting();
    search_with(&sub, &opts, &mut |t| {
        if !t.verdict.all_ok() {
            return;
        }
        near += 1;
        let a = t.assignment();
        let rep = yf5_decomposition(&cfg, &a).unwrap();
        assert!(rep.beta_chain && rep.alpha_chain, "{rep:?}");
        assert!(!rep.def_profile.claim3);
        let class = intersection_order_class(&chords_of(&a, &def)).unwrap();
        assert_ne!(class, OrderClass::Concave);
    });
    assert!(near > 10, "only {near} near-realizations");
}

#[test]
fn wide_descent_ends_in_a_wide_group() {
    for n in 1..=2 {
        let cfg = build_config(ConfigKind::T { n }).unwrap();
        let sub = relaxed(&cfg, cfg.whiskers.clone(), vec![]);
        let opts = SearchOptions::new(20_000, 9).with_strategies(&[Strategy::Anneal]).exhausting();
        let mut hits = 0;
        search_with(&sub, &opts, &mut |t| {
            if !t.verdict.all_ok() {
                return;
            }
            let a = t.assignment();
            let i = wide_descent(&cfg, &a).unwrap();
            assert!(is_wide(&chords_of(&a, &cfg.numeric_groups[i])).unwrap(), "T_{n} group {i}");
            hits += 1;
        });
        assert!(hits > 0, "T_{n}: no assignment with concave whiskers");
    }
}

#[test]
fn preconditions_are_enforced() {
    let cfg = build_config(ConfigKind::T { n: 1 }).unwrap();
    let bare = relaxed(&cfg, vec![], vec![]);
    let mut convex_seen = false;
    search_with(&bare, &SearchOptions::new(2_000, 2).exhausting(), &mut |t| {
        let a = t.assignment();
        let class = intersection_order_class(&chords_of(&a, &cfg.whiskers[0])).unwrap();
        if class != OrderClass::Concave {
            convex_seen = true;
            assert!(matches!(wide_descent(&cfg, &a), Err(RealizerError::Precondition(_))));
        }
    });
    assert!(convex_seen);

    let thm = build_config(ConfigKind::Thm31).unwrap();
    let mut shuffled: Vec<_> = thm.symbols().into_iter().collect();
    shuffled.reverse();
    let a = Assignment::new(
        shuffled
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, zonekit::geom::Chord::ints(i as i64, 100 + i as i64))),
    );
    assert!(!assign_check(&thm, &a).unwrap().order_ok);
    assert!(matches!(thm31_certificate(&thm, &a), Err(RealizerError::Precondition(_))));
}

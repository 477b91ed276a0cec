mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use zonekit::geom::Chord;
use zonekit::patterns::{contains_isomorphic_budget, find_ababa, has_adjacent_repeat, has_alternation};
use zonekit::seq::{endpoint_seq, End, Seq, Sym};
use zonekit::zone::*;
use zonekit::configs::THM31_PATTERN;

fn instance() -> impl Strategy<Value = Vec<Chord>> {
    (any::<u64>(), 1usize..=9).prop_map(|(seed, n)| common::random_chords(seed, n))
}

fn endpoint_order(chords: &[Chord]) -> Vec<End> {
    let mut ends: Vec<(_, End)> = Vec::new();
    for (i, c) in chords.iter().enumerate() {
        let s = Sym(i as u64 + 1);
        ends.push((c.p().clone(), End::l(s)));
        ends.push((c.q().clone(), End::r(s)));
    }
    ends.sort_by(|a, b| a.0.cmp(&b.0));
    ends.into_iter().map(|e| e.1).collect()
}

fn is_subsequence(small: &[Sym], big: &[Sym]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| b == s))
}

fn restrict_phase(t: &Transcript, phase: Phase) -> Seq {
    Seq::from_symbols(t.tour.iter().filter(|v| v.phase == phase).map(|v| Sym(v.chord as u64 + 1)))
}

fn abab_free(s: &Seq) -> bool {
    let syms = s.symbols();
    syms.iter()
        .all(|&a| syms.iter().all(|&b| a == b || !has_alternation(s, a, b, 4)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn tour_matches_zone_cells(chords in instance()) {
        let arr = build_arrangement(&chords).unwrap();
        prop_assert_eq!(arr.euler_characteristic(), 2);
        let t = zone_tour(&arr).unwrap();
        let zc = zone_complexity(&arr);
        prop_assert_eq!(t.complexity, zc.total);
        prop_assert_eq!(t.complexity, t.s_prime.len());
        // Each visit sees exactly one zone-cell side of a chord piece.
        let mut visited: HashMap<usize, usize> = HashMap::new();
        for v in &t.tour {
            let f = arr.face_beside(v.chord, v.piece, v.rightward);
            prop_assert_eq!(arr.faces[f].kind, FaceKind::Zone);
            *visited.entry(f).or_default() += 1;
        }
        for c in &zc.cells {
            prop_assert_eq!(visited.get(&c.face).copied().unwrap_or(0), c.segment_edges);
        }
    }

    #[test]
    fn transcript_is_order3_ds(chords in instance()) {
        let t = zone_tour(&build_arrangement(&chords).unwrap()).unwrap();
        prop_assert!(!has_adjacent_repeat(&t.s));
        prop_assert!(find_ababa(&t.s).is_none());
        prop_assume!(chords.len() >= 2);
        let e = endpoint_seq(&t.s).unwrap();
        let want = endpoint_order(&chords);
        prop_assert_eq!(e.tokens(), want.as_slice());
    }

    #[test]
    fn phases_run_positive_negative_positive(chords in instance()) {
        let t = zone_tour(&build_arrangement(&chords).unwrap()).unwrap();
        for c in 0..chords.len() {
            let phases: Vec<Phase> = t.tour.iter().filter(|v| v.chord == c).map(|v| v.phase).collect();
            let rank = |p: &Phase| match p { Phase::First => 0, Phase::Second => 1, Phase::Third => 2 };
            prop_assert!(phases.windows(2).all(|w| rank(&w[0]) <= rank(&w[1])));
            prop_assert!(phases.contains(&Phase::Second));
        }
        for phase in [Phase::First, Phase::Third] {
            let r = restrict_phase(&t, phase);
            prop_assert!(!has_adjacent_repeat(&r));
            prop_assert!(abab_free(&r));
        }
    }

    #[test]
    fn pair_forms_hold(chords in instance()) {
        let arr = build_arrangement(&chords).unwrap();
        let t = zone_tour(&arr).unwrap();
        prop_assert_eq!(check_pair_forms(&arr, &t), Ok(()));
    }

    #[test]
    fn envelope_is_subsequence_of_s(chords in instance()) {
        let t = zone_tour(&build_arrangement(&chords).unwrap()).unwrap();
        let env = lower_envelope(&chords).to_seq();
        prop_assert!(is_subsequence(env.tokens(), t.s.tokens()));
    }

    #[test]
    fn reflection_reverses_s(chords in instance()) {
        let t = zone_tour(&build_arrangement(&chords).unwrap()).unwrap();
        let mirrored: Vec<Chord> = chords.iter().map(Chord::mirrored).collect();
        let m = zone_tour(&build_arrangement(&mirrored).unwrap()).unwrap();
        prop_assert_eq!(m.s, t.s.reversed());
    }
}

#[test]
fn s_avoids_the_forbidden_pattern() {
    let (u, _) = Seq::parse(THM31_PATTERN).unwrap();
    for seed in 0..40u64 {
        let chords = common::random_chords(seed, 6 + (seed % 7) as usize);
        let t = zone_tour(&build_arrangement(&chords).unwrap()).unwrap();
        let hit = contains_isomorphic_budget(&t.s, &u, 5_000_000).unwrap();
        assert!(hit.is_none(), "seed {seed}");
    }
}

#[test]
fn pairwise_crossing_fans_satisfy_euler() {
    for n in 1..=8i64 {
        // L_i = i and R_i = 100 + i²: a fan whose supporting lines avoid
        // triple points for these n.
        let chords: Vec<Chord> = (1..=n).map(|i| Chord::ints(i, 100 + i * i)).collect();
        let arr = build_arrangement(&chords).unwrap();
        let k = (n * (n - 1) / 2) as usize;
        assert_eq!(arr.crossing_count(), k);
        let v = 2 * n as usize + k;
        let e = (n as usize + 2 * k) + (2 * n as usize - 1) + 1;
        assert_eq!(arr.vertices.len(), v);
        assert_eq!(arr.edge_count(), e);
        assert_eq!(arr.faces.len() + v, e + 2);
    }
}

mod common;

use num::Signed;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use zonekit::geom::{
    circle_point, int, intersection_order_class, line_intersection, map_circle_chord,
    parabola_ratio, rat, ratio_profile, remap_chords, wide_fan_gaps, Chord, OrderClass, Point,
    Rat,
};

/// Left gaps and right endpoints both growing; usually convex.
fn growing_fan(r: &mut ChaCha8Rng, m: usize) -> Vec<Chord> {
    let mut ls = vec![0i64];
    let mut gap = r.gen_range(1..=8i64);
    for _ in 1..m {
        gap *= r.gen_range(2..=5);
        ls.push(ls.last().unwrap() + gap);
    }
    let span = ls[m - 1];
    let mut rs = vec![span + r.gen_range(1..=4 * span)];
    for _ in 1..m {
        rs.push(rs.last().unwrap() * r.gen_range(3..=6));
    }
    (0..m).map(|i| Chord::ints(ls[i], rs[i])).collect()
}

/// Second intersection of the line through circle point `e` and `p`.
fn second_circle_point(e: &Point, p: &Point) -> Point {
    let (dx, dy) = (&p.x - &e.x, &p.y - &e.y);
    let s = -(int(2) * (&e.x * &dx + &e.y * &dy)) / (&dx * &dx + &dy * &dy);
    Point::new(&e.x + &s * &dx, &e.y + &s * &dy)
}

fn concurrent(a: &Chord, b: &Chord, c: &Chord) -> bool {
    match line_intersection(a, b) {
        Some(z) => c.eval(&z.x) == z.y,
        None => false,
    }
}

#[test]
fn wide_concave_sampling_works() {
    let mut r = common::rng(5);
    for _ in 0..200 {
        let m = r.gen_range(3..=6);
        let f = common::wide_concave_fan(&mut r, m);
        assert!(wide_fan_gaps(&f).unwrap().all_dominant());
    }
}

#[test]
fn growing_fans_are_mostly_convex() {
    let mut r = common::rng(9);
    let convex = (0..200)
        .filter(|_| intersection_order_class(&growing_fan(&mut r, 4)).unwrap() == OrderClass::Convex)
        .count();
    assert!(convex > 100, "{convex}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parabola_ratio_ps_equals_qr(seed: u64) {
        let xs = common::increasing(&mut common::rng(seed), 4);
        let r = parabola_ratio(&xs[0], &xs[1], &xs[2], &xs[3]).unwrap();
        prop_assert!(r.ps_equals_qr);
        prop_assert_eq!(&r.p * &r.s, &r.q * &r.r);
    }

    #[test]
    fn concave_triples_satisfy_claims(seed: u64) {
        let f = common::concave_fan(&mut common::rng(seed), 3);
        let p = ratio_profile(&[f[0].clone(), f[1].clone(), f[2].clone()]).unwrap();
        prop_assert!(p.claim1 && p.claim2 && p.claim3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn wide_concave_dominance(seed: u64, m in 3usize..=7) {
        let f = common::wide_concave_fan(&mut common::rng(seed), m);
        prop_assert!(wide_fan_gaps(&f).unwrap().all_dominant());
    }

    #[test]
    fn subsets_keep_their_class(seed: u64, m in 3usize..=6, mask in 0u8..64) {
        let mut r = common::rng(seed);
        let (f, class) = loop {
            let f = if r.gen_bool(0.5) { common::wide_concave_fan(&mut r, m) } else { growing_fan(&mut r, m) };
            let class = intersection_order_class(&f).unwrap();
            if class != OrderClass::Neither {
                break (f, class);
            }
        };
        let sub: Vec<Chord> = f.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| c.clone()).collect();
        if sub.len() >= 3 {
            prop_assert_eq!(intersection_order_class(&sub).unwrap(), class);
        }
    }

    #[test]
    fn positive_affine_maps_keep_the_class(seed: u64, m in 2usize..=6) {
        let mut r = common::rng(seed);
        let f = common::random_fan(&mut r, m, 30);
        let a = common::random_rat(&mut r, 5).abs() + rat(1, 3);
        let b = common::random_rat(&mut r, 50);
        let g = remap_chords(&f, &a, &b).unwrap();
        prop_assert_eq!(intersection_order_class(&g).unwrap(), intersection_order_class(&f).unwrap());
    }

    #[test]
    fn circle_map_preserves_concurrency(seed: u64) {
        let mut r = common::rng(seed);
        let pt = |r: &mut ChaCha8Rng| circle_point(&common::random_rat(r, 6));
        let (a, b, c, d, e) = (pt(&mut r), pt(&mut r), pt(&mut r), pt(&mut r), pt(&mut r));
        let top = Point::new(int(0), int(1));
        prop_assume!([&a, &b, &c, &d, &e].iter().all(|p| **p != top));
        prop_assume!(a != c && b != d);
        // P = AC ∩ BD, computed on the circle's own lines.
        let cross = |p1: &Point, p2: &Point, p3: &Point, p4: &Point| -> Option<Point> {
            let den = (&p1.x - &p2.x) * (&p3.y - &p4.y) - (&p1.y - &p2.y) * (&p3.x - &p4.x);
            if den == Rat::from_integer(0.into()) {
                return None;
            }
            let t = ((&p1.x - &p3.x) * (&p3.y - &p4.y) - (&p1.y - &p3.y) * (&p3.x - &p4.x)) / den;
            Some(Point::new(&p1.x + &t * (&p2.x - &p1.x), &p1.y + &t * (&p2.y - &p1.y)))
        };
        let Some(p) = cross(&a, &c, &b, &d) else { return Ok(()) };
        prop_assume!(p != e && p.y != int(1));
        let f = second_circle_point(&e, &p);
        prop_assume!(f != top && f != e);
        let chords: Vec<_> = [(&a, &c), (&b, &d), (&e, &f)]
            .iter()
            .map(|(u, v)| map_circle_chord(u, v))
            .collect();
        prop_assume!(chords.iter().all(|c| c.is_ok()));
        let ch: Vec<Chord> = chords.into_iter().map(Result::unwrap).collect();
        prop_assume!(line_intersection(&ch[0], &ch[1]).is_some());
        prop_assert!(concurrent(&ch[0], &ch[1], &ch[2]));
    }
}

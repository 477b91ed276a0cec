//! Generators shared by the integration tests.
#![allow(dead_code)]

use num::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zonekit::geom::{int, intersection_order_class, is_wide, rat, Chord, OrderClass, Rat};
use zonekit::zone::validate_general_position;
use zonekit::{Block, Seq, Sym};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn push_distinct(tokens: &mut Vec<Sym>, s: Sym) -> bool {
    if tokens.last() == Some(&s) {
        return false;
    }
    tokens.push(s);
    true
}

/// A sequence with `blocks` special blocks of `len` fresh symbols each:
/// every first occurrence sits in a block, no block holds a last
/// occurrence, and adjacent tokens differ.
pub fn blocked_seq(r: &mut ChaCha8Rng, blocks: usize, len: usize) -> Seq {
    let mut tokens: Vec<Sym> = Vec::new();
    let mut spans = Vec::new();
    let mut next = 1u64;
    let filler = |r: &mut ChaCha8Rng, tokens: &mut Vec<Sym>, next: u64| {
        if next == 1 {
            return;
        }
        for _ in 0..r.gen_range(0..=3) {
            push_distinct(tokens, Sym(r.gen_range(1..next)));
        }
    };
    for _ in 0..blocks {
        filler(r, &mut tokens, next);
        spans.push(Block::new(tokens.len(), len));
        for _ in 0..len {
            tokens.push(Sym(next));
            next += 1;
        }
    }
    filler(r, &mut tokens, next);
    // Every block symbol needs a later occurrence.
    let mut pending: Vec<Sym> = (1..next).map(Sym).collect();
    pending.shuffle(r);
    for s in pending {
        let seen_after = spans
            .iter()
            .find(|b: &&Block| b.range().any(|i| tokens[i] == s))
            .map(|b| tokens[b.end()..].contains(&s))
            .unwrap_or(true);
        if !seen_after && !push_distinct(&mut tokens, s) {
            // A lone symbol has to repeat itself.
            let Some(&other) = tokens.iter().rev().nth(1) else {
                tokens.push(s);
                continue;
            };
            tokens.push(other);
            tokens.push(s);
        }
    }
    Seq::new(tokens, spans).expect("valid blocks")
}

/// Random sequence over `n` symbols without adjacent repeats.
pub fn plain_seq(r: &mut ChaCha8Rng, n: u64, len: usize) -> Seq {
    let mut tokens = Vec::with_capacity(len);
    while tokens.len() < len {
        let s = Sym(r.gen_range(1..=n));
        push_distinct(&mut tokens, s);
    }
    Seq::from_symbols(tokens)
}

/// `m` chords in fan order `L_1 < … < L_m < R_1 < … < R_m` with integer
/// gaps drawn from `1..=max_gap`.
pub fn random_fan(r: &mut ChaCha8Rng, m: usize, max_gap: i64) -> Vec<Chord> {
    let mut xs = vec![r.gen_range(-50..50i64)];
    for _ in 1..2 * m {
        let last = *xs.last().unwrap();
        xs.push(last + r.gen_range(1..=max_gap));
    }
    (0..m).map(|i| Chord::ints(xs[i], xs[m + i])).collect()
}

/// Random rational in `[-bound, bound]` with denominator up to 12.
pub fn random_rat(r: &mut ChaCha8Rng, bound: i64) -> Rat {
    let d = r.gen_range(1..=12);
    rat(r.gen_range(-bound * d..=bound * d), d)
}

/// Strictly increasing rationals.
pub fn increasing(r: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    let mut v = vec![random_rat(r, 20)];
    for _ in 1..n {
        let step = random_rat(r, 10).abs() + rat(1, 7);
        v.push(v.last().unwrap() + step);
    }
    v
}

pub fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| int(x)).collect()
}

/// A fan that is concave, by rejection.
pub fn concave_fan(r: &mut ChaCha8Rng, m: usize) -> Vec<Chord> {
    loop {
        let f = random_fan(r, m, 40);
        if intersection_order_class(&f).unwrap() == OrderClass::Concave {
            return f;
        }
    }
}

/// A wide concave fan: left gaps shrink and right endpoints grow by
/// random factors, then rejection keeps the wide concave ones (a few
/// percent to most draws, depending on `m`).
pub fn wide_concave_fan(r: &mut ChaCha8Rng, m: usize) -> Vec<Chord> {
    loop {
        let mut ls = vec![0i64];
        let mut gap = 1i64 << 30;
        for _ in 1..m {
            gap = (gap / r.gen_range(4..=16)).max(1);
            ls.push(ls.last().unwrap() + gap);
        }
        let mut rs = vec![ls[m - 1] * r.gen_range(2..=6)];
        for _ in 1..m {
            rs.push(rs.last().unwrap() * r.gen_range(3..=12));
        }
        let fan: Vec<Chord> = (0..m).map(|i| Chord::ints(ls[i], rs[i])).collect();
        if is_wide(&fan).unwrap() && intersection_order_class(&fan).unwrap() == OrderClass::Concave {
            return fan;
        }
    }
}

/// Random chords with distinct integer endpoints in general position.
pub fn random_chords(seed: u64, n: usize) -> Vec<Chord> {
    let mut rng = rng(seed);
    loop {
        let mut xs: Vec<i64> = (-40..=40).collect();
        xs.shuffle(&mut rng);
        let chords: Vec<Chord> = (0..n)
            .map(|i| Chord::between(int(xs[2 * i]), int(xs[2 * i + 1])).unwrap())
            .collect();
        if validate_general_position(&chords).ok() {
            return chords;
        }
    }
}

//! Hart–Sharir sequences `S_k(m)` and their size recurrences.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use serde::Serialize;
use thiserror::Error;

use crate::patterns;
use crate::seq::{self, Block, Seq, SeqError, Sym};

/// Default token budget for materialization.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HsError {
    #[error("k and m must both be at least 1 (got k={k}, m={m})")]
    InvalidParams { k: u32, m: u64 },
    #[error("S_{k}({m}) needs {length} tokens, over the budget of {budget}", k = .0.k, m = .0.m, length = .0.length, budget = .0.budget)]
    BudgetExceeded(Box<HsSizeEstimate>),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HsParams {
    pub k: u32,
    pub m: u64,
}

impl HsParams {
    pub fn new(k: u32, m: u64) -> Result<Self, HsError> {
        if k == 0 || m == 0 {
            return Err(HsError::InvalidParams { k, m });
        }
        Ok(HsParams { k, m })
    }
}

/// An exact count, or a lower bound when the exact value overflowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Count {
    Exact(u128),
    AtLeast(u128),
}

impl Count {
    pub fn exact(self) -> Option<u128> {
        match self {
            Count::Exact(v) => Some(v),
            Count::AtLeast(_) => None,
        }
    }

    pub fn lower_bound(self) -> u128 {
        match self {
            Count::Exact(v) | Count::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Exact(v) => write!(f, "{v}"),
            Count::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HsSizeEstimate {
    pub k: u32,
    pub m: u64,
    pub length: Count,
    pub block_count: Count,
    pub block_length: u64,
    pub distinct_symbols: Count,
    pub budget: u128,
    pub feasible: bool,
}

#[derive(Debug, Clone, Copy)]
struct Size {
    len: Count,
    blocks: Count,
    distinct: Count,
}

impl Size {
    fn exact(len: u128, blocks: u128, distinct: u128) -> Self {
        Size {
            len: Count::Exact(len),
            blocks: Count::Exact(blocks),
            distinct: Count::Exact(distinct),
        }
    }

    fn is_exact(&self) -> bool {
        matches!(
            (self.len, self.blocks, self.distinct),
            (Count::Exact(_), Count::Exact(_), Count::Exact(_))
        )
    }

    /// Turns every count into a lower bound.
    fn bound(self) -> Self {
        Size {
            len: Count::AtLeast(self.len.lower_bound()),
            blocks: Count::AtLeast(self.blocks.lower_bound()),
            distinct: Count::AtLeast(self.distinct.lower_bound()),
        }
    }
}

fn size_of(k: u32, m: u64) -> Size {
    let m128 = m as u128;
    match k {
        1 => Size::exact(3 * m128 - 2, 1, m128),
        2 => Size::exact(7 * m128 - 3, 2, 2 * m128),
        _ => {
            let base = size_of(k - 1, 2);
            let mut cur = Size {
                blocks: match base.blocks {
                    Count::Exact(b) => Count::Exact(2 * b),
                    c => c,
                },
                ..base
            };
            for _ in 2..=m {
                if !cur.is_exact() {
                    return cur.bound();
                }
                let (a_len, n, a_dist) = (
                    cur.len.lower_bound(),
                    cur.blocks.lower_bound(),
                    cur.distinct.lower_bound(),
                );
                let Ok(n64) = u64::try_from(n) else {
                    return cur.bound();
                };
                let g = size_of(k - 1, n64);
                if !g.is_exact() {
                    // S_k(m) contains the global copy of S_{k-1}(N).
                    return Size {
                        len: Count::AtLeast(g.len.lower_bound().max(a_len)),
                        blocks: Count::AtLeast(n),
                        distinct: Count::AtLeast(g.distinct.lower_bound().max(a_dist)),
                    };
                }
                let (b_len, l, b_dist) = (
                    g.len.lower_bound(),
                    g.blocks.lower_bound(),
                    g.distinct.lower_bound(),
                );
                // ℓ copies of A, each grown by N globals, N duplicates and
                // one trailing global, spliced over ℓ blocks of length N.
                let len = a_len
                    .checked_add(n)
                    .and_then(|x| x.checked_add(1))
                    .and_then(|x| x.checked_mul(l))
                    .and_then(|x| x.checked_add(b_len));
                let blocks = l.checked_mul(n);
                let distinct = l.checked_mul(a_dist).and_then(|x| x.checked_add(b_dist));
                cur = match (len, blocks, distinct) {
                    (Some(a), Some(b), Some(c)) => Size::exact(a, b, c),
                    _ => {
                        return Size {
                            len: Count::AtLeast(u128::MAX),
                            blocks: Count::AtLeast(blocks.unwrap_or(u128::MAX)),
                            distinct: Count::AtLeast(distinct.unwrap_or(u128::MAX)),
                        }
                    }
                };
            }
            cur
        }
    }
}

/// Exact sizes of `S_k(m)` from the shuffle arithmetic, without building it.
pub fn hs_size(p: HsParams, budget: u128) -> HsSizeEstimate {
    let s = size_of(p.k, p.m);
    HsSizeEstimate {
        k: p.k,
        m: p.m,
        length: s.len,
        block_count: s.blocks,
        block_length: p.m,
        distinct_symbols: s.distinct,
        budget,
        feasible: matches!(s.len, Count::Exact(l) if l <= budget),
    }
}

/// `S_1(m) = (1 … m) (m-1) … 1 2 … m`.
fn s1(m: u64) -> Seq {
    let mut t: Vec<u64> = (1..=m).collect();
    t.extend((1..m).rev());
    t.extend(2..=m);
    Seq::new(t.into_iter().map(Sym).collect(), vec![Block::new(0, m as usize)])
        .expect("single block in range")
}

/// Generates `S_k(m)`, refusing when the predicted length exceeds `budget`.
pub fn hart_sharir(p: HsParams, budget: u128) -> Result<Seq, HsError> {
    let est = hs_size(p, budget);
    if !est.feasible {
        return Err(HsError::BudgetExceeded(Box::new(est)));
    }
    let mut memo = HashMap::new();
    let s = generate(p.k, p.m, &mut memo)?;
    drop(memo);
    Ok(Rc::unwrap_or_clone(s))
}

fn generate(k: u32, m: u64, memo: &mut HashMap<(u32, u64), Rc<Seq>>) -> Result<Rc<Seq>, HsError> {
    if let Some(s) = memo.get(&(k, m)) {
        return Ok(Rc::clone(s));
    }
    let s = if k == 1 {
        s1(m)
    } else if m == 1 {
        let base = generate(k - 1, 2, memo)?;
        let blocks = base
            .blocks()
            .iter()
            .flat_map(|b| [Block::new(b.start, 1), Block::new(b.start + 1, 1)])
            .collect();
        Seq::new(base.tokens().to_vec(), blocks)?
    } else {
        let a = generate(k, m - 1, memo)?;
        let b = generate(k - 1, a.blocks().len() as u64, memo)?;
        seq::shuffle(&a, &b)?
    };
    let s = Rc::new(s);
    memo.insert((k, m), Rc::clone(&s));
    Ok(s)
}

/// One failed invariant of a generated sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HsViolation {
    pub check: &'static str,
    pub detail: String,
}

/// Runs the invariant suite on a generated `S_k(m)`:
/// block invariants with block length `m`, no adjacent repeats, no
/// `ababa`, no `abcaccbc`, every symbol at least twice (unless
/// `k = m = 1`), the per-block `N` shape, and clamping of every symbol of
/// rank at least 2 (left) and every symbol but the last (right).
pub fn verify(s: &Seq, p: HsParams) -> Vec<HsViolation> {
    let mut out = Vec::new();
    let mut fail = |check: &'static str, detail: String| out.push(HsViolation { check, detail });

    let report = s.block_report();
    if let Some(v) = report.violation {
        fail("blocks", v.to_string());
    } else if report.block_len != Some(p.m as usize) {
        fail("blocks", format!("block length {:?}, expected {}", report.block_len, p.m));
    }
    if let Some(w) = s.tokens().windows(2).position(|w| w[0] == w[1]) {
        fail("adjacent-distinct", format!("repeat at index {w}"));
    }
    if let Some(w) = patterns::find_ababa(s) {
        fail("ababa", format!("at {w:?}"));
    }
    if let Some(w) = patterns::find_abcaccbc(s) {
        fail("abcaccbc", format!("at {w:?}"));
    }
    if !(p.k == 1 && p.m == 1) {
        if let Some((x, _)) = s.occurrence_counts().into_iter().find(|&(_, c)| c < 2) {
            fail("two-occurrences", format!("symbol {x} occurs once"));
        }
    }
    for (i, b) in s.blocks().iter().enumerate() {
        if !block_has_n_shape(s, i) {
            fail("n-shape", format!("block {i} at {}", b.start));
        }
    }
    let last_sym = s.tokens().last().copied();
    let mut checked = HashSet::new();
    for &x in s.tokens() {
        if !checked.insert(x) {
            continue;
        }
        if s.rank_of(x).map_or(false, |r| r >= 2)
            && !patterns::is_left_clamped(s, x).unwrap_or(false)
        {
            fail("left-clamped", format!("symbol {x}"));
        }
        if Some(x) != last_sym && !patterns::is_right_clamped(s, x).unwrap_or(false) {
            fail("right-clamped", format!("symbol {x}"));
        }
    }
    out
}

/// Block `(x1 … xm)` is immediately followed by `x(m-1) … x1` and later
/// by `x2 … xm` in order.
pub fn block_has_n_shape(s: &Seq, i: usize) -> bool {
    let b = s.blocks()[i];
    let t = s.tokens();
    let block = &t[b.range()];
    let m = block.len();
    let back: Vec<Sym> = block[..m.saturating_sub(1)].iter().rev().copied().collect();
    let after = b.end() + back.len();
    if after > t.len() || t[b.end()..after] != back[..] {
        return false;
    }
    let mut from = after;
    for &x in block.iter().skip(1) {
        match t[from..].iter().position(|&y| y == x) {
            Some(p) => from += p + 1,
            None => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hs(k: u32, m: u64) -> Seq {
        hart_sharir(HsParams::new(k, m).unwrap(), DEFAULT_BUDGET).unwrap()
    }

    fn p(s: &str) -> Seq {
        Seq::parse_plain(s).unwrap()
    }

    #[test]
    fn printed_listing() {
        assert_eq!(hs(1, 2), p("(12)12"));
        assert_eq!(hs(2, 1), p("(1)(2)12"));
        assert_eq!(hs(2, 2), p("(12)1(34)313424"));
        assert_eq!(hs(2, 3), p("(123)21(456)5414525636"));
        assert_eq!(hs(3, 1), p("(1)(2)1(3)(4)313424"));
    }

    #[test]
    fn invalid_params() {
        assert_eq!(HsParams::new(0, 2), Err(HsError::InvalidParams { k: 0, m: 2 }));
    }

    #[test]
    fn size_closed_forms() {
        let est = hs_size(HsParams::new(2, 1).unwrap(), DEFAULT_BUDGET);
        assert_eq!(est.length, Count::Exact(4));
        for m in 1..=6 {
            let est = hs_size(HsParams::new(2, m).unwrap(), DEFAULT_BUDGET);
            assert_eq!(est.length, Count::Exact(7 * m as u128 - 3));
            assert_eq!(est.block_count, Count::Exact(2));
            assert_eq!(hs(2, m).len() as u128, 7 * m as u128 - 3);
        }
    }

    #[test]
    fn s7_is_infeasible() {
        let est = hs_size(HsParams::new(7, 2).unwrap(), u128::MAX);
        assert!(!est.feasible);
        assert!(matches!(est.length, Count::AtLeast(_)));
        assert!(est.length.lower_bound() > DEFAULT_BUDGET);
        let err = hart_sharir(HsParams::new(7, 2).unwrap(), DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, HsError::BudgetExceeded(_)));
    }

    #[test]
    fn budget_blocks_s42_by_default_size() {
        let est = hs_size(HsParams::new(4, 2).unwrap(), 1_000_000);
        assert_eq!(est.length, Count::Exact(18_874_369));
        assert!(!est.feasible);
    }

    #[test]
    fn n_shape_per_block() {
        let s = hs(2, 3);
        assert!((0..s.blocks().len()).all(|i| block_has_n_shape(&s, i)));
        assert!(!block_has_n_shape(&p("(12)21"), 0));
    }

    #[test]
    fn verify_small() {
        for (k, m) in [(1, 1), (1, 3), (2, 2), (3, 1), (3, 2)] {
            let s = hs(k, m);
            assert_eq!(verify(&s, HsParams::new(k, m).unwrap()), vec![], "S_{k}({m})");
        }
    }
}

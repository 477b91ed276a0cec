//! Forbidden-pattern queries on sequences: alternations, the order-3
//! Davenport–Schinzel test, isomorphic and structural containment,
//! sparsity, clamping, and an exhaustive extremal-length oracle.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::seq::{ESeq, End, Seq, Sym};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern of length {len} exceeds the matcher limit of {limit}")]
    PatternTooLong { len: usize, limit: usize },
    #[error("search exceeded its step budget of {0}")]
    StepBudget(u64),
    #[error("exhaustive search supports n <= {limit}, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("the forbidden set is empty or contains an empty pattern")]
    EmptyForbidden,
    #[error("symbol {0} does not occur")]
    SymbolAbsent(Sym),
    #[error("rank list has {got} entries but the pattern block length is {want}")]
    RankArity { got: usize, want: usize },
}

/// Longest pattern accepted by the backtracking matchers.
pub const MAX_PATTERN_LEN: usize = 64;
/// Default number of search nodes a single containment query may visit.
pub const DEFAULT_STEP_BUDGET: u64 = 200_000_000;

/// An embedding of a pattern into a host sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternWitness {
    /// Pattern symbol to host symbol, in order of first appearance in the pattern.
    pub mapping: Vec<(Sym, Sym)>,
    /// Host index of every pattern token.
    pub positions: Vec<usize>,
}

impl PatternWitness {
    pub fn map(&self) -> HashMap<Sym, Sym> {
        self.mapping.iter().copied().collect()
    }

    /// Checks the witness against host and pattern from scratch.
    pub fn verify(&self, host: &Seq, pattern: &Seq) -> bool {
        let map = self.map();
        let injective = map.values().collect::<HashSet<_>>().len() == map.len();
        injective
            && self.positions.len() == pattern.len()
            && self.positions.windows(2).all(|w| w[0] < w[1])
            && self
                .positions
                .iter()
                .zip(pattern.tokens())
                .all(|(&p, t)| p < host.len() && map.get(t) == Some(&host.tokens()[p]))
    }
}

/// True iff `s` contains an alternation of `a` and `b` of length `len`,
/// starting with either symbol.
pub fn has_alternation(s: &Seq, a: Sym, b: Sym, len: usize) -> bool {
    alternation_length(s, a, b) >= len
}

/// Length of the longest `a`/`b` alternation in `s`.
pub fn alternation_length(s: &Seq, a: Sym, b: Sym) -> usize {
    let mut runs = 0;
    let mut last = None;
    for &t in s.tokens() {
        if (t == a || t == b) && last != Some(t) {
            runs += 1;
            last = Some(t);
        }
    }
    runs
}

/// Positions `(a, b, a, b, a)` of an `ababa` occurrence.
pub type AbabaWitness = [usize; 5];

/// Finds an `ababa` in `O(n log n)`.
///
/// An `ababa` exists iff some consecutive pair of occurrences `i < j` of a
/// symbol `b` encloses a position whose symbol occurs before `i` and after
/// `j`. Queries are answered offline in order of `i`, with a max segment
/// tree over last-occurrence indices of the symbols already started.
pub fn find_ababa(s: &Seq) -> Option<AbabaWitness> {
    let t = s.tokens();
    let n = t.len();
    if n < 5 {
        return None;
    }
    let first = s.first_positions();
    let last = s.last_positions();

    let mut queries = Vec::new();
    let mut prev: HashMap<Sym, usize> = HashMap::new();
    for (j, &sym) in t.iter().enumerate() {
        if let Some(i) = prev.insert(sym, j) {
            if j > i + 1 {
                queries.push((i, j));
            }
        }
    }
    queries.sort_unstable();

    let mut by_first: Vec<usize> = (0..n).collect();
    by_first.sort_by_key(|&p| first[&t[p]]);

    let mut tree = MaxTree::new(n);
    let mut next = 0;
    for (i, j) in queries {
        while next < n && first[&t[by_first[next]]] < i {
            let p = by_first[next];
            tree.set(p, last[&t[p]], p);
            next += 1;
        }
        if let Some((value, p)) = tree.max(i + 1, j) {
            if value > j {
                let a = t[p];
                return Some([first[&a], i, p, j, last[&a]]);
            }
        }
    }
    None
}

/// Max segment tree over positions, storing `(value, position)`.
struct MaxTree {
    size: usize,
    data: Vec<Option<(usize, usize)>>,
}

impl MaxTree {
    fn new(n: usize) -> Self {
        let size = n.next_power_of_two().max(1);
        MaxTree {
            size,
            data: vec![None; 2 * size],
        }
    }

    fn set(&mut self, pos: usize, value: usize, tag: usize) {
        let mut i = pos + self.size;
        self.data[i] = Some((value, tag));
        while i > 1 {
            i /= 2;
            self.data[i] = self.data[2 * i].max(self.data[2 * i + 1]);
        }
    }

    /// Maximum over the half-open range `lo..hi`.
    fn max(&self, lo: usize, hi: usize) -> Option<(usize, usize)> {
        let (mut l, mut r) = (lo + self.size, hi + self.size);
        let mut best = None;
        while l < r {
            if l & 1 == 1 {
                best = best.max(self.data[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                best = best.max(self.data[r]);
            }
            l /= 2;
            r /= 2;
        }
        best
    }
}

pub fn has_adjacent_repeat(s: &Seq) -> bool {
    s.tokens().windows(2).any(|w| w[0] == w[1])
}

/// No adjacent repetitions and no `ababa`.
pub fn is_ds_order3(s: &Seq) -> bool {
    !has_adjacent_repeat(s) && find_ababa(s).is_none()
}

/// Every window of `k` adjacent tokens is pairwise distinct.
pub fn is_k_sparse(s: &Seq, k: usize) -> bool {
    if k <= 1 {
        return true;
    }
    let t = s.tokens();
    let mut count: HashMap<Sym, usize> = HashMap::new();
    let mut dupes = 0usize;
    for i in 0..t.len() {
        let c = count.entry(t[i]).or_insert(0);
        *c += 1;
        if *c == 2 {
            dupes += 1;
        }
        if i >= k {
            let c = count.get_mut(&t[i - k]).expect("window symbol counted");
            if *c == 2 {
                dupes -= 1;
            }
            *c -= 1;
        }
        if dupes > 0 {
            return false;
        }
    }
    true
}

/// Positions of one `a b c a c c b c` occurrence, or `None`.
///
/// For each ordered pair `(b, c)` the outer occurrences are placed
/// greedily (earliest `b c` from the left, latest `c c b c` from the
/// right) and a range-minimum over first-occurrence indices decides
/// whether some `a` started before `b` and reappears between the two `c`s.
pub fn find_abcaccbc(s: &Seq) -> Option<[usize; 8]> {
    let t = s.tokens();
    let n = t.len();
    if n < 8 {
        return None;
    }
    let first = s.first_positions();
    let mut occ: HashMap<Sym, Vec<usize>> = HashMap::new();
    for (i, &x) in t.iter().enumerate() {
        occ.entry(x).or_default().push(i);
    }
    let first_at: Vec<usize> = t.iter().map(|x| first[x]).collect();
    let rmq = MinTable::new(&first_at);

    let syms = s.symbols();
    for &b in &syms {
        let ob = &occ[&b];
        if ob.len() < 2 {
            continue;
        }
        let b1 = ob[0];
        if b1 == 0 {
            continue;
        }
        for &c in &syms {
            let oc = &occ[&c];
            if c == b || oc.len() < 4 {
                continue;
            }
            // c1: first c after b1.
            let k1 = oc.partition_point(|&p| p <= b1);
            if k1 >= oc.len() {
                continue;
            }
            let c1 = oc[k1];
            // From the right: c4 = last c, b2 = last b before c4,
            // c3 = last c before b2, c2 = last c before c3.
            let c4 = *oc.last().expect("nonempty");
            let kb = ob.partition_point(|&p| p < c4);
            if kb == 0 {
                continue;
            }
            let b2 = ob[kb - 1];
            let k3 = oc.partition_point(|&p| p < b2);
            if k3 < 2 {
                continue;
            }
            let (c3, c2) = (oc[k3 - 1], oc[k3 - 2]);
            if c2 <= c1 || b2 <= b1 {
                continue;
            }
            // a2 in (c1, c2), avoiding c positions, with first(a) < b1.
            let mut lo = c1 + 1;
            for &cp in &oc[k1 + 1..=k3 - 2] {
                if lo < cp {
                    if let Some(p) = rmq.argmin(lo, cp) {
                        if first_at[p] < b1 {
                            return Some([first_at[p], b1, c1, p, c2, c3, b2, c4]);
                        }
                    }
                }
                lo = cp + 1;
            }
        }
    }
    None
}

/// Sparse table for range-minimum queries returning an argmin.
struct MinTable {
    values: Vec<usize>,
    table: Vec<Vec<usize>>,
}

impl MinTable {
    fn new(values: &[usize]) -> Self {
        let n = values.len();
        let mut table = vec![(0..n).collect::<Vec<_>>()];
        let mut w = 1;
        while 2 * w <= n {
            let prev = table.last().expect("level");
            let row = (0..=n - 2 * w)
                .map(|i| {
                    let (x, y) = (prev[i], prev[i + w]);
                    if values[y] < values[x] {
                        y
                    } else {
                        x
                    }
                })
                .collect();
            table.push(row);
            w *= 2;
        }
        MinTable {
            values: values.to_vec(),
            table,
        }
    }

    /// Argmin over the half-open range `lo..hi`.
    fn argmin(&self, lo: usize, hi: usize) -> Option<usize> {
        if lo >= hi {
            return None;
        }
        let level = (usize::BITS - 1 - (hi - lo).leading_zeros()) as usize;
        let row = &self.table[level];
        let (x, y) = (row[lo], row[hi - (1 << level)]);
        Some(if self.values[y] < self.values[x] { y } else { x })
    }
}

/// Occurrence lists of every host symbol.
struct Host<'a> {
    tokens: &'a [Sym],
    occ: HashMap<Sym, Vec<usize>>,
}

impl<'a> Host<'a> {
    fn new(tokens: &'a [Sym]) -> Self {
        let mut occ: HashMap<Sym, Vec<usize>> = HashMap::new();
        for (i, &x) in tokens.iter().enumerate() {
            occ.entry(x).or_default().push(i);
        }
        Host { tokens, occ }
    }

    /// Index into `occ[x]` of the first occurrence at or after `from`.
    fn next_index(&self, x: Sym, from: usize) -> (usize, &[usize]) {
        let o = &self.occ[&x];
        (o.partition_point(|&p| p < from), o)
    }
}

/// Block constraints for structural containment.
struct Structure<'a> {
    host: &'a Seq,
    /// Block of the first occurrence of each pattern symbol, by pattern index.
    pattern_block: Vec<Option<usize>>,
    /// Required host rank for each pattern symbol, by pattern index.
    rank: Vec<Option<usize>>,
}

struct Matcher<'a> {
    host: Host<'a>,
    pattern: Vec<usize>,
    /// Remaining occurrences of each pattern symbol from position t on.
    remaining: Vec<Vec<usize>>,
    symbols: Vec<Sym>,
    structure: Option<Structure<'a>>,
    steps: u64,
    budget: u64,
}

struct MatchState {
    map: Vec<Option<Sym>>,
    host_block: Vec<Option<usize>>,
    used: HashSet<Sym>,
    positions: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(host: &'a [Sym], pattern: &Seq, budget: u64) -> Result<Self, PatternError> {
        if pattern.len() > MAX_PATTERN_LEN {
            return Err(PatternError::PatternTooLong {
                len: pattern.len(),
                limit: MAX_PATTERN_LEN,
            });
        }
        let symbols = pattern.symbols();
        let index: HashMap<Sym, usize> = symbols.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let pat: Vec<usize> = pattern.tokens().iter().map(|s| index[s]).collect();
        let mut remaining = vec![vec![0; symbols.len()]; pat.len() + 1];
        for t in (0..pat.len()).rev() {
            remaining[t] = remaining[t + 1].clone();
            remaining[t][pat[t]] += 1;
        }
        Ok(Matcher {
            host: Host::new(host),
            pattern: pat,
            remaining,
            symbols,
            structure: None,
            steps: 0,
            budget,
        })
    }

    fn run(mut self) -> Result<Option<PatternWitness>, PatternError> {
        let k = self.symbols.len();
        let mut st = MatchState {
            map: vec![None; k],
            host_block: vec![None; k],
            used: HashSet::new(),
            positions: Vec::with_capacity(self.pattern.len()),
        };
        if self.search(0, 0, &mut st)? {
            let mapping = self
                .symbols
                .iter()
                .zip(&st.map)
                .map(|(&p, h)| (p, h.expect("all pattern symbols mapped")))
                .collect();
            Ok(Some(PatternWitness {
                mapping,
                positions: st.positions,
            }))
        } else {
            Ok(None)
        }
    }

    fn admissible(&self, x: usize, pos: usize, st: &MatchState) -> Option<Option<usize>> {
        let Some(sc) = &self.structure else {
            return Some(None);
        };
        let hb = sc.host.block_of(pos);
        if let Some(want) = sc.pattern_block[x] {
            let hb = hb?;
            if let Some(r) = sc.rank[x] {
                if pos - sc.host.blocks()[hb].start + 1 != r {
                    return None;
                }
            }
            for y in 0..self.symbols.len() {
                if let (Some(_), Some(py)) = (st.map[y], sc.pattern_block[y]) {
                    if (py == want) != (st.host_block[y] == Some(hb)) {
                        return None;
                    }
                }
            }
        }
        Some(hb)
    }

    fn search(&mut self, t: usize, from: usize, st: &mut MatchState) -> Result<bool, PatternError> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(PatternError::StepBudget(self.budget));
        }
        if t == self.pattern.len() {
            return Ok(true);
        }
        let x = self.pattern[t];
        if let Some(h) = st.map[x] {
            let (i, o) = self.host.next_index(h, from);
            if i >= o.len() {
                return Ok(false);
            }
            let p = o[i];
            st.positions.push(p);
            if self.search(t + 1, p + 1, st)? {
                return Ok(true);
            }
            st.positions.pop();
            return Ok(false);
        }
        let need = self.remaining[t][x];
        let tokens = self.host.tokens;
        let mut tried = HashSet::new();
        for p in from..tokens.len() {
            let h = tokens[p];
            if st.used.contains(&h) || !tried.insert(h) {
                continue;
            }
            let (i, o) = self.host.next_index(h, from);
            if o[i] != p {
                continue;
            }
            if o.len() - i < need {
                continue;
            }
            let Some(hb) = self.admissible(x, p, st) else {
                continue;
            };
            st.map[x] = Some(h);
            st.host_block[x] = hb;
            st.used.insert(h);
            st.positions.push(p);
            if self.search(t + 1, p + 1, st)? {
                return Ok(true);
            }
            st.positions.pop();
            st.used.remove(&h);
            st.map[x] = None;
            st.host_block[x] = None;
        }
        Ok(false)
    }
}

/// Finds a subsequence of `s` isomorphic to `u` under an injective
/// renaming.
pub fn contains_isomorphic(s: &Seq, u: &Seq) -> Result<Option<PatternWitness>, PatternError> {
    contains_isomorphic_budget(s, u, DEFAULT_STEP_BUDGET)
}

pub fn contains_isomorphic_budget(
    s: &Seq,
    u: &Seq,
    budget: u64,
) -> Result<Option<PatternWitness>, PatternError> {
    Matcher::new(s.tokens(), u, budget)?.run()
}

/// Structural containment of `a` in `b`: an isomorphic subsequence whose
/// first occurrences lie in special blocks of `b`, with two first
/// occurrences sharing a block of `b` exactly when they share a block of
/// `a`. With `ranks = Some([r_1, …, r_m])`, a pattern symbol of rank `i`
/// must be matched by a host symbol of rank `r_i`.
pub fn structurally_contains(
    b: &Seq,
    a: &Seq,
    ranks: Option<&[usize]>,
) -> Result<Option<PatternWitness>, PatternError> {
    let mut m = Matcher::new(b.tokens(), a, DEFAULT_STEP_BUDGET)?;
    let first = a.first_positions();
    let pattern_block: Vec<Option<usize>> =
        m.symbols.iter().map(|s| a.block_of(first[s])).collect();
    let rank = match ranks {
        None => vec![None; m.symbols.len()],
        Some(r) => {
            let width = a.blocks().first().map_or(0, |b| b.len);
            if r.len() != width {
                return Err(PatternError::RankArity {
                    got: r.len(),
                    want: width,
                });
            }
            m.symbols
                .iter()
                .map(|s| a.rank_of(*s).ok().map(|k| r[k - 1]))
                .collect()
        }
    };
    m.structure = Some(Structure {
        host: b,
        pattern_block,
        rank,
    });
    m.run()
}

/// Left-clamped: `u` contains `b a b a` where `b` immediately precedes
/// the first `a`. A symbol that opens the sequence is not left-clamped.
pub fn is_left_clamped(u: &Seq, a: Sym) -> Result<bool, PatternError> {
    let t = u.tokens();
    let f = t.iter().position(|&x| x == a).ok_or(PatternError::SymbolAbsent(a))?;
    if f == 0 {
        return Ok(false);
    }
    let b = t[f - 1];
    // b at f-1, a at f; then b, then a.
    let Some(p) = t[f + 1..].iter().position(|&x| x == b) else {
        return Ok(false);
    };
    Ok(t[f + 1 + p + 1..].contains(&a))
}

/// Right-clamped: `u` contains `a b a b` where `b` immediately follows
/// the last `a`. A symbol that closes the sequence is not right-clamped.
pub fn is_right_clamped(u: &Seq, a: Sym) -> Result<bool, PatternError> {
    let t = u.tokens();
    let l = t.iter().rposition(|&x| x == a).ok_or(PatternError::SymbolAbsent(a))?;
    if l + 1 == t.len() {
        return Ok(false);
    }
    let b = t[l + 1];
    let Some(p) = t[..l].iter().rposition(|&x| x == b) else {
        return Ok(false);
    };
    Ok(t[..p].contains(&a))
}

/// The `N`-shaped sequence `g1 … gm g(m-1) … g1 g2 … gm` over a group.
pub fn n_shape(group: &[Sym]) -> Seq {
    let m = group.len();
    let mut t = group.to_vec();
    t.extend(group[..m.saturating_sub(1)].iter().rev());
    if m > 1 {
        t.extend(&group[1..]);
    }
    Seq::from_symbols(t)
}

/// Positions of the `N`-shaped subsequence over `group` (fixed symbols,
/// no renaming), found greedily.
pub fn find_n_shape(u: &Seq, group: &[Sym]) -> Option<Vec<usize>> {
    let shape = n_shape(group);
    let mut pos = Vec::with_capacity(shape.len());
    let mut from = 0;
    for &x in shape.tokens() {
        let p = from + u.tokens()[from..].iter().position(|&y| y == x)?;
        pos.push(p);
        from = p + 1;
    }
    Some(pos)
}

/// An embedding of one endpoint sequence into another that respects
/// special blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ESeqWitness {
    pub mapping: Vec<(Sym, Sym)>,
    /// Host index of every pattern token.
    pub positions: Vec<usize>,
    /// Host block matched by every pattern block.
    pub blocks: Vec<usize>,
}

/// Containment of endpoint sequences with special blocks.
///
/// Pattern tokens map to host tokens of the same side in order, through an
/// injective symbol map. Each pattern block maps to its own host block,
/// in increasing order, with its tokens inside that block; tokens before
/// (after) a pattern block map before (after) the whole host block. An
/// empty pattern block thus asks for a host block between its neighbours.
pub fn eseq_contains(host: &ESeq, pattern: &ESeq) -> Option<ESeqWitness> {
    let events = pattern_events(pattern);
    let mut st = EState {
        map: HashMap::new(),
        used: HashSet::new(),
        positions: Vec::new(),
        blocks: Vec::new(),
    };
    let ctx = EContext {
        host,
        pos: host.positions(),
        events,
    };
    if ctx.search(0, 0, 0, None, &mut st) {
        let mapping = pattern
            .symbols()
            .into_iter()
            .map(|s| (s, st.map[&s]))
            .collect();
        Some(ESeqWitness {
            mapping,
            positions: st.positions,
            blocks: st.blocks,
        })
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy)]
enum Event {
    Open,
    Close,
    Token(End),
}

fn pattern_events(p: &ESeq) -> Vec<Event> {
    let mut ev = Vec::new();
    let mut blocks = p.blocks().iter().peekable();
    for (i, &t) in p.tokens().iter().enumerate() {
        while blocks.next_if(|b| b.start == i && b.len == 0).is_some() {
            ev.push(Event::Open);
            ev.push(Event::Close);
        }
        if blocks.peek().is_some_and(|b| b.start == i) {
            ev.push(Event::Open);
        }
        ev.push(Event::Token(t));
        if blocks.peek().is_some_and(|b| b.start <= i && b.end() == i + 1) {
            ev.push(Event::Close);
            blocks.next();
        }
    }
    for _ in blocks {
        ev.push(Event::Open);
        ev.push(Event::Close);
    }
    ev
}

struct EContext<'a> {
    host: &'a ESeq,
    pos: HashMap<End, usize>,
    events: Vec<Event>,
}

struct EState {
    map: HashMap<Sym, Sym>,
    used: HashSet<Sym>,
    positions: Vec<usize>,
    blocks: Vec<usize>,
}

impl EContext<'_> {
    /// `from`: next usable host index; `next_block`: next usable host
    /// block; `open`: end of the host block currently being filled.
    fn search(
        &self,
        e: usize,
        from: usize,
        next_block: usize,
        open: Option<usize>,
        st: &mut EState,
    ) -> bool {
        let Some(&ev) = self.events.get(e) else {
            return true;
        };
        let hb = self.host.blocks();
        match ev {
            Event::Open => {
                let empty = matches!(self.events.get(e + 1), Some(Event::Close));
                for bi in next_block..hb.len() {
                    if hb[bi].start < from {
                        continue;
                    }
                    st.blocks.push(bi);
                    if self.search(e + 1, hb[bi].start, bi + 1, Some(hb[bi].end()), st) {
                        return true;
                    }
                    st.blocks.pop();
                    if empty {
                        // The earliest block is always the best choice.
                        return false;
                    }
                }
                false
            }
            Event::Close => {
                let end = open.expect("close follows open");
                self.search(e + 1, end.max(from), next_block, None, st)
            }
            Event::Token(t) => {
                let limit = open.unwrap_or(self.host.len());
                let ok_pos = |p: usize| p >= from && p < limit;
                if let Some(&h) = st.map.get(&t.sym) {
                    let Some(&p) = self.pos.get(&End { side: t.side, sym: h }) else {
                        return false;
                    };
                    if !ok_pos(p) {
                        return false;
                    }
                    st.positions.push(p);
                    let nb = self.block_after(next_block, p, open);
                    if self.search(e + 1, p + 1, nb, open, st) {
                        return true;
                    }
                    st.positions.pop();
                    return false;
                }
                for p in from..limit {
                    let ht = self.host.tokens()[p];
                    if ht.side != t.side || st.used.contains(&ht.sym) {
                        continue;
                    }
                    st.map.insert(t.sym, ht.sym);
                    st.used.insert(ht.sym);
                    st.positions.push(p);
                    let nb = self.block_after(next_block, p, open);
                    if self.search(e + 1, p + 1, nb, open, st) {
                        return true;
                    }
                    st.positions.pop();
                    st.used.remove(&ht.sym);
                    st.map.remove(&t.sym);
                }
                false
            }
        }
    }

    /// Outside a pattern block, a token placed inside or past a host block
    /// uses that block up.
    fn block_after(&self, next_block: usize, p: usize, open: Option<usize>) -> usize {
        if open.is_some() {
            return next_block;
        }
        let hb = self.host.blocks();
        let mut nb = next_block;
        while nb < hb.len() && hb[nb].start <= p {
            nb += 1;
        }
        nb
    }
}

/// Result of the exhaustive extremal-length search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExResult {
    pub n: usize,
    pub max_length: usize,
    pub witness: Seq,
}

/// Largest `n` accepted by [`max_ds_length`].
pub const EX_MAX_N: usize = 5;

/// Exact `Ex(U, n)` by depth-first search over canonical sequences.
///
/// Sequences are built in canonical form (a new symbol is always the
/// smallest unused one), must be `k`-sparse for `k` the smallest pattern
/// alphabet, and are pruned as soon as they contain a forbidden pattern.
/// The witness is the lexicographically least longest sequence.
pub fn max_ds_length(forbidden: &[Seq], n: usize) -> Result<ExResult, PatternError> {
    if n > EX_MAX_N {
        return Err(PatternError::TooLarge { n, limit: EX_MAX_N });
    }
    if forbidden.is_empty() || forbidden.iter().any(Seq::is_empty) {
        return Err(PatternError::EmptyForbidden);
    }
    let k = forbidden.iter().map(Seq::distinct_count).min().expect("nonempty");
    let mut best = Vec::new();
    let mut cur = Vec::new();
    ex_dfs(forbidden, n, k, &mut cur, 0, &mut best)?;
    Ok(ExResult {
        n,
        max_length: best.len(),
        witness: Seq::from_symbols(best),
    })
}

fn ex_dfs(
    forbidden: &[Seq],
    n: usize,
    k: usize,
    cur: &mut Vec<Sym>,
    used: u64,
    best: &mut Vec<Sym>,
) -> Result<(), PatternError> {
    if cur.len() > best.len() {
        *best = cur.clone();
    }
    let limit = (used + 1).min(n as u64);
    for id in 1..=limit {
        let s = Sym(id);
        let window = k.saturating_sub(1).min(cur.len());
        if cur[cur.len() - window..].contains(&s) {
            continue;
        }
        cur.push(s);
        let seq = Seq::from_symbols(cur.iter().copied());
        let mut bad = false;
        for u in forbidden {
            if contains_isomorphic(&seq, u)?.is_some() {
                bad = true;
                break;
            }
        }
        if !bad {
            ex_dfs(forbidden, n, k, cur, used.max(id), best)?;
        }
        cur.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Seq {
        Seq::parse_plain(s).unwrap()
    }

    fn sym(s: &str, name: &str) -> (Seq, Sym) {
        let (q, al) = Seq::parse(s).unwrap();
        let x = al.sym(name).unwrap();
        (q, x)
    }

    const U: &str = "81ab12181cd12dedcbab34bc49434de49";

    #[test]
    fn alternation_examples() {
        let (s, al) = Seq::parse("ababa").unwrap();
        assert!(has_alternation(&s, al.sym("a").unwrap(), al.sym("b").unwrap(), 5));
        let (s, al) = Seq::parse("abcacbc").unwrap();
        let (a, b) = (al.sym("a").unwrap(), al.sym("b").unwrap());
        assert!(has_alternation(&s, a, b, 4));
        assert!(!has_alternation(&s, a, b, 5));
        let s22 = p("(12)1(34)313424");
        for a in 1..=4 {
            for b in 1..=4 {
                if a != b {
                    assert!(!has_alternation(&s22, Sym(a), Sym(b), 5));
                }
            }
        }
    }

    #[test]
    fn ds_order3_examples() {
        assert!(!is_ds_order3(&p("aa")));
        assert!(is_ds_order3(&p("abab")));
        assert_eq!(find_ababa(&p("ababa")), Some([0, 1, 2, 3, 4]));
        assert!(find_ababa(&p("axbyaxbza")).is_some());
        assert!(find_ababa(&p("abcacbc")).is_none());
    }

    #[test]
    fn sparsity_examples() {
        assert!(is_k_sparse(&p("abcabc"), 3));
        assert!(!is_k_sparse(&p("abab"), 3));
        assert!(is_k_sparse(&p("(123)21(456)5414525636"), 2));
        assert!(is_k_sparse(&p("a"), 4));
    }

    #[test]
    fn containment_examples() {
        assert!(contains_isomorphic(&p("abab"), &p("ababa")).unwrap().is_none());
        let u = p(U);
        let w = contains_isomorphic(&u, &p("abcaccbc")).unwrap().unwrap();
        assert!(w.verify(&u, &p("abcaccbc")));
        // The paper's witness "be 4b4 4e4" maps a to b, b to e, c to 4.
        let (_, al) = Seq::parse(U).unwrap();
        let want = [al.sym("b").unwrap(), al.sym("e").unwrap(), al.sym("4").unwrap()];
        let want_seq = Seq::from_symbols([0, 1, 2, 0, 2, 2, 1, 2].map(|i| want[i]));
        assert!(contains_isomorphic(&want_seq, &p("abcaccbc")).unwrap().is_some());
        assert!(contains_isomorphic(&u, &want_seq.canonical()).unwrap().is_some());
    }

    #[test]
    fn abcaccbc_detector_examples() {
        assert!(find_abcaccbc(&p("abcaccbc")).is_some());
        assert!(find_abcaccbc(&p(U)).is_some());
        assert!(find_abcaccbc(&p("abcacbc")).is_none());
        assert!(find_abcaccbc(&p("(12)1(34)313424")).is_none());
    }

    #[test]
    fn clamping_examples() {
        let (u, al) = Seq::parse(U).unwrap();
        for s in u.symbols() {
            let name = al.name(s).unwrap();
            assert_eq!(is_left_clamped(&u, s).unwrap(), name != "8", "left {name}");
            assert_eq!(is_right_clamped(&u, s).unwrap(), name != "9", "right {name}");
        }
        let (s22, two) = sym("(12)1(34)313424", "2");
        assert!(is_left_clamped(&s22, two).unwrap());
        let (ab, a) = sym("abab", "a");
        assert!(is_right_clamped(&ab, a).unwrap());
        assert!(is_left_clamped(&ab, Sym(2)).unwrap());
        assert!(!is_left_clamped(&ab, a).unwrap());
        assert!(!is_right_clamped(&ab, Sym(2)).unwrap());
        assert_eq!(is_left_clamped(&ab, Sym(9)), Err(PatternError::SymbolAbsent(Sym(9))));
    }

    #[test]
    fn structural_examples() {
        let s22 = p("(12)1(34)313424");
        let s23 = p("(123)21(456)5414525636");
        let w = structurally_contains(&s23, &s22, None).unwrap().unwrap();
        assert!(w.verify(&s23, &s22));
        let id = structurally_contains(&s22, &s22, None).unwrap().unwrap();
        assert_eq!(id.positions, (0..s22.len()).collect::<Vec<_>>());
        assert!(structurally_contains(&p("(123)21223"), &s22, None).unwrap().is_none());
        assert!(structurally_contains(&s23, &s22, Some(&[1, 3])).unwrap().is_some());
        assert!(matches!(
            structurally_contains(&s23, &s22, Some(&[1])),
            Err(PatternError::RankArity { .. })
        ));
    }

    #[test]
    fn n_shape_examples() {
        let (u, al) = Seq::parse(U).unwrap();
        let g: Vec<Sym> = ["8", "1", "2"].iter().map(|n| al.sym(n).unwrap()).collect();
        assert_eq!(n_shape(&g).len(), 7);
        assert!(find_n_shape(&u, &g).is_some());
        let bad: Vec<Sym> = ["2", "1", "8"].iter().map(|n| al.sym(n).unwrap()).collect();
        assert!(find_n_shape(&u, &bad).is_none());
    }

    #[test]
    fn eseq_containment() {
        let host = ESeq::parse_plain("(L:1 L:2) (L:3 L:4) R:1 R:3 R:2 R:4").unwrap();
        let pat = ESeq::parse_plain("(L:a) () R:a").unwrap();
        assert!(eseq_contains(&host, &pat).is_some());
        let pat = ESeq::parse_plain("(L:a) R:a ()").unwrap();
        assert!(eseq_contains(&host, &pat).is_none());
        let pat = ESeq::parse_plain("(L:a L:b) R:b R:a").unwrap();
        assert!(eseq_contains(&host, &pat).is_none());
    }

    #[test]
    fn ex_small_values() {
        assert_eq!(max_ds_length(&[p("aba")], 3).unwrap().max_length, 3);
        assert_eq!(max_ds_length(&[p("abab")], 3).unwrap().max_length, 5);
        let r = max_ds_length(&[p("ababa")], 2).unwrap();
        assert_eq!(r.max_length, 4);
        assert_eq!(r.witness, p("abab"));
        assert!(matches!(
            max_ds_length(&[p("ababa")], 6),
            Err(PatternError::TooLarge { .. })
        ));
    }
}

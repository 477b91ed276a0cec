//! Symbol sequences with special blocks, endpoint sequences, and the two
//! composition operators: the shuffle `A • B` on symbol sequences and the
//! endpoint shuffle `A ∘ B` on endpoint sequences.
//!
//! Symbols are plain 64-bit ids. Every constructor that creates fresh
//! symbols returns its result in canonical form (ids `1..=n` in order of
//! first appearance), so outputs are reproducible token for token.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("block {index} ({start}+{len}) runs past the end of a sequence of length {seq_len}")]
    BlockOutOfRange {
        index: usize,
        start: usize,
        len: usize,
        seq_len: usize,
    },
    #[error("blocks {first} and {second} overlap or are out of order")]
    BlocksOverlap { first: usize, second: usize },
    #[error("special blocks do not all have the same length")]
    NonUniformBlocks,
    #[error("block length mismatch: expected {expected}, found {found}")]
    BlockLengthMismatch { expected: usize, found: usize },
    #[error("symbol {0} occurs only once")]
    SingleOccurrence(Sym),
    #[error("symbol {0} does not occur")]
    SymbolAbsent(Sym),
    #[error("first occurrence of symbol {0} is not inside a special block")]
    FirstOccurrenceOutsideBlock(Sym),
    #[error("special block {block} contains a repeated occurrence of symbol {sym}")]
    BlockHasRepeat { block: usize, sym: Sym },
    #[error("special block {block} contains the last occurrence of symbol {sym}")]
    BlockHasLastOccurrence { block: usize, sym: Sym },
    #[error("special block {0} contains a right endpoint")]
    BlockHasRightEndpoint(usize),
    #[error("symbol {sym}: {problem}")]
    BadEndpoints { sym: Sym, problem: &'static str },
    #[error("parse error: {0}")]
    Parse(String),
}

/// An opaque symbol. Only equality and order matter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sym(pub u64);

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A special block: the half-open index range `start..start + len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Block {
    pub start: usize,
    pub len: usize,
}

impl Block {
    pub fn new(start: usize, len: usize) -> Self {
        Block { start, len }
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.end()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index < self.end()
    }
}

impl From<[usize; 2]> for Block {
    fn from(v: [usize; 2]) -> Self {
        Block::new(v[0], v[1])
    }
}

impl From<Block> for [usize; 2] {
    fn from(b: Block) -> Self {
        [b.start, b.len]
    }
}

fn check_blocks(blocks: &[Block], seq_len: usize) -> Result<(), SeqError> {
    for (index, b) in blocks.iter().enumerate() {
        if b.end() > seq_len {
            return Err(SeqError::BlockOutOfRange {
                index,
                start: b.start,
                len: b.len,
                seq_len,
            });
        }
        if index > 0 && b.start < blocks[index - 1].end() {
            return Err(SeqError::BlocksOverlap {
                first: index - 1,
                second: index,
            });
        }
        // Empty blocks may share a position, but must not sit inside a
        // non-empty predecessor.
        if index > 0 && b.len > 0 && b.start < blocks[index - 1].start {
            return Err(SeqError::BlocksOverlap {
                first: index - 1,
                second: index,
            });
        }
    }
    Ok(())
}

/// Index of the block containing `pos`, by binary search over ordered blocks.
fn block_containing(blocks: &[Block], pos: usize) -> Option<usize> {
    let i = blocks.partition_point(|b| b.end() <= pos);
    (i < blocks.len() && blocks[i].contains(pos)).then_some(i)
}

/// Uniform length of all blocks, or `None` when there are no blocks.
fn uniform_block_len(blocks: &[Block]) -> Result<Option<usize>, SeqError> {
    match blocks.first() {
        None => Ok(None),
        Some(first) => {
            if blocks.iter().all(|b| b.len == first.len) {
                Ok(Some(first.len))
            } else {
                Err(SeqError::NonUniformBlocks)
            }
        }
    }
}

/// Renames symbols to `1..=n` in order of first appearance.
#[derive(Debug, Default)]
struct Renamer {
    map: HashMap<Sym, Sym>,
}

impl Renamer {
    fn get(&mut self, s: Sym) -> Sym {
        let next = Sym(self.map.len() as u64 + 1);
        *self.map.entry(s).or_insert(next)
    }
}

/// Human-readable names for symbols, indexed by `id - 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Sym>,
}

impl Alphabet {
    pub fn intern(&mut self, name: &str) -> Sym {
        if let Some(&s) = self.index.get(name) {
            return s;
        }
        self.names.push(name.to_string());
        let s = Sym(self.names.len() as u64);
        self.index.insert(name.to_string(), s);
        s
    }

    pub fn sym(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn name(&self, s: Sym) -> Option<&str> {
        let i = usize::try_from(s.0).ok()?.checked_sub(1)?;
        self.names.get(i).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Compact label used by the paper-style display: 1-9 then A-Z.
pub fn compact_label(s: Sym) -> Option<char> {
    match s.0 {
        1..=9 => Some((b'0' + s.0 as u8) as char),
        10..=35 => Some((b'A' + (s.0 - 10) as u8) as char),
        _ => None,
    }
}

/// Splits text into tokens, treating parentheses as tokens of their own.
fn split_words(text: &str) -> Vec<String> {
    let mut spaced = String::with_capacity(text.len() + 8);
    for c in text.chars() {
        if c == '(' || c == ')' {
            spaced.push(' ');
            spaced.push(c);
            spaced.push(' ');
        } else {
            spaced.push(c);
        }
    }
    spaced.split_whitespace().map(str::to_string).collect()
}

/// Groups raw tokens into items plus blocks, validating parenthesis nesting.
fn collect_blocks<T>(
    words: Vec<String>,
    mut item: impl FnMut(&str) -> Result<T, SeqError>,
) -> Result<(Vec<T>, Vec<Block>), SeqError> {
    let mut items = Vec::new();
    let mut blocks = Vec::new();
    let mut open: Option<usize> = None;
    for w in words {
        match w.as_str() {
            "(" => {
                if open.is_some() {
                    return Err(SeqError::Parse("nested '('".into()));
                }
                open = Some(items.len());
            }
            ")" => {
                let start = open
                    .take()
                    .ok_or_else(|| SeqError::Parse("unmatched ')'".into()))?;
                blocks.push(Block::new(start, items.len() - start));
            }
            other => items.push(item(other)?),
        }
    }
    if open.is_some() {
        return Err(SeqError::Parse("unclosed '('".into()));
    }
    Ok((items, blocks))
}

/// A symbol sequence with designated special blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "SeqRepr", into = "SeqRepr")]
pub struct Seq {
    tokens: Vec<Sym>,
    blocks: Vec<Block>,
}

#[derive(Serialize, Deserialize)]
struct SeqRepr {
    tokens: Vec<u64>,
    #[serde(default)]
    blocks: Vec<Block>,
}

impl TryFrom<SeqRepr> for Seq {
    type Error = SeqError;
    fn try_from(r: SeqRepr) -> Result<Self, SeqError> {
        Seq::new(r.tokens.into_iter().map(Sym).collect(), r.blocks)
    }
}

impl From<Seq> for SeqRepr {
    fn from(s: Seq) -> Self {
        SeqRepr {
            tokens: s.tokens.into_iter().map(|t| t.0).collect(),
            blocks: s.blocks,
        }
    }
}

/// Outcome of checking the Hart–Sharir block invariants on a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockReport {
    pub block_len: Option<usize>,
    pub violation: Option<SeqError>,
}

impl BlockReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

impl Seq {
    pub fn new(tokens: Vec<Sym>, blocks: Vec<Block>) -> Result<Self, SeqError> {
        check_blocks(&blocks, tokens.len())?;
        Ok(Seq { tokens, blocks })
    }

    pub fn from_symbols(tokens: impl IntoIterator<Item = Sym>) -> Self {
        Seq {
            tokens: tokens.into_iter().collect(),
            blocks: Vec::new(),
        }
    }

    pub fn from_ids(ids: impl IntoIterator<Item = u64>) -> Self {
        Seq::from_symbols(ids.into_iter().map(Sym))
    }

    pub fn tokens(&self) -> &[Sym] {
        &self.tokens
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn block_symbols(&self, i: usize) -> &[Sym] {
        &self.tokens[self.blocks[i].range()]
    }

    pub fn block_of(&self, pos: usize) -> Option<usize> {
        block_containing(&self.blocks, pos)
    }

    /// Distinct symbols in order of first occurrence.
    pub fn symbols(&self) -> Vec<Sym> {
        let mut seen = HashSet::new();
        self.tokens.iter().copied().filter(|s| seen.insert(*s)).collect()
    }

    pub fn distinct_count(&self) -> usize {
        self.tokens.iter().collect::<HashSet<_>>().len()
    }

    pub fn first_positions(&self) -> HashMap<Sym, usize> {
        let mut m = HashMap::new();
        for (i, &s) in self.tokens.iter().enumerate() {
            m.entry(s).or_insert(i);
        }
        m
    }

    pub fn last_positions(&self) -> HashMap<Sym, usize> {
        self.tokens.iter().enumerate().map(|(i, &s)| (s, i)).collect()
    }

    pub fn occurrence_counts(&self) -> HashMap<Sym, usize> {
        let mut m = HashMap::new();
        for &s in &self.tokens {
            *m.entry(s).or_insert(0) += 1;
        }
        m
    }

    /// Reversal of the token list. Blocks are dropped, since first
    /// occurrences do not survive reversal.
    pub fn reversed(&self) -> Seq {
        Seq::from_symbols(self.tokens.iter().rev().copied())
    }

    pub fn without_blocks(&self) -> Seq {
        Seq::from_symbols(self.tokens.iter().copied())
    }

    /// Renames symbols to `1..=n` in order of first occurrence.
    pub fn canonical(&self) -> Seq {
        let mut r = Renamer::default();
        Seq {
            tokens: self.tokens.iter().map(|&s| r.get(s)).collect(),
            blocks: self.blocks.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        let mut next = 1;
        for &s in &self.tokens {
            if s.0 == next {
                next += 1;
            } else if s.0 > next || s.0 == 0 {
                return false;
            }
        }
        true
    }

    /// Checks the Hart–Sharir block invariants: uniform block length,
    /// every first occurrence inside a block, blocks hold only first
    /// occurrences.
    pub fn block_report(&self) -> BlockReport {
        let block_len = match uniform_block_len(&self.blocks) {
            Ok(l) => l,
            Err(e) => {
                return BlockReport {
                    block_len: None,
                    violation: Some(e),
                }
            }
        };
        let mut seen = HashSet::new();
        for (i, &s) in self.tokens.iter().enumerate() {
            let first = seen.insert(s);
            match (first, self.block_of(i)) {
                (true, None) => {
                    return BlockReport {
                        block_len,
                        violation: Some(SeqError::FirstOccurrenceOutsideBlock(s)),
                    }
                }
                (false, Some(block)) => {
                    return BlockReport {
                        block_len,
                        violation: Some(SeqError::BlockHasRepeat { block, sym: s }),
                    }
                }
                _ => {}
            }
        }
        BlockReport {
            block_len,
            violation: None,
        }
    }

    /// 1-based position of `a`'s first occurrence inside its block.
    pub fn rank_of(&self, a: Sym) -> Result<usize, SeqError> {
        let pos = self
            .tokens
            .iter()
            .position(|&s| s == a)
            .ok_or(SeqError::SymbolAbsent(a))?;
        let b = self
            .block_of(pos)
            .ok_or(SeqError::FirstOccurrenceOutsideBlock(a))?;
        Ok(pos - self.blocks[b].start + 1)
    }

    /// Subsequence of tokens in `keep`. Blocks are clipped to the kept
    /// tokens and dropped when nothing of them survives.
    pub fn restrict(&self, keep: &HashSet<Sym>) -> Seq {
        let mut tokens = Vec::new();
        let mut blocks = Vec::new();
        let mut next_block = 0;
        let mut open: Option<usize> = None;
        for (i, &s) in self.tokens.iter().enumerate() {
            while next_block < self.blocks.len() && self.blocks[next_block].end() <= i {
                if let Some(start) = open.take() {
                    if tokens.len() > start {
                        blocks.push(Block::new(start, tokens.len() - start));
                    }
                }
                next_block += 1;
            }
            if next_block < self.blocks.len() && self.blocks[next_block].start == i {
                open = Some(tokens.len());
            }
            if keep.contains(&s) {
                tokens.push(s);
            }
        }
        if let Some(start) = open {
            if tokens.len() > start {
                blocks.push(Block::new(start, tokens.len() - start));
            }
        }
        Seq { tokens, blocks }
    }

    /// Parses the text format. Whitespace-separated tokens are used when
    /// the text contains whitespace between tokens; otherwise every
    /// character is one token (`(12)1(34)313424`).
    pub fn parse(text: &str) -> Result<(Seq, Alphabet), SeqError> {
        let bare: String = text.chars().filter(|&c| c != '(' && c != ')').collect();
        let word_mode = bare.trim().contains(char::is_whitespace);
        let words: Vec<String> = if word_mode {
            split_words(text)
        } else {
            text.trim().chars().map(|c| c.to_string()).collect()
        };
        let mut alphabet = Alphabet::default();
        let (tokens, blocks) = collect_blocks(words, |w| Ok(alphabet.intern(w)))?;
        Ok((Seq::new(tokens, blocks)?, alphabet))
    }

    /// Like [`Seq::parse`] but discards the names.
    pub fn parse_plain(text: &str) -> Result<Seq, SeqError> {
        Seq::parse(text).map(|(s, _)| s)
    }

    pub fn display_with<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        SeqDisplay {
            seq: self,
            alphabet: Some(alphabet),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence serializes")
    }
}

struct SeqDisplay<'a> {
    seq: &'a Seq,
    alphabet: Option<&'a Alphabet>,
}

impl fmt::Display for SeqDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self
            .seq
            .tokens
            .iter()
            .map(|&s| match self.alphabet.and_then(|a| a.name(s)) {
                Some(n) => n.to_string(),
                None => match compact_label(s) {
                    Some(c) if self.alphabet.is_none() => c.to_string(),
                    _ => s.0.to_string(),
                },
            })
            .collect();
        let compact = names.iter().all(|n| n.chars().count() == 1);
        let sep = if compact { "" } else { " " };
        let mut out = String::new();
        let mut b = 0;
        for (i, n) in names.iter().enumerate() {
            while b < self.seq.blocks.len() && self.seq.blocks[b].start == i {
                let blk = self.seq.blocks[b];
                if !out.is_empty() && !compact {
                    out.push(' ');
                }
                out.push('(');
                let inner: Vec<&str> = names[blk.range()].iter().map(String::as_str).collect();
                out.push_str(&inner.join(sep));
                out.push(')');
                b += 1;
            }
            if self.seq.block_of(i).is_some() {
                continue;
            }
            if !out.is_empty() && !compact {
                out.push(' ');
            }
            out.push_str(n);
        }
        while b < self.seq.blocks.len() {
            if !out.is_empty() && !compact {
                out.push(' ');
            }
            out.push_str("()");
            b += 1;
        }
        f.write_str(&out)
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        SeqDisplay {
            seq: self,
            alphabet: None,
        }
        .fmt(f)
    }
}

/// Checks the shuffle preconditions and returns `(k, m)`: the number of
/// blocks of `A` and their common length.
fn shuffle_shape(a_blocks: &[Block], b_blocks: &[Block]) -> Result<(usize, usize), SeqError> {
    let k = a_blocks.len();
    let m = uniform_block_len(a_blocks)?.unwrap_or(0);
    for b in b_blocks {
        if b.len != k {
            return Err(SeqError::BlockLengthMismatch {
                expected: k,
                found: b.len,
            });
        }
    }
    Ok((k, m))
}

/// The Hart–Sharir shuffle `A • B`.
///
/// `A` has `k` blocks of length `m`, `B` has `ℓ` blocks of length `k`. Each
/// block of `B` is replaced by a fresh copy of `A` in which the `j`-th block
/// gets the `j`-th global symbol appended, its old last symbol repeated
/// right after it, and the copy is followed by one more copy of the last
/// global symbol. The result has `kℓ` blocks of length `m + 1` and is
/// returned in canonical form.
pub fn shuffle(a: &Seq, b: &Seq) -> Result<Seq, SeqError> {
    let (k, m) = shuffle_shape(&a.blocks, &b.blocks)?;
    let max_b = b.tokens.iter().map(|s| s.0).max().unwrap_or(0);
    let width = a.tokens.iter().map(|s| s.0).max().unwrap_or(0) + 1;
    let extra = b.blocks.len() * (a.tokens.len() + 2 * k + 1);
    let mut tokens = Vec::with_capacity(b.tokens.len() + extra);
    let mut blocks = Vec::with_capacity(k * b.blocks.len());

    let mut cur = 0;
    for (i, gamma) in b.blocks.iter().enumerate() {
        tokens.extend_from_slice(&b.tokens[cur..gamma.start]);
        let base = max_b + 1 + i as u64 * width;
        let local = |s: Sym| Sym(base + s.0);
        let globals = &b.tokens[gamma.range()];
        let mut a_cur = 0;
        for (j, delta) in a.blocks.iter().enumerate() {
            tokens.extend(a.tokens[a_cur..delta.start].iter().map(|&s| local(s)));
            let start = tokens.len();
            tokens.extend(a.tokens[delta.range()].iter().map(|&s| local(s)));
            tokens.push(globals[j]);
            blocks.push(Block::new(start, m + 1));
            if m > 0 {
                tokens.push(local(a.tokens[delta.end() - 1]));
            }
            a_cur = delta.end();
        }
        tokens.extend(a.tokens[a_cur..].iter().map(|&s| local(s)));
        if let Some(&last) = globals.last() {
            tokens.push(last);
        }
        cur = gamma.end();
    }
    tokens.extend_from_slice(&b.tokens[cur..]);
    Ok(Seq { tokens, blocks }.canonical())
}

/// Side of an endpoint token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    L,
    R,
}

/// One endpoint token `L:a` or `R:a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct End {
    pub side: Side,
    pub sym: Sym,
}

impl End {
    pub fn l(sym: Sym) -> Self {
        End { side: Side::L, sym }
    }

    pub fn r(sym: Sym) -> Self {
        End { side: Side::R, sym }
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::L => 'L',
            Side::R => 'R',
        };
        write!(f, "{side}:{}", self.sym)
    }
}

impl std::str::FromStr for End {
    type Err = SeqError;
    fn from_str(s: &str) -> Result<Self, SeqError> {
        let (side, rest) = parse_end_word(s)?;
        let id = rest
            .parse::<u64>()
            .map_err(|_| SeqError::Parse(format!("bad endpoint symbol in {s:?}")))?;
        Ok(End { side, sym: Sym(id) })
    }
}

fn parse_end_word(w: &str) -> Result<(Side, &str), SeqError> {
    let side = match w.chars().next() {
        Some('L') => Side::L,
        Some('R') => Side::R,
        _ => return Err(SeqError::Parse(format!("expected L:x or R:x, got {w:?}"))),
    };
    let rest = &w[1..];
    let rest = rest
        .strip_prefix(':')
        .or_else(|| rest.strip_prefix('_'))
        .ok_or_else(|| SeqError::Parse(format!("expected L:x or R:x, got {w:?}")))?;
    if rest.is_empty() {
        return Err(SeqError::Parse(format!("missing symbol in {w:?}")));
    }
    Ok((side, rest))
}

/// An endpoint sequence: each symbol contributes one `L` and one later `R`;
/// special blocks hold only `L` tokens and may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "ESeqRepr", into = "ESeqRepr")]
pub struct ESeq {
    tokens: Vec<End>,
    blocks: Vec<Block>,
}

#[derive(Serialize, Deserialize)]
struct ESeqRepr {
    tokens: Vec<String>,
    #[serde(default)]
    blocks: Vec<Block>,
}

impl TryFrom<ESeqRepr> for ESeq {
    type Error = SeqError;
    fn try_from(r: ESeqRepr) -> Result<Self, SeqError> {
        let tokens = r
            .tokens
            .iter()
            .map(|t| t.parse())
            .collect::<Result<Vec<End>, _>>()?;
        ESeq::new(tokens, r.blocks)
    }
}

impl From<ESeq> for ESeqRepr {
    fn from(e: ESeq) -> Self {
        ESeqRepr {
            tokens: e.tokens.iter().map(End::to_string).collect(),
            blocks: e.blocks,
        }
    }
}

impl ESeq {
    pub fn new(tokens: Vec<End>, blocks: Vec<Block>) -> Result<Self, SeqError> {
        check_blocks(&blocks, tokens.len())?;
        for (i, b) in blocks.iter().enumerate() {
            if tokens[b.range()].iter().any(|t| t.side == Side::R) {
                return Err(SeqError::BlockHasRightEndpoint(i));
            }
        }
        let mut state: HashMap<Sym, Side> = HashMap::new();
        for t in &tokens {
            match (t.side, state.get(&t.sym)) {
                (Side::L, None) => {
                    state.insert(t.sym, Side::L);
                }
                (Side::R, Some(Side::L)) => {
                    state.insert(t.sym, Side::R);
                }
                (Side::L, Some(_)) => {
                    return Err(SeqError::BadEndpoints {
                        sym: t.sym,
                        problem: "repeated left endpoint",
                    })
                }
                (Side::R, None) => {
                    return Err(SeqError::BadEndpoints {
                        sym: t.sym,
                        problem: "right endpoint before left endpoint",
                    })
                }
                (Side::R, Some(Side::R)) => {
                    return Err(SeqError::BadEndpoints {
                        sym: t.sym,
                        problem: "repeated right endpoint",
                    })
                }
            }
        }
        if let Some((&sym, _)) = state.iter().find(|(_, &s)| s == Side::L) {
            return Err(SeqError::BadEndpoints {
                sym,
                problem: "missing right endpoint",
            });
        }
        Ok(ESeq { tokens, blocks })
    }

    pub fn tokens(&self) -> &[End] {
        &self.tokens
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn symbol_count(&self) -> usize {
        self.tokens.len() / 2
    }

    pub fn block_of(&self, pos: usize) -> Option<usize> {
        block_containing(&self.blocks, pos)
    }

    pub fn block_symbols(&self, i: usize) -> Vec<Sym> {
        self.tokens[self.blocks[i].range()].iter().map(|t| t.sym).collect()
    }

    /// Symbols in order of their left endpoints.
    pub fn symbols(&self) -> Vec<Sym> {
        self.tokens
            .iter()
            .filter(|t| t.side == Side::L)
            .map(|t| t.sym)
            .collect()
    }

    /// Position of every token, keyed by token.
    pub fn positions(&self) -> HashMap<End, usize> {
        self.tokens.iter().enumerate().map(|(i, &t)| (t, i)).collect()
    }

    /// Canonical renaming plus the map from old to new symbols.
    pub fn canonical_with_map(&self) -> (ESeq, HashMap<Sym, Sym>) {
        let mut r = Renamer::default();
        let tokens = self
            .tokens
            .iter()
            .map(|t| End {
                side: t.side,
                sym: r.get(t.sym),
            })
            .collect();
        (
            ESeq {
                tokens,
                blocks: self.blocks.clone(),
            },
            r.map,
        )
    }

    pub fn canonical(&self) -> ESeq {
        self.canonical_with_map().0
    }

    /// Same endpoint order up to renaming, ignoring blocks.
    pub fn same_order_as(&self, other: &ESeq) -> bool {
        self.canonical().tokens == other.canonical().tokens
    }

    pub fn renamed(&self, map: &HashMap<Sym, Sym>) -> ESeq {
        ESeq {
            tokens: self
                .tokens
                .iter()
                .map(|t| End {
                    side: t.side,
                    sym: map.get(&t.sym).copied().unwrap_or(t.sym),
                })
                .collect(),
            blocks: self.blocks.clone(),
        }
    }

    /// Parses `L:a L:b R:a R:b`, with `(`/`)` marking special blocks.
    /// Symbols are named and numbered in order of first appearance.
    pub fn parse(text: &str) -> Result<(ESeq, Alphabet), SeqError> {
        let mut alphabet = Alphabet::default();
        let (tokens, blocks) = collect_blocks(split_words(text), |w| {
            let (side, name) = parse_end_word(w)?;
            Ok(End {
                side,
                sym: alphabet.intern(name),
            })
        })?;
        Ok((ESeq::new(tokens, blocks)?, alphabet))
    }

    pub fn parse_plain(text: &str) -> Result<ESeq, SeqError> {
        ESeq::parse(text).map(|(e, _)| e)
    }

    pub fn display_with<'a>(&'a self, alphabet: Option<&'a Alphabet>) -> impl fmt::Display + 'a {
        ESeqDisplay {
            eseq: self,
            alphabet,
        }
    }
}

struct ESeqDisplay<'a> {
    eseq: &'a ESeq,
    alphabet: Option<&'a Alphabet>,
}

impl fmt::Display for ESeqDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |t: &End| {
            let side = if t.side == Side::L { 'L' } else { 'R' };
            match self.alphabet.and_then(|a| a.name(t.sym)) {
                Some(n) => format!("{side}:{n}"),
                None => format!("{side}:{}", t.sym),
            }
        };
        let mut parts: Vec<String> = Vec::new();
        let blocks = &self.eseq.blocks;
        let mut b = 0;
        let mut i = 0;
        while i < self.eseq.tokens.len() || b < blocks.len() {
            if b < blocks.len() && blocks[b].start == i {
                let inner: Vec<String> =
                    self.eseq.tokens[blocks[b].range()].iter().map(word).collect();
                parts.push(format!("({})", inner.join(" ")));
                i = blocks[b].end();
                b += 1;
                continue;
            }
            if i < self.eseq.tokens.len() {
                parts.push(word(&self.eseq.tokens[i]));
            }
            i += 1;
        }
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Display for ESeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with(None).fmt(f)
    }
}

/// The endpoint sequence `E(u)`: first occurrence to `L`, last to `R`,
/// everything in between dropped. Blocks of `u` carry over to the `L`
/// tokens they contain.
pub fn endpoint_seq(u: &Seq) -> Result<ESeq, SeqError> {
    let first = u.first_positions();
    let last = u.last_positions();
    for (&s, &f) in &first {
        if last[&s] == f {
            return Err(SeqError::SingleOccurrence(s));
        }
    }
    let mut tokens = Vec::with_capacity(first.len() * 2);
    let mut kept_before = Vec::with_capacity(u.len() + 1);
    for (i, &s) in u.tokens.iter().enumerate() {
        kept_before.push(tokens.len());
        if first[&s] == i {
            tokens.push(End::l(s));
        } else if last[&s] == i {
            tokens.push(End::r(s));
        }
    }
    kept_before.push(tokens.len());
    let mut blocks = Vec::with_capacity(u.blocks.len());
    for (bi, b) in u.blocks.iter().enumerate() {
        if let Some(&s) = u.tokens[b.range()].iter().find(|&&s| {
            let i = last[&s];
            b.contains(i) && first[&s] != i
        }) {
            return Err(SeqError::BlockHasLastOccurrence { block: bi, sym: s });
        }
        let start = kept_before[b.start];
        blocks.push(Block::new(start, kept_before[b.end()] - start));
    }
    ESeq::new(tokens, blocks)
}

/// Renaming applied by [`endpoint_shuffle_traced`]: one map per copy of
/// `A` (one copy per block of `B`) and one map for the symbols of `B`.
#[derive(Debug, Clone, Default)]
pub struct ShuffleTrace {
    pub copies: Vec<HashMap<Sym, Sym>>,
    pub global: HashMap<Sym, Sym>,
}

/// The endpoint shuffle `A ∘ B`.
pub fn endpoint_shuffle(a: &ESeq, b: &ESeq) -> Result<ESeq, SeqError> {
    endpoint_shuffle_traced(a, b).map(|(e, _)| e)
}

/// [`endpoint_shuffle`] that also reports where every input symbol went.
pub fn endpoint_shuffle_traced(a: &ESeq, b: &ESeq) -> Result<(ESeq, ShuffleTrace), SeqError> {
    let (k, m) = shuffle_shape(&a.blocks, &b.blocks)?;
    let max_b = b.tokens.iter().map(|t| t.sym.0).max().unwrap_or(0);
    let width = a.tokens.iter().map(|t| t.sym.0).max().unwrap_or(0) + 1;
    let mut tokens = Vec::with_capacity(b.tokens.len() + b.blocks.len() * a.tokens.len());
    let mut blocks = Vec::with_capacity(k * b.blocks.len());
    let mut raw_copies = Vec::with_capacity(b.blocks.len());

    let mut cur = 0;
    for (i, gamma) in b.blocks.iter().enumerate() {
        tokens.extend_from_slice(&b.tokens[cur..gamma.start]);
        let base = max_b + 1 + i as u64 * width;
        let local = |t: &End| End {
            side: t.side,
            sym: Sym(base + t.sym.0),
        };
        raw_copies.push(base);
        let globals = &b.tokens[gamma.range()];
        let mut a_cur = 0;
        for (j, delta) in a.blocks.iter().enumerate() {
            tokens.extend(a.tokens[a_cur..delta.start].iter().map(local));
            let start = tokens.len();
            tokens.extend(a.tokens[delta.range()].iter().map(local));
            tokens.push(globals[j]);
            blocks.push(Block::new(start, m + 1));
            a_cur = delta.end();
        }
        tokens.extend(a.tokens[a_cur..].iter().map(local));
        cur = gamma.end();
    }
    tokens.extend_from_slice(&b.tokens[cur..]);

    let raw = ESeq { tokens, blocks };
    let (out, rename) = raw.canonical_with_map();
    let a_syms = a.symbols();
    let copies = raw_copies
        .into_iter()
        .map(|base| {
            a_syms
                .iter()
                .map(|&s| (s, rename[&Sym(base + s.0)]))
                .collect()
        })
        .collect();
    let global = b.symbols().into_iter().map(|s| (s, rename[&s])).collect();
    Ok((out, ShuffleTrace { copies, global }))
}

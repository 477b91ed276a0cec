//! Segment configurations: an endpoint order plus groups of segments that
//! must intersect concavely or form a wide set. Builders produce the
//! configurations `F_m`, `Z_m`, `Z_{j,m}`, `Y`, `T_n`, `T_{j,n}`, `X`, the
//! eleven-segment configuration and `Y∘F_5`, by iterated endpoint
//! shuffles. Groups and the whisker tree are carried through every shuffle.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::patterns::{self, find_n_shape};
use crate::seq::{endpoint_seq, endpoint_shuffle_traced, Alphabet, Block, ESeq, End, Seq, SeqError, Side, Sym};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("invalid parameters for {kind}: {reason}")]
    InvalidParams { kind: &'static str, reason: String },
    #[error("group {group} mentions symbol {sym}, which is not in the endpoint order")]
    UnknownSymbol { group: usize, sym: Sym },
    #[error("group {group} is not in fan order L_1..L_m R_1..R_m")]
    GroupOrder { group: usize },
    #[error(transparent)]
    Seq(#[from] SeqError),
}

/// Whisker tree of `T`-type configurations. Children of a whisker are
/// listed in the order of the special blocks they were shuffled into.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Whisker { syms: Vec<Sym>, children: Vec<Branch> },
    /// A special block of the configuration, by index.
    Block(usize),
    /// A numeric group, by index into [`Config::numeric_groups`].
    Numeric(usize),
}

impl Branch {
    fn rename(&self, map: &HashMap<Sym, Sym>, block: &dyn Fn(usize) -> Branch) -> Branch {
        match self {
            Branch::Whisker { syms, children } => Branch::Whisker {
                syms: syms.iter().map(|s| map[s]).collect(),
                children: children.iter().map(|c| c.rename(map, block)).collect(),
            },
            Branch::Block(i) => block(*i),
            Branch::Numeric(i) => Branch::Numeric(*i),
        }
    }

    fn whisker_count(&self) -> usize {
        match self {
            Branch::Whisker { children, .. } => {
                1 + children.iter().map(Branch::whisker_count).sum::<usize>()
            }
            _ => 0,
        }
    }
}

/// A realizability problem: an endpoint order and constraint groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConfigRepr", into = "ConfigRepr")]
pub struct Config {
    pub eseq: ESeq,
    /// Each group, in fan order, must intersect concavely.
    pub concave_groups: Vec<Vec<Sym>>,
    /// Each group, in fan order, must be wide.
    pub wide_groups: Vec<Vec<Sym>>,
    pub meta: BTreeMap<String, u64>,
    /// Optional display names of symbols.
    pub names: BTreeMap<Sym, String>,
    pub whiskers: Vec<Vec<Sym>>,
    pub numeric_groups: Vec<Vec<Sym>>,
    pub tree: Vec<Branch>,
}

#[derive(Serialize, Deserialize)]
struct ConfigRepr {
    endpoints: Vec<String>,
    #[serde(default)]
    blocks: Vec<Block>,
    #[serde(default)]
    concave_groups: Vec<Vec<Sym>>,
    #[serde(default)]
    wide_groups: Vec<Vec<Sym>>,
    #[serde(default)]
    meta: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    names: BTreeMap<Sym, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    whiskers: Vec<Vec<Sym>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    numeric_groups: Vec<Vec<Sym>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tree: Vec<Branch>,
}

impl TryFrom<ConfigRepr> for Config {
    type Error = ConfigError;
    fn try_from(r: ConfigRepr) -> Result<Self, ConfigError> {
        let tokens = r
            .endpoints
            .iter()
            .map(|t| t.parse())
            .collect::<Result<Vec<End>, _>>()?;
        let cfg = Config {
            eseq: ESeq::new(tokens, r.blocks)?,
            concave_groups: r.concave_groups,
            wide_groups: r.wide_groups,
            meta: r.meta,
            names: r.names,
            whiskers: r.whiskers,
            numeric_groups: r.numeric_groups,
            tree: r.tree,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl From<Config> for ConfigRepr {
    fn from(c: Config) -> Self {
        ConfigRepr {
            endpoints: c.eseq.tokens().iter().map(End::to_string).collect(),
            blocks: c.eseq.blocks().to_vec(),
            concave_groups: c.concave_groups,
            wide_groups: c.wide_groups,
            meta: c.meta,
            names: c.names,
            whiskers: c.whiskers,
            numeric_groups: c.numeric_groups,
            tree: c.tree,
        }
    }
}

impl Config {
    /// A configuration with only an endpoint order and constraint groups.
    pub fn new(
        eseq: ESeq,
        concave_groups: Vec<Vec<Sym>>,
        wide_groups: Vec<Vec<Sym>>,
    ) -> Result<Self, ConfigError> {
        let mut cfg = Config {
            eseq,
            concave_groups,
            wide_groups,
            meta: BTreeMap::new(),
            names: BTreeMap::new(),
            whiskers: Vec::new(),
            numeric_groups: Vec::new(),
            tree: Vec::new(),
        };
        cfg.validate()?;
        cfg.meta
            .insert("segment_total".into(), cfg.eseq.symbol_count() as u64);
        Ok(cfg)
    }

    /// Checks that every group is known and listed in fan order.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let pos = self.eseq.positions();
        let groups = self.concave_groups.iter().chain(&self.wide_groups);
        for (gi, g) in groups.enumerate() {
            let mut ls = Vec::with_capacity(g.len());
            let mut rs = Vec::with_capacity(g.len());
            for &s in g {
                match (pos.get(&End::l(s)), pos.get(&End::r(s))) {
                    (Some(&l), Some(&r)) => {
                        ls.push(l);
                        rs.push(r);
                    }
                    _ => return Err(ConfigError::UnknownSymbol { group: gi, sym: s }),
                }
            }
            let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
            let fan = increasing(&ls)
                && increasing(&rs)
                && ls.last().zip(rs.first()).map_or(true, |(l, r)| l < r);
            if !fan {
                return Err(ConfigError::GroupOrder { group: gi });
            }
        }
        Ok(())
    }

    pub fn symbols(&self) -> Vec<Sym> {
        self.eseq.symbols()
    }

    pub fn name(&self, s: Sym) -> String {
        self.names.get(&s).cloned().unwrap_or_else(|| s.to_string())
    }

    /// Looks a symbol up by display name.
    pub fn sym(&self, name: &str) -> Option<Sym> {
        self.names.iter().find(|(_, n)| *n == name).map(|(&s, _)| s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// Which configuration to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigKind {
    /// `F_m`; with `wide`, its numeric group must also be wide.
    F { m: usize, wide: bool },
    Z { m: usize },
    Zj { j: usize, m: usize },
    Y,
    /// `Y ∘ F_m`.
    YF { m: usize },
    T { n: u32 },
    Tj { j: usize, n: u32 },
    X,
    Thm31,
}

impl ConfigKind {
    pub fn name(&self) -> &'static str {
        match self {
            ConfigKind::F { .. } => "F",
            ConfigKind::Z { .. } => "Z",
            ConfigKind::Zj { .. } => "Zj",
            ConfigKind::Y => "Y",
            ConfigKind::YF { .. } => "YF",
            ConfigKind::T { .. } => "T",
            ConfigKind::Tj { .. } => "Tj",
            ConfigKind::X => "X",
            ConfigKind::Thm31 => "thm31",
        }
    }
}

/// Endpoint sequence under construction, with its tracked groups.
#[derive(Debug, Clone, Default)]
struct Parts {
    tokens: Vec<End>,
    blocks: Vec<Block>,
    whiskers: Vec<Vec<Sym>>,
    triples: Vec<Vec<Sym>>,
    numeric: Vec<Vec<Sym>>,
    tree: Vec<Branch>,
    next: u64,
}

impl Parts {
    fn fresh(&mut self) -> Sym {
        self.next += 1;
        Sym(self.next)
    }

    fn l(&mut self, s: Sym) {
        self.tokens.push(End::l(s));
    }

    fn r(&mut self, s: Sym) {
        self.tokens.push(End::r(s));
    }

    /// Appends `F_m` with fresh symbols and returns them.
    fn f(&mut self, m: usize) -> Vec<Sym> {
        let syms: Vec<Sym> = (0..m).map(|_| self.fresh()).collect();
        self.tree.push(Branch::Block(self.blocks.len()));
        self.blocks.push(Block::new(self.tokens.len(), m));
        for &s in &syms {
            self.l(s);
        }
        for &s in &syms {
            self.r(s);
        }
        self.numeric.push(syms.clone());
        syms
    }

    fn empty_block(&mut self) {
        self.tree.push(Branch::Block(self.blocks.len()));
        self.blocks.push(Block::new(self.tokens.len(), 0));
    }

    fn finish(self) -> Built {
        let eseq = ESeq::new(self.tokens, self.blocks).expect("builder emits valid endpoints");
        let (eseq, map) = eseq.canonical_with_map();
        let g = |v: Vec<Vec<Sym>>| -> Vec<Vec<Sym>> {
            v.into_iter().map(|g| g.iter().map(|s| map[s]).collect()).collect()
        };
        Built {
            eseq,
            whiskers: g(self.whiskers),
            triples: g(self.triples),
            numeric: g(self.numeric),
            tree: self
                .tree
                .iter()
                .map(|b| b.rename(&map, &|i| Branch::Block(i)))
                .collect(),
        }
    }
}

/// A built endpoint sequence with tracked groups, in canonical naming.
#[derive(Debug, Clone)]
struct Built {
    eseq: ESeq,
    whiskers: Vec<Vec<Sym>>,
    triples: Vec<Vec<Sym>>,
    /// Numeric groups introduced by `Z`/`F` pieces.
    numeric: Vec<Vec<Sym>>,
    tree: Vec<Branch>,
}

fn f_parts(m: usize) -> Built {
    let mut p = Parts::default();
    p.f(m);
    p.finish()
}

fn z_parts(m: usize) -> Built {
    let mut p = Parts::default();
    let (a, b, c) = (p.fresh(), p.fresh(), p.fresh());
    let mut inner = Parts {
        next: p.next,
        ..Parts::default()
    };
    inner.l(a);
    inner.l(b);
    inner.f(m);
    inner.l(c);
    inner.r(a);
    inner.f(m);
    inner.r(b);
    inner.r(c);
    let children = std::mem::take(&mut inner.tree);
    inner.tree = vec![Branch::Whisker {
        syms: vec![a, b, c],
        children,
    }];
    inner.whiskers.push(vec![a, b, c]);
    inner.finish()
}

fn zj_parts(j: usize, m: usize) -> Built {
    let mut p = Parts::default();
    let whisker: Vec<Sym> = (0..j).map(|_| p.fresh()).collect();
    for (i, &a) in whisker.iter().enumerate() {
        if i > 0 {
            p.f(m);
        }
        p.l(a);
    }
    for (i, &a) in whisker.iter().enumerate() {
        if i > 0 {
            p.f(m);
        }
        p.r(a);
    }
    let children = std::mem::take(&mut p.tree);
    p.tree = vec![Branch::Whisker {
        syms: whisker.clone(),
        children,
    }];
    p.whiskers.push(whisker);
    p.finish()
}

fn y_parts() -> Built {
    let mut p = Parts::default();
    let (d, e, f) = (p.fresh(), p.fresh(), p.fresh());
    p.l(d);
    p.l(e);
    p.empty_block();
    p.empty_block();
    p.l(f);
    p.r(d);
    p.empty_block();
    p.empty_block();
    p.r(e);
    p.r(f);
    p.empty_block();
    p.triples.push(vec![d, e, f]);
    p.finish()
}

/// `A ∘ B` with all tracked groups renamed into the result.
fn shuffle_parts(a: &Built, b: &Built) -> Result<Built, ConfigError> {
    let (eseq, trace) = endpoint_shuffle_traced(&a.eseq, &b.eseq)?;
    let k = a.eseq.blocks().len();
    let mut out = Built {
        eseq,
        whiskers: Vec::new(),
        triples: Vec::new(),
        numeric: Vec::new(),
        tree: Vec::new(),
    };
    let rename = |g: &[Vec<Sym>], map: &HashMap<Sym, Sym>| -> Vec<Vec<Sym>> {
        g.iter().map(|g| g.iter().map(|s| map[s]).collect()).collect()
    };
    for map in &trace.copies {
        out.whiskers.extend(rename(&a.whiskers, map));
        out.triples.extend(rename(&a.triples, map));
        out.numeric.extend(rename(&a.numeric, map));
    }
    out.whiskers.extend(rename(&b.whiskers, &trace.global));
    out.triples.extend(rename(&b.triples, &trace.global));
    out.numeric.extend(rename(&b.numeric, &trace.global));

    // Every block of B is replaced by a renamed copy of A's forest.
    fn splice(
        node: &Branch,
        a: &Built,
        trace: &crate::seq::ShuffleTrace,
        global: &HashMap<Sym, Sym>,
        k: usize,
        out: &mut Vec<Branch>,
    ) {
        match node {
            Branch::Block(i) => {
                let map = &trace.copies[*i];
                let base = i * k;
                for t in &a.tree {
                    out.push(t.rename(map, &|j| Branch::Block(base + j)));
                }
            }
            Branch::Whisker { syms, children } => {
                let mut kids = Vec::new();
                for c in children {
                    splice(c, a, trace, global, k, &mut kids);
                }
                out.push(Branch::Whisker {
                    syms: syms.iter().map(|s| global[s]).collect(),
                    children: kids,
                });
            }
            Branch::Numeric(i) => out.push(Branch::Numeric(*i)),
        }
    }
    for node in &b.tree {
        splice(node, a, &trace, &trace.global, k, &mut out.tree);
    }
    Ok(out)
}

/// Replaces block leaves by numeric-group leaves, given that numeric
/// group `i` is the content of block `i`.
fn blocks_to_numeric(tree: &[Branch]) -> Vec<Branch> {
    tree.iter()
        .map(|b| match b {
            Branch::Block(i) => Branch::Numeric(*i),
            Branch::Whisker { syms, children } => Branch::Whisker {
                syms: syms.clone(),
                children: blocks_to_numeric(children),
            },
            Branch::Numeric(i) => Branch::Numeric(*i),
        })
        .collect()
}

fn overflow() -> ConfigError {
    ConfigError::InvalidParams {
        kind: "T",
        reason: "size overflow".into(),
    }
}

/// `T_n` from the classic `Z_m` pieces, or `T_{j,n}` from `Z_{j,m}`.
fn t_built(j: Option<usize>, n: u32) -> Result<Built, ConfigError> {
    let fan = j.map_or(2, |j| 2 * j - 2);
    let z = |m: usize| match j {
        Some(j) => zj_parts(j, m),
        None => z_parts(m),
    };
    let mut acc = z(1);
    let mut m = 1usize;
    for _ in 1..n {
        m = m.checked_mul(fan).ok_or_else(overflow)?;
        acc = shuffle_parts(&acc, &z(m))?;
    }
    let top = m.checked_mul(fan).ok_or_else(overflow)?;
    shuffle_parts(&acc, &f_parts(top))
}

fn check(cond: bool, kind: &'static str, reason: &str) -> Result<(), ConfigError> {
    if cond {
        Ok(())
    } else {
        Err(ConfigError::InvalidParams {
            kind,
            reason: reason.to_string(),
        })
    }
}

/// Endpoint order of the eleven-segment configuration.
pub const THM31_ORDER: &str = "L:8 L:1 L:a L:b L:2 R:8 L:c L:d R:1 R:2 L:e R:a \
     L:3 L:4 R:b R:c L:9 R:3 R:d R:e R:4 R:9";

/// The pattern `u` whose endpoint sequence is [`THM31_ORDER`].
pub const THM31_PATTERN: &str = "81ab12181cd12dedcbab34bc49434de49";

/// Segment limit for generated configurations.
const MAX_SEGMENTS: usize = 2_000_000;

/// Builds one of the named configurations.
pub fn build_config(kind: ConfigKind) -> Result<Config, ConfigError> {
    let name = kind.name();
    let (built, mut meta, wide_numeric) = match kind {
        ConfigKind::F { m, wide } => {
            check(m >= 1, name, "m must be at least 1")?;
            check(m <= MAX_SEGMENTS, name, "m too large")?;
            (f_parts(m), BTreeMap::new(), wide)
        }
        ConfigKind::Z { m } => {
            check(m >= 1, name, "m must be at least 1")?;
            check(m <= MAX_SEGMENTS, name, "m too large")?;
            (z_parts(m), BTreeMap::new(), false)
        }
        ConfigKind::Zj { j, m } => {
            check(j >= 3, name, "j must be at least 3")?;
            check(m >= 1, name, "m must be at least 1")?;
            check(j.saturating_mul(m) <= MAX_SEGMENTS, name, "j*m too large")?;
            (zj_parts(j, m), BTreeMap::new(), false)
        }
        ConfigKind::Y => (y_parts(), BTreeMap::new(), false),
        ConfigKind::YF { m } => {
            check(m == 5, name, "Y has five special blocks, so m must be 5")?;
            (shuffle_parts(&y_parts(), &f_parts(5))?, BTreeMap::new(), false)
        }
        ConfigKind::T { n } | ConfigKind::Tj { n, .. } => {
            let j = match kind {
                ConfigKind::Tj { j, .. } => j,
                _ => 3,
            };
            check(n >= 1, name, "n must be at least 1")?;
            check(j >= 3, name, "j must be at least 3")?;
            let fan = if matches!(kind, ConfigKind::T { .. }) { 2 } else { 2 * j - 2 };
            let size = (n as f64 + 1.0) * (fan as f64).powi(n as i32);
            check(size <= MAX_SEGMENTS as f64, name, "configuration too large")?;
            let built = match kind {
                ConfigKind::T { .. } => t_built(None, n)?,
                _ => t_built(Some(j), n)?,
            };
            (built, BTreeMap::new(), false)
        }
        ConfigKind::X => {
            let t4 = t_built(None, 4)?;
            let y = y_parts();
            let (eseq, trace) = endpoint_shuffle_traced(&y.eseq, &t4.eseq)?;
            let g = |v: &[Vec<Sym>], map: &HashMap<Sym, Sym>| -> Vec<Vec<Sym>> {
                v.iter().map(|g| g.iter().map(|s| map[s]).collect()).collect()
            };
            let numeric: Vec<Vec<Sym>> = t4
                .eseq
                .blocks()
                .iter()
                .enumerate()
                .map(|(i, _)| t4.eseq.block_symbols(i).iter().map(|s| trace.global[s]).collect())
                .collect();
            let triples = trace
                .copies
                .iter()
                .flat_map(|map| g(&y.triples, map))
                .collect();
            // The Y copy in block i of T_4 sits at leaf i of the tree.
            let tree = t4
                .tree
                .iter()
                .map(|b| b.rename(&trace.global, &|i| Branch::Numeric(i)))
                .collect();
            let built = Built {
                eseq,
                whiskers: g(&t4.whiskers, &trace.global),
                triples,
                numeric: numeric.clone(),
                tree,
            };
            (built, BTreeMap::new(), false)
        }
        ConfigKind::Thm31 => {
            let (eseq, alphabet) = ESeq::parse(THM31_ORDER)?;
            let group = |names: &[&str]| -> Vec<Sym> {
                names.iter().map(|n| alphabet.sym(n).expect("known name")).collect()
            };
            let mut cfg = Config::new(
                eseq,
                vec![
                    group(&["8", "1", "2"]),
                    group(&["3", "4", "9"]),
                    group(&["a", "b", "c", "d", "e"]),
                ],
                vec![],
            )?;
            cfg.names = names_of(&alphabet);
            cfg.whiskers = vec![group(&["8", "1", "2"]), group(&["3", "4", "9"])];
            return Ok(cfg);
        }
    };

    let is_t = matches!(kind, ConfigKind::T { .. } | ConfigKind::Tj { .. } | ConfigKind::F { .. });
    let numeric: Vec<Vec<Sym>> = if is_t {
        (0..built.eseq.blocks().len())
            .map(|i| built.eseq.block_symbols(i))
            .collect()
    } else {
        built.numeric.clone()
    };
    let tree = if is_t {
        blocks_to_numeric(&built.tree)
    } else {
        built.tree.clone()
    };
    let mut concave: Vec<Vec<Sym>> = built.whiskers.clone();
    concave.extend(built.triples.iter().cloned());
    concave.extend(numeric.iter().filter(|g| g.len() >= 2).cloned());
    let wide = if wide_numeric { numeric.clone() } else { Vec::new() };
    let mut cfg = Config::new(built.eseq, concave, wide)?;
    meta.insert("whiskers".into(), built.whiskers.len() as u64);
    meta.insert("y_copies".into(), built.triples.len() as u64);
    meta.insert("numeric_groups".into(), numeric.len() as u64);
    meta.insert("numeric_segments".into(), numeric.iter().map(Vec::len).sum::<usize>() as u64);
    meta.insert("blocks".into(), cfg.eseq.blocks().len() as u64);
    meta.insert(
        "block_length".into(),
        cfg.eseq.blocks().first().map_or(0, |b| b.len) as u64,
    );
    meta.insert("segment_total".into(), cfg.eseq.symbol_count() as u64);
    debug_assert_eq!(
        tree.iter().map(Branch::whisker_count).sum::<usize>(),
        built.whiskers.len()
    );
    cfg.meta = meta;
    cfg.whiskers = built.whiskers;
    cfg.numeric_groups = numeric;
    cfg.tree = tree;
    if matches!(kind, ConfigKind::YF { .. }) {
        // The numeric group {1..5} must also be wide.
        cfg.wide_groups = cfg.numeric_groups.clone();
        cfg.validate()?;
    }
    Ok(cfg)
}

fn names_of(alphabet: &Alphabet) -> BTreeMap<Sym, String> {
    (1..=alphabet.len() as u64)
        .map(|i| (Sym(i), alphabet.name(Sym(i)).expect("dense ids").to_string()))
        .collect()
}

/// Left/right clamping of one symbol of `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClampFlags {
    pub sym: Sym,
    pub left: bool,
    pub right: bool,
}

/// Evidence that `u` forces a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForcingCertificate {
    /// Symbol of `u` to symbol of the configuration.
    pub endpoint_match: Vec<(Sym, Sym)>,
    pub clamp_report: Vec<ClampFlags>,
    /// For each concave group, positions in `u` of its `N`-shaped subsequence.
    pub nshape_witnesses: Vec<Vec<usize>>,
}

/// The first unmet condition of a forcing check.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum ForcingFailure {
    #[error("u is malformed: {0}")]
    Malformed(String),
    #[error("E(u) differs from the configuration's endpoint order at position {position}")]
    EndpointMismatch { position: usize },
    #[error("symbol {0} of u is not left-clamped")]
    NotLeftClamped(Sym),
    #[error("symbol {0} of u is not right-clamped")]
    NotRightClamped(Sym),
    #[error("u has no N-shaped subsequence over concave group {group}")]
    MissingNShape { group: usize },
}

/// Checks the sufficient condition for `u` to force `cfg`: `E(u)` equals
/// the endpoint order under a bijection, every symbol but the first is
/// left-clamped, every symbol but the last is right-clamped, and each
/// concave group appears in `u` as an `N`-shaped subsequence.
pub fn forcing_certificate(u: &Seq, cfg: &Config) -> Result<ForcingCertificate, ForcingFailure> {
    let e = endpoint_seq(u).map_err(|err| ForcingFailure::Malformed(err.to_string()))?;
    let target = cfg.eseq.tokens();
    let mut forward: HashMap<Sym, Sym> = HashMap::new();
    let mut backward: HashMap<Sym, Sym> = HashMap::new();
    for (i, t) in e.tokens().iter().enumerate() {
        let Some(c) = target.get(i) else {
            return Err(ForcingFailure::EndpointMismatch { position: i });
        };
        let ok = c.side == t.side
            && *forward.entry(t.sym).or_insert(c.sym) == c.sym
            && *backward.entry(c.sym).or_insert(t.sym) == t.sym;
        if !ok {
            return Err(ForcingFailure::EndpointMismatch { position: i });
        }
    }
    if e.len() != target.len() {
        return Err(ForcingFailure::EndpointMismatch { position: e.len() });
    }

    let tokens = u.tokens();
    let (first, last) = (tokens[0], tokens[tokens.len() - 1]);
    let mut clamp_report = Vec::new();
    for s in u.symbols() {
        let left = patterns::is_left_clamped(u, s).expect("symbol of u");
        let right = patterns::is_right_clamped(u, s).expect("symbol of u");
        if s != first && !left {
            return Err(ForcingFailure::NotLeftClamped(s));
        }
        if s != last && !right {
            return Err(ForcingFailure::NotRightClamped(s));
        }
        clamp_report.push(ClampFlags { sym: s, left, right });
    }

    let mut nshape_witnesses = Vec::new();
    for (gi, g) in cfg.concave_groups.iter().enumerate() {
        let group: Vec<Sym> = g.iter().map(|s| backward[s]).collect();
        let w = find_n_shape(u, &group).ok_or(ForcingFailure::MissingNShape { group: gi })?;
        nshape_witnesses.push(w);
    }
    let mut endpoint_match: Vec<(Sym, Sym)> = forward.into_iter().collect();
    endpoint_match.sort();
    Ok(ForcingCertificate {
        endpoint_match,
        clamp_report,
        nshape_witnesses,
    })
}

/// Side-aware helper: the configuration symbol at endpoint token `i`.
pub fn token_at(cfg: &Config, i: usize) -> Option<(Side, Sym)> {
    cfg.eseq.tokens().get(i).map(|t| (t.side, t.sym))
}

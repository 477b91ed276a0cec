//! Coordinate assignments for configurations: exact checking, seeded
//! randomized search, and the inequality certificates behind the two
//! impossibility results.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::configs::{Branch, Config};
use crate::geom::{
    self, fan_crossings, int, intersect_chords, intersection_order_class, is_wide, parabola_ratio,
    profile_unchecked, rat_serde, Chord, GeomError, OrderClass, Rat, RatioProfile,
};
use crate::seq::{End, Side, Sym};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizerError {
    #[error("assignment has no chord for symbol {0}")]
    MissingSymbol(Sym),
    #[error("endpoint value {0} is used twice")]
    DuplicateEndpoint(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// One chord per configuration symbol.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Assignment {
    pub coords: BTreeMap<Sym, Chord>,
}

impl Assignment {
    pub fn new(coords: impl IntoIterator<Item = (Sym, Chord)>) -> Self {
        Assignment {
            coords: coords.into_iter().collect(),
        }
    }

    pub fn chord(&self, s: Sym) -> Result<&Chord, RealizerError> {
        self.coords.get(&s).ok_or(RealizerError::MissingSymbol(s))
    }

    fn chords(&self, group: &[Sym]) -> Result<Vec<Chord>, RealizerError> {
        group.iter().map(|&s| self.chord(s).cloned()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Concave,
    Wide,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupResult {
    /// Index into the config's concave or wide group list.
    pub group: usize,
    pub kind: GroupKind,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub order_ok: bool,
    /// Empty when the order check fails.
    pub groups: Vec<GroupResult>,
    pub first_violation: Option<(GroupKind, usize)>,
    /// Number of atomic conditions met: ordered consecutive crossing pairs
    /// of concave groups and doubling steps of wide groups.
    pub score: usize,
}

impl Verdict {
    pub fn all_ok(&self) -> bool {
        self.order_ok && self.first_violation.is_none()
    }

    pub fn satisfied(&self) -> usize {
        self.groups.iter().filter(|g| g.satisfied).count()
    }

    pub fn group_ok(&self, kind: GroupKind, group: usize) -> bool {
        self.groups
            .iter()
            .any(|g| g.kind == kind && g.group == group && g.satisfied)
    }
}

/// Checks the endpoint order, then every concave and wide group.
pub fn assign_check(cfg: &Config, a: &Assignment) -> Result<Verdict, RealizerError> {
    let mut ends: Vec<(&Rat, End)> = Vec::with_capacity(cfg.eseq.len());
    for s in cfg.symbols() {
        let c = a.chord(s)?;
        ends.push((c.p(), End::l(s)));
        ends.push((c.q(), End::r(s)));
    }
    ends.sort_by(|x, y| x.0.cmp(y.0));
    if let Some(w) = ends.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(RealizerError::DuplicateEndpoint(geom::fmt_rat(w[0].0)));
    }
    let order_ok = ends.iter().map(|e| e.1).eq(cfg.eseq.tokens().iter().copied());
    if !order_ok {
        return Ok(Verdict {
            order_ok,
            groups: Vec::new(),
            first_violation: None,
            score: 0,
        });
    }
    let mut groups = Vec::new();
    let mut score = 0;
    for (i, g) in cfg.concave_groups.iter().enumerate() {
        let chords = a.chords(g)?;
        let xs = fan_crossings(&chords)?;
        score += xs.windows(2).filter(|w| w[0] > w[1]).count();
        let satisfied = intersection_order_class(&chords)? == OrderClass::Concave;
        groups.push(GroupResult {
            group: i,
            kind: GroupKind::Concave,
            satisfied,
        });
    }
    for (i, g) in cfg.wide_groups.iter().enumerate() {
        let chords = a.chords(g)?;
        let l1 = chords.first().map(|c| c.p().clone()).unwrap_or_default();
        score += chords
            .windows(2)
            .filter(|w| w[1].q() - &l1 > (w[0].q() - &l1) * int(2))
            .count();
        let satisfied = is_wide(&chords)?;
        groups.push(GroupResult {
            group: i,
            kind: GroupKind::Wide,
            satisfied,
        });
    }
    let first_violation = groups.iter().find(|g| !g.satisfied).map(|g| (g.kind, g.group));
    Ok(Verdict {
        order_ok,
        groups,
        first_violation,
        score,
    })
}

/// How candidate endpoint gaps are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Independent gaps uniform in `1..=64`.
    Uniform,
    /// Gaps `c·2^e`, with exponents drawn independently or as a random walk.
    Geometric,
    /// Local perturbation of geometric samples, steered by the atomic score.
    Anneal,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Uniform, Strategy::Geometric, Strategy::Anneal];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Uniform => "uniform",
            Strategy::Geometric => "geometric",
            Strategy::Anneal => "anneal",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(Strategy::Uniform),
            "geometric" => Ok(Strategy::Geometric),
            "anneal" => Ok(Strategy::Anneal),
            _ => Err(format!("unknown strategy {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Total number of evaluated assignments, split evenly across strategies.
    pub budget: u64,
    pub seed: u64,
    pub strategies: Vec<Strategy>,
    /// Spend the whole budget even after a witness is found.
    pub exhaust: bool,
}

impl SearchOptions {
    pub fn new(budget: u64, seed: u64) -> Self {
        SearchOptions {
            budget,
            seed,
            strategies: Strategy::ALL.to_vec(),
            exhaust: false,
        }
    }

    pub fn with_strategies(mut self, strategies: &[Strategy]) -> Self {
        self.strategies = strategies.to_vec();
        self
    }

    pub fn exhausting(mut self) -> Self {
        self.exhaust = true;
        self
    }
}

/// Integer endpoint layout of a configuration; groups as dense indices.
struct Layout<'a> {
    cfg: &'a Config,
    index: HashMap<Sym, usize>,
    /// Token position of each symbol's left and right endpoint.
    ends: Vec<(usize, usize)>,
    concave: Vec<Vec<usize>>,
    wide: Vec<Vec<usize>>,
    pos: Vec<i64>,
}

impl<'a> Layout<'a> {
    fn new(cfg: &'a Config) -> Self {
        let syms = cfg.symbols();
        let index: HashMap<Sym, usize> = syms.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut ends = vec![(0, 0); syms.len()];
        for (i, t) in cfg.eseq.tokens().iter().enumerate() {
            let e = &mut ends[index[&t.sym]];
            match t.side {
                Side::L => e.0 = i,
                Side::R => e.1 = i,
            }
        }
        let dense = |gs: &[Vec<Sym>]| -> Vec<Vec<usize>> {
            gs.iter().map(|g| g.iter().map(|s| index[s]).collect()).collect()
        };
        Layout {
            cfg,
            concave: dense(&cfg.concave_groups),
            wide: dense(&cfg.wide_groups),
            index,
            ends,
            pos: vec![0; cfg.eseq.len()],
        }
    }

    fn set_gaps(&mut self, gaps: &[i64]) {
        let mut x = 0i64;
        for (i, p) in self.pos.iter_mut().enumerate() {
            if i > 0 {
                x += gaps[i - 1];
            }
            *p = x;
        }
    }

    fn chord(&self, s: usize) -> (i128, i128) {
        let (l, r) = self.ends[s];
        (self.pos[l] as i128, self.pos[r] as i128)
    }

    /// Crossing of two fan-ordered chords as `(num, den)` with `den > 0`.
    fn crossing(&self, a: usize, b: usize) -> (i128, i128) {
        let (p1, q1) = self.chord(a);
        let (p2, q2) = self.chord(b);
        ((p2 * q2 - p1 * q1), (p2 + q2) - (p1 + q1))
    }

    /// Same verdict as [`assign_check`] for the current layout, whose
    /// order holds by construction.
    fn verdict(&self) -> Verdict {
        let mut groups = Vec::with_capacity(self.concave.len() + self.wide.len());
        let mut score = 0;
        for (i, g) in self.concave.iter().enumerate() {
            let xs: Vec<(i128, i128)> = g.windows(2).map(|w| self.crossing(w[0], w[1])).collect();
            let atoms = xs.windows(2).filter(|w| w[0].0 * w[1].1 > w[1].0 * w[0].1).count();
            score += atoms;
            groups.push(GroupResult {
                group: i,
                kind: GroupKind::Concave,
                satisfied: atoms + 1 >= xs.len().max(1),
            });
        }
        for (i, g) in self.wide.iter().enumerate() {
            let l1 = g.first().map_or(0, |&s| self.chord(s).0);
            let atoms = g
                .windows(2)
                .filter(|w| self.chord(w[1]).1 - l1 > 2 * (self.chord(w[0]).1 - l1))
                .count();
            score += atoms;
            groups.push(GroupResult {
                group: i,
                kind: GroupKind::Wide,
                satisfied: atoms + 1 >= g.len().max(1),
            });
        }
        let first_violation = groups.iter().find(|g| !g.satisfied).map(|g| (g.kind, g.group));
        Verdict {
            order_ok: true,
            groups,
            first_violation,
            score,
        }
    }

    /// Annealing objective: one per met atom, minus the relative size of
    /// each unmet atom's violation.
    fn fitness(&self) -> f64 {
        let mut f = 0.0;
        let mut atom = |met: bool, lhs: f64, rhs: f64, scale: f64| {
            f += if met {
                1.0
            } else {
                -((rhs - lhs) / scale).clamp(0.0, 1.0)
            };
        };
        for g in &self.concave {
            let span = (self.chord(g[g.len() - 1]).1 - self.chord(g[0]).0) as f64;
            let xs: Vec<(i128, i128)> = g.windows(2).map(|w| self.crossing(w[0], w[1])).collect();
            for w in xs.windows(2) {
                let met = w[0].0 * w[1].1 > w[1].0 * w[0].1;
                atom(met, w[0].0 as f64 / w[0].1 as f64, w[1].0 as f64 / w[1].1 as f64, span);
            }
        }
        for g in &self.wide {
            let l1 = self.chord(g[0]).0;
            for w in g.windows(2) {
                let (prev, next) = (self.chord(w[0]).1 - l1, self.chord(w[1]).1 - l1);
                atom(next > 2 * prev, next as f64, 2.0 * prev as f64, next as f64);
            }
        }
        f
    }

    fn assignment(&self) -> Assignment {
        Assignment::new(self.index.iter().map(|(&s, &i)| {
            let (l, r) = self.ends[i];
            (s, Chord::ints(self.pos[l], self.pos[r]))
        }))
    }
}

/// One evaluated assignment, as seen by a search observer.
pub struct Trial<'a> {
    pub index: u64,
    pub strategy: Strategy,
    pub verdict: &'a Verdict,
    layout: &'a Layout<'a>,
}

impl Trial<'_> {
    /// The evaluated assignment, built on demand.
    pub fn assignment(&self) -> Assignment {
        self.layout.assignment()
    }

    pub fn config(&self) -> &Config {
        self.layout.cfg
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyStats {
    pub strategy: Strategy,
    pub trials: u64,
    /// Most groups satisfied at once.
    pub max_satisfied: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub budget: u64,
    pub seed: u64,
    pub found: Option<Assignment>,
    /// Index of the first witnessing trial.
    pub found_at: Option<u64>,
    pub total_groups: usize,
    pub max_satisfied: usize,
    pub strategies: Vec<StrategyStats>,
}

const GEOMETRIC_MAX_EXP: i32 = 24;
const MAX_GAP: i64 = 1 << 30;
const ANNEAL_PATIENCE: u32 = 1000;

fn uniform_gaps(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(1..=64)).collect()
}

fn scaled(rng: &mut ChaCha8Rng, e: i32) -> i64 {
    rng.gen_range(1..=3i64) << e.clamp(0, GEOMETRIC_MAX_EXP)
}

fn geometric_gaps(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    if rng.gen_bool(0.5) {
        return (0..n)
            .map(|_| {
                let e = rng.gen_range(0..=GEOMETRIC_MAX_EXP);
                scaled(rng, e)
            })
            .collect();
    }
    let mut e = rng.gen_range(0..=GEOMETRIC_MAX_EXP);
    (0..n)
        .map(|_| {
            e = (e + rng.gen_range(-3..=3)).clamp(0, GEOMETRIC_MAX_EXP);
            scaled(rng, e)
        })
        .collect()
}

fn perturb(rng: &mut ChaCha8Rng, gaps: &mut [i64]) {
    for _ in 0..rng.gen_range(1..=2) {
        let i = rng.gen_range(0..gaps.len());
        gaps[i] = match rng.gen_range(0..4) {
            0 => {
                let e = rng.gen_range(0..=GEOMETRIC_MAX_EXP);
                scaled(rng, e)
            }
            1 => (gaps[i] << rng.gen_range(1..=3)).min(MAX_GAP),
            2 => (gaps[i] >> rng.gen_range(1..=3)).max(1),
            _ => (gaps[i] + rng.gen_range(-gaps[i] / 2..=gaps[i] / 2)).clamp(1, MAX_GAP),
        };
    }
}

/// Trials given to strategy `si` and the global index of its first trial.
fn share_of(opts: &SearchOptions, si: usize) -> (u64, u64) {
    let k = opts.strategies.len().max(1) as u64;
    let share = |i: u64| opts.budget / k + u64::from(i < opts.budget % k);
    ((share)(si as u64), (0..si as u64).map(share).sum())
}

/// Runs one strategy on its own random stream. Stops at the first
/// realization unless the options ask to exhaust the budget.
fn run_strategy(
    cfg: &Config,
    opts: &SearchOptions,
    si: usize,
    observer: &mut dyn FnMut(&Trial),
) -> (StrategyStats, Option<(Assignment, u64)>) {
    let strategy = opts.strategies[si];
    let (share, mut index) = share_of(opts, si);
    let n_gaps = cfg.eseq.len().saturating_sub(1);
    let mut layout = Layout::new(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(si as u64 + 1);
    let mut stats = StrategyStats {
        strategy,
        trials: 0,
        max_satisfied: 0,
    };
    let mut found = None;
    // Annealing state: current gaps, their score and steps since restart.
    let mut current: Option<(Vec<i64>, f64)> = None;
    let mut stale = 0u32;
    let mut steps = 0u32;
    while stats.trials < share && (opts.exhaust || found.is_none()) {
        let gaps = match (strategy, &current) {
            (Strategy::Uniform, _) => uniform_gaps(&mut rng, n_gaps),
            (Strategy::Anneal, Some((g, _))) if stale < ANNEAL_PATIENCE && n_gaps > 0 => {
                let mut g = g.clone();
                perturb(&mut rng, &mut g);
                g
            }
            _ => {
                current = None;
                stale = 0;
                steps = 0;
                geometric_gaps(&mut rng, n_gaps)
            }
        };
        layout.set_gaps(&gaps);
        let verdict = layout.verdict();
        stats.trials += 1;
        observer(&Trial {
            index,
            strategy,
            verdict: &verdict,
            layout: &layout,
        });
        stats.max_satisfied = stats.max_satisfied.max(verdict.satisfied());
        if verdict.all_ok() && found.is_none() {
            found = Some((layout.assignment(), index));
        }
        index += 1;
        if strategy == Strategy::Anneal {
            steps += 1;
            let score = layout.fitness();
            let accept = match &current {
                None => true,
                Some((_, cur)) if score >= *cur => true,
                Some((_, cur)) => {
                    let temp = 0.98f64.powi(steps as i32 / 4).max(1e-3);
                    rng.gen_bool((-(cur - score) / temp).exp().min(1.0))
                }
            };
            let improved = current.as_ref().map_or(true, |(_, cur)| score > *cur);
            stale = if improved { 0 } else { stale + 1 };
            if accept {
                current = Some((gaps, score));
            }
        }
    }
    (stats, found)
}

fn empty_report(cfg: &Config, opts: &SearchOptions) -> SearchReport {
    SearchReport {
        budget: opts.budget,
        seed: opts.seed,
        found: None,
        found_at: None,
        total_groups: cfg.concave_groups.len() + cfg.wide_groups.len(),
        max_satisfied: 0,
        strategies: Vec::new(),
    }
}

/// Folds per-strategy results in strategy order. Without `exhaust`,
/// strategies after the first success count as not run, which matches
/// the sequential search exactly.
fn merge(
    mut report: SearchReport,
    opts: &SearchOptions,
    results: Vec<(StrategyStats, Option<(Assignment, u64)>)>,
) -> SearchReport {
    for (mut stats, found) in results {
        if report.found.is_some() && !opts.exhaust {
            stats.trials = 0;
            stats.max_satisfied = 0;
        }
        if let (None, Some((a, at))) = (&report.found, found) {
            report.found = Some(a);
            report.found_at = Some(at);
        }
        report.max_satisfied = report.max_satisfied.max(stats.max_satisfied);
        report.strategies.push(stats);
    }
    report
}

/// Seeded search; `observer` sees every evaluated assignment.
pub fn search_with(
    cfg: &Config,
    opts: &SearchOptions,
    observer: &mut dyn FnMut(&Trial),
) -> SearchReport {
    let mut results = Vec::new();
    for si in 0..opts.strategies.len() {
        let done = results
            .iter()
            .any(|(_, f): &(StrategyStats, Option<_>)| f.is_some());
        let r = if done && !opts.exhaust {
            let stats = StrategyStats {
                strategy: opts.strategies[si],
                trials: 0,
                max_satisfied: 0,
            };
            (stats, None)
        } else {
            run_strategy(cfg, opts, si, observer)
        };
        results.push(r);
    }
    merge(empty_report(cfg, opts), opts, results)
}

/// Same report as [`search_with`] without an observer, with strategies
/// spread over up to `jobs` threads.
pub fn search_parallel(cfg: &Config, opts: &SearchOptions, jobs: usize) -> SearchReport {
    let n = opts.strategies.len();
    let jobs = jobs.clamp(1, n.max(1));
    let mut results: Vec<Option<_>> = (0..n).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                scope.spawn(move || {
                    (j..n)
                        .step_by(jobs)
                        .map(|si| (si, run_strategy(cfg, opts, si, &mut |_| {})))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (si, r) in h.join().expect("search thread panicked") {
                results[si] = Some(r);
            }
        }
    });
    merge(empty_report(cfg, opts), opts, results.into_iter().flatten().collect())
}

/// An assignment passing [`assign_check`], or none after `budget` trials.
pub fn search_realization(cfg: &Config, budget: u64, seed: u64) -> Option<Assignment> {
    search_with(cfg, &SearchOptions::new(budget, seed), &mut |_| {}).found
}

fn whisker_chords(a: &Assignment, syms: &[Sym]) -> Result<[Chord; 3], RealizerError> {
    let v = a.chords(syms)?;
    v.try_into()
        .map_err(|_| RealizerError::Precondition("whiskers must have three segments".into()))
}

/// Follows the whisker tree from the root to a numeric group that the
/// ratio claims force to be wide. At a whisker `a, b, c`, a short `α2`
/// selects the child in the block between `L_b` and `L_c`, otherwise a
/// growing `β` selects the child between `R_a` and `R_b`.
pub fn wide_descent(cfg: &Config, a: &Assignment) -> Result<usize, RealizerError> {
    let verdict = assign_check(cfg, a)?;
    if !verdict.order_ok {
        return Err(RealizerError::Precondition("endpoint order differs".into()));
    }
    for w in &cfg.whiskers {
        let class = intersection_order_class(&a.chords(w)?)?;
        if class != OrderClass::Concave {
            return Err(RealizerError::Precondition(format!(
                "whisker {w:?} is {class}, not concave"
            )));
        }
    }
    let [root] = cfg.tree.as_slice() else {
        return Err(RealizerError::Precondition("config has no whisker tree".into()));
    };
    let mut node = root;
    loop {
        match node {
            Branch::Numeric(i) => return Ok(*i),
            Branch::Block(_) => {
                return Err(RealizerError::Precondition("tree leaf is not a numeric group".into()))
            }
            Branch::Whisker { syms, children } => {
                if children.len() != 2 {
                    return Err(RealizerError::Precondition(
                        "descent needs a binary whisker tree".into(),
                    ));
                }
                let profile = profile_unchecked(&whisker_chords(a, syms)?);
                node = if profile.alpha_short() {
                    &children[0]
                } else if profile.beta_grows() {
                    &children[1]
                } else {
                    return Err(RealizerError::Precondition(format!(
                        "whisker {syms:?} violates the ratio claim"
                    )));
                };
            }
        }
    }
}

/// Evaluated inequality chain for the eleven-segment configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm31Report {
    #[serde(serialize_with = "ser_rats")]
    pub alpha: Vec<Rat>,
    #[serde(serialize_with = "ser_rats")]
    pub beta: Vec<Rat>,
    /// `p, r, s, q` for segments 1, 2 crossing at `A`.
    #[serde(serialize_with = "ser_rats")]
    pub prsq: Vec<Rat>,
    /// `p′, r′, s′, q′` for segments 3, 4 crossing at `B`.
    #[serde(serialize_with = "ser_rats")]
    pub prsq_prime: Vec<Rat>,
    pub ps_equals_qr: bool,
    pub ps_equals_qr_prime: bool,
    /// `α1<p, α2>r, α3<s, α4>q, β1>p′, β2<r′, β3>s′, β4<q′`.
    pub bounds: [bool; 8],
    #[serde(with = "rat_serde")]
    pub lhs: Rat,
    #[serde(with = "rat_serde")]
    pub rhs: Rat,
    /// `α1·α3·β2·β4 < α2·α4·β1·β3`.
    pub chain_holds: bool,
    /// `α1/β1 > α2/β2 > α3/β3 > α4/β4`, the requirement for `{a..e}`.
    pub ratios_decreasing: bool,
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(geom::fmt_rat))
}

fn named(cfg: &Config, name: &str) -> Result<Sym, RealizerError> {
    cfg.sym(name)
        .ok_or_else(|| RealizerError::Precondition(format!("config has no segment {name}")))
}

/// Splits two crossing chords at their crossing into `p, r, s, q`.
fn split_pair(c1: &Chord, c2: &Chord) -> Result<(Vec<Rat>, bool), RealizerError> {
    let x = intersect_chords(c1, c2)?
        .ok_or_else(|| RealizerError::Precondition("pair does not cross".into()))?
        .x;
    let v = vec![c2.p() - c1.p(), &x - c2.p(), c1.q() - &x, c2.q() - c1.q()];
    let ratio = parabola_ratio(c1.p(), c2.p(), c1.q(), c2.q())?;
    Ok((v, ratio.ps_equals_qr))
}

/// Evaluates the inequality chain refuting concavity of `{a..e}` for an
/// assignment in which the order holds and both whiskers are concave.
pub fn thm31_certificate(cfg: &Config, a: &Assignment) -> Result<Thm31Report, RealizerError> {
    let verdict = assign_check(cfg, a)?;
    if !verdict.order_ok {
        return Err(RealizerError::Precondition("endpoint order differs".into()));
    }
    for (name, group) in [("{8,1,2}", ["8", "1", "2"]), ("{3,4,9}", ["3", "4", "9"])] {
        let syms = group.iter().map(|n| named(cfg, n)).collect::<Result<Vec<_>, _>>()?;
        if intersection_order_class(&a.chords(&syms)?)? != OrderClass::Concave {
            return Err(RealizerError::Precondition(format!("whisker {name} not concave")));
        }
    }
    let chord = |n: &str| -> Result<Chord, RealizerError> { a.chord(named(cfg, n)?).cloned() };
    let fan = ["a", "b", "c", "d", "e"]
        .iter()
        .map(|n| chord(n))
        .collect::<Result<Vec<_>, _>>()?;
    let alpha: Vec<Rat> = fan.windows(2).map(|w| w[1].p() - w[0].p()).collect();
    let beta: Vec<Rat> = fan.windows(2).map(|w| w[1].q() - w[0].q()).collect();
    let (prsq, ps_equals_qr) = split_pair(&chord("1")?, &chord("2")?)?;
    let (prsq_prime, ps_equals_qr_prime) = split_pair(&chord("3")?, &chord("4")?)?;
    let [p, r, s, q] = [&prsq[0], &prsq[1], &prsq[2], &prsq[3]];
    let [p2, r2, s2, q2] = [&prsq_prime[0], &prsq_prime[1], &prsq_prime[2], &prsq_prime[3]];
    let bounds = [
        &alpha[0] < p,
        &alpha[1] > r,
        &alpha[2] < s,
        &alpha[3] > q,
        &beta[0] > p2,
        &beta[1] < r2,
        &beta[2] > s2,
        &beta[3] < q2,
    ];
    let lhs = &alpha[0] * &alpha[2] * &beta[1] * &beta[3];
    let rhs = &alpha[1] * &alpha[3] * &beta[0] * &beta[2];
    let ratios: Vec<Rat> = alpha.iter().zip(&beta).map(|(x, y)| x / y).collect();
    let ratios_decreasing = ratios.windows(2).all(|w| w[0] > w[1]);
    Ok(Thm31Report {
        chain_holds: lhs < rhs,
        alpha,
        beta,
        ps_equals_qr,
        ps_equals_qr_prime,
        bounds,
        lhs,
        rhs,
        ratios_decreasing,
        prsq,
        prsq_prime,
    })
}

/// The two gap chains that refute `Y∘F_5` once `{1..5}` is wide and
/// concave, with the ratio claim they contradict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Yf5Report {
    /// `R_e−R_d > L4−L3 > L5−L4 > R_f−R_e`.
    pub beta_chain: bool,
    /// `L_f−L_e > L2−L1 > L5−L2 > R_f−L_f`.
    pub alpha_chain: bool,
    /// Profile of `{d, e, f}`; its claim 3 must fail.
    pub def_profile: RatioProfile,
}

/// Checks the refutation of `Y∘F_5` on an assignment in which the order
/// holds and `{1..5}` is wide and concave.
pub fn yf5_decomposition(cfg: &Config, a: &Assignment) -> Result<Yf5Report, RealizerError> {
    let verdict = assign_check(cfg, a)?;
    if !verdict.order_ok {
        return Err(RealizerError::Precondition("endpoint order differs".into()));
    }
    let (Some(nums), Some(def)) = (
        cfg.wide_groups.first(),
        cfg.concave_groups.iter().find(|g| g.len() == 3),
    ) else {
        return Err(RealizerError::Precondition("config is not Y∘F_5".into()));
    };
    if nums.len() != 5 {
        return Err(RealizerError::Precondition("config is not Y∘F_5".into()));
    }
    let n = a.chords(nums)?;
    if !is_wide(&n)? || intersection_order_class(&n)? != OrderClass::Concave {
        return Err(RealizerError::Precondition("{1..5} is not wide and concave".into()));
    }
    let [d, e, f] = whisker_chords(a, def)?;
    let l = |i: usize| n[i - 1].p();
    let beta_chain = d.q() < e.q()
        && e.q() - d.q() > l(4) - l(3)
        && l(4) - l(3) > l(5) - l(4)
        && l(5) - l(4) > f.q() - e.q();
    let alpha_chain = f.p() - e.p() > l(2) - l(1)
        && l(2) - l(1) > l(5) - l(2)
        && l(5) - l(2) > f.q() - f.p();
    Ok(Yf5Report {
        beta_chain,
        alpha_chain,
        def_profile: profile_unchecked(&[d, e, f]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::{build_config, ConfigKind};

    fn f3() -> Config {
        build_config(ConfigKind::F { m: 3, wide: false }).unwrap()
    }

    fn assign(pairs: &[(i64, i64)]) -> Assignment {
        Assignment::new(
            pairs
                .iter()
                .enumerate()
                .map(|(i, &(p, q))| (Sym(i as u64 + 1), Chord::ints(p, q))),
        )
    }

    #[test]
    fn concave_triple_examples() {
        let cfg = f3();
        let v = assign_check(&cfg, &assign(&[(0, 10), (1, 11), (2, 16)])).unwrap();
        assert!(v.all_ok());
        let v = assign_check(&cfg, &assign(&[(0, 3), (1, 4), (2, 5)])).unwrap();
        assert!(v.order_ok);
        assert_eq!(v.first_violation, Some((GroupKind::Concave, 0)));
        let v = assign_check(&cfg, &assign(&[(1, 10), (0, 11), (2, 16)])).unwrap();
        assert!(!v.order_ok);
        assert!(v.groups.is_empty());
    }

    #[test]
    fn check_errors() {
        let cfg = f3();
        assert_eq!(
            assign_check(&cfg, &assign(&[(0, 10), (1, 11)])),
            Err(RealizerError::MissingSymbol(Sym(3)))
        );
        assert!(matches!(
            assign_check(&cfg, &assign(&[(0, 10), (1, 10), (2, 16)])),
            Err(RealizerError::DuplicateEndpoint(_))
        ));
    }

    #[test]
    fn search_finds_f3_and_is_deterministic() {
        let cfg = f3();
        let a = search_realization(&cfg, 1000, 7).expect("witness");
        assert!(assign_check(&cfg, &a).unwrap().all_ok());
        assert_eq!(search_realization(&cfg, 1000, 7), Some(a));
    }

    #[test]
    fn parallel_matches_sequential() {
        for (cfg, budget) in [(f3(), 1000), (build_config(ConfigKind::Thm31).unwrap(), 301)] {
            let opts = SearchOptions::new(budget, 3);
            let seq = search_with(&cfg, &opts, &mut |_| {});
            for jobs in [1, 2, 3] {
                assert_eq!(search_parallel(&cfg, &opts, jobs), seq);
            }
        }
    }

    #[test]
    fn observer_sees_every_trial() {
        let cfg = build_config(ConfigKind::Thm31).unwrap();
        let mut seen = 0u64;
        let report = search_with(&cfg, &SearchOptions::new(300, 1), &mut |t| {
            assert_eq!(t.index, seen);
            assert_eq!(&assign_check(&cfg, &t.assignment()).unwrap(), t.verdict);
            seen += 1;
        });
        assert!(report.found.is_none());
        assert_eq!(seen, 300);
        assert_eq!(report.strategies.iter().map(|s| s.trials).sum::<u64>(), 300);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.to_string().parse::<Strategy>(), Ok(s));
        }
        assert!("greedy".parse::<Strategy>().is_err());
    }
}

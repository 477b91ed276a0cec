//! Chord arrangements inside the parabola `y = x²`, the boundary tour
//! of the zone of the parabola, and its transcription.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use regex::Regex;
use serde::Serialize;
use thiserror::Error;

use crate::geom::{fmt_rat, line_intersection, Chord, Point, Rat};
use crate::seq::{Seq, Sym};

/// Display name of chord `i`: `a`…`z`, then `s26`, `s27`, ….
pub fn chord_name(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("s{i}")
    }
}

/// A failure of the general position assumptions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateEndpoint { x: String, chords: Vec<usize> },
    Parallel { chords: [usize; 2] },
    Concurrent { x: String, y: String, chords: Vec<usize> },
    DuplicateCrossingX { x: String, pairs: Vec<[usize; 2]> },
    Disconnected { components: Vec<Vec<usize>> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateEndpoint { x, chords } => {
                write!(f, "chords {chords:?} share the endpoint x = {x}")
            }
            Violation::Parallel { chords } => write!(f, "chords {chords:?} are parallel"),
            Violation::Concurrent { x, y, chords } => {
                write!(f, "supporting lines of chords {chords:?} are concurrent at ({x}, {y})")
            }
            Violation::DuplicateCrossingX { x, pairs } => {
                write!(f, "crossings of pairs {pairs:?} share x = {x}")
            }
            Violation::Disconnected { components } => {
                write!(f, "intersection graph has {} components: {components:?}", components.len())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GeneralPositionReport {
    pub violations: Vec<Violation>,
}

impl GeneralPositionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for GeneralPositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("general position");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZoneError {
    #[error("no chords given")]
    Empty,
    #[error("not in general position: {0}")]
    GeneralPosition(GeneralPositionReport),
    #[error("boundary tour did not reach the rightmost endpoint")]
    TourStuck,
}

/// True when the endpoints of `a` and `b` interleave, so the chords cross.
fn interleave(a: &Chord, b: &Chord) -> bool {
    (a.p() < b.p() && b.p() < a.q() && a.q() < b.q())
        || (b.p() < a.p() && a.p() < b.q() && b.q() < a.q())
}

fn crossing_pairs(chords: &[Chord]) -> Vec<(usize, usize, Point)> {
    let mut out = Vec::new();
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            if interleave(&chords[i], &chords[j]) {
                let pt = line_intersection(&chords[i], &chords[j]).expect("interleaving chords cross");
                out.push((i, j, pt));
            }
        }
    }
    out
}

fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

/// Checks distinct endpoints, no parallel or concurrent supporting lines,
/// distinct crossing x-values and a connected intersection graph.
pub fn validate_general_position(chords: &[Chord]) -> GeneralPositionReport {
    let mut violations = Vec::new();

    let mut at: HashMap<&Rat, BTreeSet<usize>> = HashMap::new();
    for (i, c) in chords.iter().enumerate() {
        at.entry(c.p()).or_default().insert(i);
        at.entry(c.q()).or_default().insert(i);
    }
    let mut dup: Vec<(&Rat, &BTreeSet<usize>)> = at
        .iter()
        .filter(|(_, s)| s.len() > 1)
        .map(|(x, s)| (*x, s))
        .collect();
    dup.sort();
    for (x, s) in dup {
        violations.push(Violation::DuplicateEndpoint {
            x: fmt_rat(x),
            chords: s.iter().copied().collect(),
        });
    }

    let mut meets: HashMap<Point, BTreeSet<usize>> = HashMap::new();
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            match line_intersection(&chords[i], &chords[j]) {
                None => violations.push(Violation::Parallel { chords: [i, j] }),
                Some(pt) => {
                    let e = meets.entry(pt).or_default();
                    e.insert(i);
                    e.insert(j);
                }
            }
        }
    }
    let mut concurrent: Vec<(Point, BTreeSet<usize>)> =
        meets.into_iter().filter(|(_, s)| s.len() > 2).collect();
    concurrent.sort_by(|a, b| a.1.cmp(&b.1));
    for (pt, s) in concurrent {
        violations.push(Violation::Concurrent {
            x: fmt_rat(&pt.x),
            y: fmt_rat(&pt.y),
            chords: s.into_iter().collect(),
        });
    }

    let crossings = crossing_pairs(chords);
    let mut by_x: HashMap<&Rat, Vec<[usize; 2]>> = HashMap::new();
    for (i, j, pt) in &crossings {
        by_x.entry(&pt.x).or_default().push([*i, *j]);
    }
    let mut shared: Vec<(&Rat, Vec<[usize; 2]>)> =
        by_x.into_iter().filter(|(_, v)| v.len() > 1).collect();
    shared.sort();
    for (x, pairs) in shared {
        // Pairs of one concurrent point are already reported.
        let chords_at: BTreeSet<usize> = pairs.iter().flatten().copied().collect();
        if chords_at.len() > 2 && pairs.len() == chords_at.len() * (chords_at.len() - 1) / 2 {
            let concurrent_here = violations.iter().any(|v| {
                matches!(v, Violation::Concurrent { chords, .. }
                    if chords.iter().copied().collect::<BTreeSet<_>>() == chords_at)
            });
            if concurrent_here {
                continue;
            }
        }
        violations.push(Violation::DuplicateCrossingX { x: fmt_rat(x), pairs });
    }

    let comps = components(chords.len(), crossings.iter().map(|(i, j, _)| (*i, *j)));
    if comps.len() > 1 {
        violations.push(Violation::Disconnected { components: comps });
    }
    GeneralPositionReport { violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    /// Endpoint of a chord on the parabola; `left` for `L`.
    Endpoint { chord: usize, left: bool },
    Crossing { chords: [usize; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub kind: VertexKind,
    pub point: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// Piece `piece` of chord `chord`, between its consecutive vertices.
    Segment { chord: usize, piece: usize },
    /// Parabola arc between x-consecutive endpoints.
    Arc,
    /// The two infinite parabola branches, joined at infinity.
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfEdge {
    pub origin: usize,
    pub twin: usize,
    pub next: usize,
    pub face: usize,
    pub kind: EdgeKind,
    /// Directed toward increasing x (for the infinite edge: continuing
    /// the parabola to the right of the rightmost endpoint).
    pub rightward: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceKind {
    /// Bounded inner cell touching the parabola.
    Zone,
    /// Bounded inner cell away from the parabola.
    Interior,
    /// The unbounded cell above the chords.
    Top,
    /// The region outside the parabola.
    Outside,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    pub kind: FaceKind,
    /// Half-edges of the boundary, in traversal order.
    pub boundary: Vec<usize>,
}

/// Planar subdivision of the region above the parabola by the chords.
#[derive(Debug, Clone, Serialize)]
pub struct Arrangement {
    pub chords: Vec<Chord>,
    /// Per chord, its vertices from left to right.
    pub chord_vertices: Vec<Vec<usize>>,
    pub vertices: Vec<Vertex>,
    pub half_edges: Vec<HalfEdge>,
    pub faces: Vec<Face>,
    /// Half-edge of each chord piece, directed rightward.
    piece_edge: Vec<Vec<usize>>,
}

impl Arrangement {
    pub fn crossing_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| matches!(v.kind, VertexKind::Crossing { .. }))
            .count()
    }

    pub fn edge_count(&self) -> usize {
        self.half_edges.len() / 2
    }

    pub fn count_faces(&self, kind: FaceKind) -> usize {
        self.faces.iter().filter(|f| f.kind == kind).count()
    }

    /// `V − E + F` over the whole sphere, 2 for a connected plane graph.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.faces.len() as i64
    }

    /// Crossing x-values along each chord, left to right.
    pub fn crossings(&self, chord: usize) -> Vec<Rat> {
        let vs = &self.chord_vertices[chord];
        vs[1..vs.len() - 1]
            .iter()
            .map(|&v| self.vertices[v].point.x.clone())
            .collect()
    }

    /// Face below (`rightward`) or above piece `piece` of `chord`.
    pub fn face_beside(&self, chord: usize, piece: usize, below: bool) -> usize {
        let h = self.piece_edge[chord][piece];
        if below {
            self.half_edges[self.half_edges[h].twin].face
        } else {
            self.half_edges[h].face
        }
    }
}

/// Exact comparison key for the direction of a chord piece.
fn slope_cmp(a: &Chord, b: &Chord) -> std::cmp::Ordering {
    a.slope().cmp(&b.slope())
}

/// Builds the subdivision, including the parabola arcs.
pub fn build_arrangement(chords: &[Chord]) -> Result<Arrangement, ZoneError> {
    if chords.is_empty() {
        return Err(ZoneError::Empty);
    }
    let report = validate_general_position(chords);
    if !report.ok() {
        return Err(ZoneError::GeneralPosition(report));
    }
    let n = chords.len();
    let mut vertices: Vec<Vertex> = Vec::with_capacity(2 * n);
    for (i, c) in chords.iter().enumerate() {
        vertices.push(Vertex {
            kind: VertexKind::Endpoint { chord: i, left: true },
            point: c.left(),
        });
        vertices.push(Vertex {
            kind: VertexKind::Endpoint { chord: i, left: false },
            point: c.right(),
        });
    }
    let mut along: Vec<Vec<usize>> = (0..n).map(|i| vec![2 * i]).collect();
    for (i, j, pt) in crossing_pairs(chords) {
        let v = vertices.len();
        vertices.push(Vertex {
            kind: VertexKind::Crossing { chords: [i, j] },
            point: pt,
        });
        along[i].push(v);
        along[j].push(v);
    }
    for (i, vs) in along.iter_mut().enumerate() {
        vs.push(2 * i + 1);
        vs.sort_by(|&a, &b| vertices[a].point.x.cmp(&vertices[b].point.x));
    }

    let mut half_edges: Vec<HalfEdge> = Vec::new();
    let mut add = |origin: usize, dest: usize, kind: EdgeKind| -> usize {
        let h = half_edges.len();
        for (o, r) in [(origin, true), (dest, false)] {
            half_edges.push(HalfEdge {
                origin: o,
                twin: if r { h + 1 } else { h },
                next: usize::MAX,
                face: usize::MAX,
                kind,
                rightward: r,
            });
        }
        h
    };
    let mut piece_edge = vec![Vec::new(); n];
    for (i, vs) in along.iter().enumerate() {
        for (k, w) in vs.windows(2).enumerate() {
            piece_edge[i].push(add(w[0], w[1], EdgeKind::Segment { chord: i, piece: k }));
        }
    }
    let mut ends: Vec<usize> = (0..2 * n).collect();
    ends.sort_by(|&a, &b| vertices[a].point.x.cmp(&vertices[b].point.x));
    let mut right_arc = vec![usize::MAX; 2 * n];
    let mut left_arc = vec![usize::MAX; 2 * n];
    for w in ends.windows(2) {
        let h = add(w[0], w[1], EdgeKind::Arc);
        right_arc[w[0]] = h;
        left_arc[w[1]] = h + 1;
    }
    let (c1, c2) = (ends[0], ends[2 * n - 1]);
    let inf = add(c2, c1, EdgeKind::Infinite);
    right_arc[c2] = inf;
    left_arc[c1] = inf + 1;

    // Outgoing half-edges around each vertex, counter-clockwise.
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for v in 0..2 * n {
        let VertexKind::Endpoint { chord, left } = vertices[v].kind else {
            unreachable!()
        };
        let chord_out = if left {
            piece_edge[chord][0]
        } else {
            piece_edge[chord][along[chord].len() - 2] + 1
        };
        rotation[v] = vec![right_arc[v], chord_out, left_arc[v]];
    }
    for v in 2 * n..vertices.len() {
        let VertexKind::Crossing { chords: [i, j] } = vertices[v].kind else {
            unreachable!()
        };
        let (c, d) = match slope_cmp(&chords[i], &chords[j]) {
            std::cmp::Ordering::Less => (i, j),
            _ => (j, i),
        };
        let out = |ch: usize, right: bool| -> usize {
            let k = along[ch].iter().position(|&x| x == v).expect("vertex on chord");
            if right {
                piece_edge[ch][k]
            } else {
                piece_edge[ch][k - 1] + 1
            }
        };
        rotation[v] = vec![out(c, true), out(d, true), out(c, false), out(d, false)];
    }
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for rot in &rotation {
        for (k, &h) in rot.iter().enumerate() {
            slot.insert(h, k);
        }
    }
    for h in 0..half_edges.len() {
        let t = half_edges[h].twin;
        let head = half_edges[t].origin;
        let rot = &rotation[head];
        let k = slot[&t];
        half_edges[h].next = rot[(k + rot.len() - 1) % rot.len()];
    }

    let mut faces: Vec<Face> = Vec::new();
    for start in 0..half_edges.len() {
        if half_edges[start].face != usize::MAX {
            continue;
        }
        let f = faces.len();
        let mut boundary = Vec::new();
        let mut h = start;
        loop {
            half_edges[h].face = f;
            boundary.push(h);
            h = half_edges[h].next;
            if h == start {
                break;
            }
        }
        let has = |kind: EdgeKind, right: bool| {
            boundary
                .iter()
                .any(|&e| half_edges[e].kind == kind && half_edges[e].rightward == right)
        };
        let kind = if has(EdgeKind::Infinite, false) {
            FaceKind::Outside
        } else if has(EdgeKind::Infinite, true) {
            FaceKind::Top
        } else if has(EdgeKind::Arc, true) {
            FaceKind::Zone
        } else {
            FaceKind::Interior
        };
        faces.push(Face { kind, boundary });
    }
    Ok(Arrangement {
        chords: chords.to_vec(),
        chord_vertices: along,
        vertices,
        half_edges,
        faces,
        piece_edge,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Positive side, before any negative visit: `a′`.
    First,
    /// Negative side: `a`.
    Second,
    /// Positive side, after a negative visit: `a″`.
    Third,
}

/// One visited sub-segment of the tour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Visit {
    pub chord: usize,
    pub piece: usize,
    /// Walking toward increasing x, that is along the lower side.
    pub rightward: bool,
    pub phase: Phase,
}

impl Visit {
    /// Symbol in `S′`: `3·chord + 1`, `+2`, `+3` for the three phases.
    pub fn sym(&self) -> Sym {
        let k = match self.phase {
            Phase::First => 1,
            Phase::Second => 2,
            Phase::Third => 3,
        };
        Sym(3 * self.chord as u64 + k)
    }

    pub fn label(&self) -> String {
        let mark = match self.phase {
            Phase::First => "′",
            Phase::Second => "",
            Phase::Third => "″",
        };
        format!("{}{mark}", chord_name(self.chord))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub tour: Vec<Visit>,
    /// One token per visit.
    pub s_prime: Seq,
    /// Negative-side visits only, chord `i` as symbol `i + 1`.
    pub s: Seq,
    pub complexity: usize,
}

impl Transcript {
    pub fn s_prime_text(&self) -> String {
        self.tour.iter().map(Visit::label).collect::<Vec<_>>().join(" ")
    }

    pub fn s_text(&self) -> String {
        self.s
            .tokens()
            .iter()
            .map(|s| chord_name(s.0 as usize - 1))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Walks from the leftmost endpoint to the rightmost one with the chords
/// on the left hand. At an endpoint the walk turns around the tip of its
/// chord; at a crossing it always turns onto the other chord.
pub fn zone_tour(arr: &Arrangement) -> Result<Transcript, ZoneError> {
    let n = arr.chords.len();
    let start = (0..n).min_by(|&a, &b| arr.chords[a].p().cmp(arr.chords[b].p())).ok_or(ZoneError::Empty)?;
    let finish = (0..n).max_by(|&a, &b| arr.chords[a].q().cmp(arr.chords[b].q())).ok_or(ZoneError::Empty)?;
    let pieces: usize = arr.chord_vertices.iter().map(|v| v.len() - 1).sum();
    let mut seen_negative = vec![false; n];
    let mut tour = Vec::new();
    let (mut chord, mut piece, mut rightward) = (start, 0usize, true);
    loop {
        if tour.len() > 2 * pieces {
            return Err(ZoneError::TourStuck);
        }
        let phase = if rightward {
            seen_negative[chord] = true;
            Phase::Second
        } else if seen_negative[chord] {
            Phase::Third
        } else {
            Phase::First
        };
        tour.push(Visit {
            chord,
            piece,
            rightward,
            phase,
        });
        let vs = &arr.chord_vertices[chord];
        let at = if rightward { piece + 1 } else { piece };
        let v = vs[at];
        match arr.vertices[v].kind {
            VertexKind::Endpoint { .. } => {
                if rightward && chord == finish && at == vs.len() - 1 {
                    break;
                }
                rightward = !rightward;
            }
            VertexKind::Crossing { chords: [i, j] } => {
                let other = if i == chord { j } else { i };
                let steeper = arr.chords[chord].slope() < arr.chords[other].slope();
                // Heading right onto a steeper chord turns back left, and so on.
                rightward = rightward != steeper;
                let k = arr.chord_vertices[other]
                    .iter()
                    .position(|&x| x == v)
                    .expect("vertex on chord");
                chord = other;
                piece = if rightward { k } else { k - 1 };
            }
        }
    }
    let s_prime = Seq::from_symbols(tour.iter().map(Visit::sym));
    let s = Seq::from_symbols(
        tour.iter()
            .filter(|v| v.phase == Phase::Second)
            .map(|v| Sym(v.chord as u64 + 1)),
    );
    Ok(Transcript {
        complexity: tour.len(),
        tour,
        s_prime,
        s,
    })
}

/// One cell of the zone and its segment edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellCount {
    pub face: usize,
    pub segment_edges: usize,
    pub arcs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZoneComplexity {
    pub total: usize,
    pub cells: Vec<CellCount>,
}

/// Incidences between zone cells and chord pieces; arcs are not counted.
pub fn zone_complexity(arr: &Arrangement) -> ZoneComplexity {
    let cells: Vec<CellCount> = arr
        .faces
        .iter()
        .enumerate()
        .filter(|(_, f)| f.kind == FaceKind::Zone)
        .map(|(i, f)| {
            let count = |pred: fn(&EdgeKind) -> bool| {
                f.boundary
                    .iter()
                    .filter(|&&h| pred(&arr.half_edges[h].kind))
                    .count()
            };
            CellCount {
                face: i,
                segment_edges: count(|k| matches!(k, EdgeKind::Segment { .. })),
                arcs: count(|k| matches!(k, EdgeKind::Arc)),
            }
        })
        .collect();
    ZoneComplexity {
        total: cells.iter().map(|c| c.segment_edges).sum(),
        cells,
    }
}

/// Lower envelope of the chords as functions over their x-spans; `None`
/// marks an interval covered by no chord.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Envelope {
    pub items: Vec<Option<usize>>,
}

impl Envelope {
    /// The envelope with gaps removed, chord `i` as symbol `i + 1`.
    pub fn to_seq(&self) -> Seq {
        Seq::from_symbols(self.items.iter().flatten().map(|&i| Sym(i as u64 + 1)))
    }
}

impl fmt::Display for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .items
            .iter()
            .map(|i| i.map_or_else(|| "∞".to_string(), chord_name))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Left-to-right lower envelope over `[min endpoint, max endpoint]`.
pub fn lower_envelope(chords: &[Chord]) -> Envelope {
    let mut xs: Vec<Rat> = chords.iter().flat_map(|c| [c.p().clone(), c.q().clone()]).collect();
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            if let Some(pt) = line_intersection(&chords[i], &chords[j]) {
                if chords[i].spans(&pt.x) && chords[j].spans(&pt.x) {
                    xs.push(pt.x);
                }
            }
        }
    }
    xs.sort();
    xs.dedup();
    let two = Rat::from_integer(2.into());
    let mut items: Vec<Option<usize>> = Vec::new();
    for w in xs.windows(2) {
        let mid = (&w[0] + &w[1]) / &two;
        let low = chords
            .iter()
            .enumerate()
            .filter(|(_, c)| c.spans(&mid))
            .min_by(|a, b| a.1.eval(&mid).cmp(&b.1.eval(&mid)))
            .map(|(i, _)| i);
        if items.last() != Some(&low) {
            items.push(low);
        }
    }
    Envelope { items }
}

/// Checks that, for every crossing pair `a, b` with `L_a < L_b`, the
/// restriction of `S′` to the six tokens of `a` and `b` has one of the two
/// admissible shapes. Returns the first offending pair.
pub fn check_pair_forms(arr: &Arrangement, t: &Transcript) -> Result<(), [usize; 2]> {
    // p q r stand for a′ a a″, s t u for b′ b b″.
    let forms = Regex::new(r"^(p*q*s*t*q*r*t*u*r*|s*p*q*s*t*q*r*t*u*)$").expect("valid regex");
    for v in &arr.vertices {
        let VertexKind::Crossing { chords: [i, j] } = v.kind else {
            continue;
        };
        let (a, b) = if arr.chords[i].p() < arr.chords[j].p() { (i, j) } else { (j, i) };
        let word: String = t
            .tour
            .iter()
            .filter(|x| x.chord == a || x.chord == b)
            .map(|x| {
                let base = if x.chord == a { b'p' } else { b's' };
                let off = match x.phase {
                    Phase::First => 0,
                    Phase::Second => 1,
                    Phase::Third => 2,
                };
                char::from(base + off)
            })
            .collect();
        if !forms.is_match(&word) {
            return Err([a, b]);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{int, rat};

    fn two() -> Vec<Chord> {
        vec![Chord::ints(-2, 1), Chord::ints(-1, 2)]
    }

    #[test]
    fn general_position_examples() {
        let fan = vec![
            Chord::between(int(2), rat(1, 2)).unwrap(),
            Chord::between(int(3), rat(1, 3)).unwrap(),
            Chord::between(int(4), rat(1, 4)).unwrap(),
        ];
        let r = validate_general_position(&fan);
        assert!(r.violations.contains(&Violation::Concurrent {
            x: "0".into(),
            y: "-1".into(),
            chords: vec![0, 1, 2],
        }));
        let r = validate_general_position(&[Chord::ints(0, 1), Chord::ints(2, 3)]);
        assert_eq!(
            r.violations,
            vec![Violation::Disconnected {
                components: vec![vec![0], vec![1]]
            }]
        );
        assert!(validate_general_position(&two()).ok());
    }

    #[test]
    fn cell_counts() {
        let one = build_arrangement(&[Chord::ints(-1, 1)]).unwrap();
        assert_eq!(one.count_faces(FaceKind::Zone), 1);
        assert_eq!(one.count_faces(FaceKind::Top), 1);
        assert_eq!(one.euler_characteristic(), 2);
        let arr = build_arrangement(&two()).unwrap();
        assert_eq!(arr.count_faces(FaceKind::Zone), 3);
        assert_eq!(arr.crossing_count(), 1);
        assert_eq!(arr.crossings(0), vec![int(0)]);
        assert_eq!(arr.euler_characteristic(), 2);
    }

    #[test]
    fn two_chord_tour() {
        let arr = build_arrangement(&two()).unwrap();
        let t = zone_tour(&arr).unwrap();
        assert_eq!(t.s_prime_text(), "a b′ b a a″ b");
        assert_eq!(t.s_text(), "a b a b");
        assert_eq!(t.complexity, 6);
        assert_eq!(zone_complexity(&arr).total, 6);
        assert_eq!(check_pair_forms(&arr, &t), Ok(()));
    }

    #[test]
    fn single_chord_tour() {
        let arr = build_arrangement(&[Chord::ints(-1, 1)]).unwrap();
        let t = zone_tour(&arr).unwrap();
        assert_eq!(t.s_prime_text(), "a");
        assert_eq!(t.s_text(), "a");
        assert_eq!(zone_complexity(&arr).total, 1);
    }

    #[test]
    fn envelope_examples() {
        assert_eq!(lower_envelope(&two()).to_string(), "a b a b");
        assert_eq!(lower_envelope(&[Chord::ints(-1, 1)]).to_string(), "a");
        assert_eq!(
            lower_envelope(&[Chord::ints(0, 1), Chord::ints(2, 3)]).to_string(),
            "a ∞ b"
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(build_arrangement(&[]).unwrap_err(), ZoneError::Empty);
        assert!(matches!(
            build_arrangement(&[Chord::ints(0, 1), Chord::ints(2, 3)]),
            Err(ZoneError::GeneralPosition(_))
        ));
    }
}

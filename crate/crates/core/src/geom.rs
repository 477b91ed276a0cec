//! Exact rational geometry on the parabola `y = x²`.
//!
//! A chord is given by the x-coordinates `p < q` of its endpoints; its
//! supporting line is `y = (p + q)x − pq`.

use std::fmt;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("chord endpoints must satisfy p < q (got {p}, {q})")]
    BadChord { p: String, q: String },
    #[error("the two chords are identical")]
    IdenticalChords,
    #[error("endpoint order violated: {0}")]
    OrderViolation(String),
    #[error("chords {0} and {1} do not cross")]
    NoCrossing(usize, usize),
    #[error("chords are not concave (class: {0})")]
    NotConcave(OrderClass),
    #[error("chords do not form a wide set")]
    NotWide,
    #[error("points must be strictly increasing")]
    NotIncreasing,
    #[error("the point (0,1) has no image on the parabola")]
    ExcludedPoint,
    #[error("point is not on the unit circle")]
    NotOnCircle,
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("line meets the parabola at irrational or no points")]
    IrrationalRoots,
    #[error("bad rational literal {0:?}")]
    Parse(String),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"n"`, `"n/d"` or a finite decimal such as `"-0.25"`.
pub fn parse_rat(s: &str) -> Result<Rat, GeomError> {
    let s = s.trim();
    let bad = || GeomError::Parse(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
        let den = num::pow(BigInt::from(10), frac.len());
        return Ok(Rat::new(digits, den));
    }
    Ok(Rat::from_integer(s.parse().map_err(|_| bad())?))
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter writing rationals as `"n/d"` strings and reading strings
/// or integers.
pub mod rat_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    /// A rational literal as it appears in JSON: `"3/4"`, `"-2"` or `5`.
    #[derive(Debug, Clone, Deserialize)]
    #[serde(untagged)]
    pub enum Lit {
        Str(String),
        Int(i64),
    }

    impl Lit {
        pub fn into_rat(self) -> Result<Rat, GeomError> {
            match self {
                Lit::Str(s) => parse_rat(&s),
                Lit::Int(i) => Ok(int(i)),
            }
        }
    }

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        Lit::deserialize(d)?
            .into_rat()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    #[serde(with = "rat_serde")]
    pub x: Rat,
    #[serde(with = "rat_serde")]
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn on_parabola(&self) -> bool {
        self.y == &self.x * &self.x
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_rat(&self.x), fmt_rat(&self.y))
    }
}

/// A chord of the parabola between `(p, p²)` and `(q, q²)`, `p < q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[rat_serde::Lit; 2]", into = "[String; 2]")]
pub struct Chord {
    p: Rat,
    q: Rat,
}

impl TryFrom<[rat_serde::Lit; 2]> for Chord {
    type Error = GeomError;
    fn try_from([p, q]: [rat_serde::Lit; 2]) -> Result<Self, GeomError> {
        Chord::new(p.into_rat()?, q.into_rat()?)
    }
}

impl From<Chord> for [String; 2] {
    fn from(c: Chord) -> Self {
        [fmt_rat(&c.p), fmt_rat(&c.q)]
    }
}

impl Chord {
    pub fn new(p: Rat, q: Rat) -> Result<Self, GeomError> {
        if p >= q {
            return Err(GeomError::BadChord {
                p: fmt_rat(&p),
                q: fmt_rat(&q),
            });
        }
        Ok(Chord { p, q })
    }

    /// Chord from two endpoints given in either order.
    pub fn between(a: Rat, b: Rat) -> Result<Self, GeomError> {
        if a <= b {
            Chord::new(a, b)
        } else {
            Chord::new(b, a)
        }
    }

    pub fn ints(p: i64, q: i64) -> Self {
        Chord::new(int(p), int(q)).expect("p < q")
    }

    /// The chord cut from the line `y = slope·x + intercept`, when both
    /// intersection points with the parabola are rational.
    pub fn from_line(slope: &Rat, intercept: &Rat) -> Result<Self, GeomError> {
        // x² − slope·x − intercept = 0.
        let disc = slope * slope + int(4) * intercept;
        if !disc.is_positive() {
            return Err(GeomError::IrrationalRoots);
        }
        let root = rat_sqrt(&disc).ok_or(GeomError::IrrationalRoots)?;
        let two = int(2);
        Chord::new((slope - &root) / &two, (slope + &root) / &two)
    }

    pub fn p(&self) -> &Rat {
        &self.p
    }

    pub fn q(&self) -> &Rat {
        &self.q
    }

    /// Slope `p + q` of the supporting line.
    pub fn slope(&self) -> Rat {
        &self.p + &self.q
    }

    /// `pq`, so that the supporting line is `y = slope·x − pq`.
    pub fn offset(&self) -> Rat {
        &self.p * &self.q
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.slope() * x - self.offset()
    }

    /// Strictly inside the x-range of the chord.
    pub fn spans(&self, x: &Rat) -> bool {
        &self.p < x && x < &self.q
    }

    pub fn left(&self) -> Point {
        Point::new(self.p.clone(), &self.p * &self.p)
    }

    pub fn right(&self) -> Point {
        Point::new(self.q.clone(), &self.q * &self.q)
    }

    pub fn mirrored(&self) -> Chord {
        Chord {
            p: -&self.q,
            q: -&self.p,
        }
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rat(&self.p), fmt_rat(&self.q))
    }
}

fn rat_sqrt(r: &Rat) -> Option<Rat> {
    let n = r.numer();
    let d = r.denom();
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rat::new(sn, sd))
}

/// Intersection of the supporting lines, or `None` when parallel.
pub fn line_intersection(a: &Chord, b: &Chord) -> Option<Point> {
    let ds = a.slope() - b.slope();
    if ds.is_zero() {
        return None;
    }
    let x = (a.offset() - b.offset()) / ds;
    let y = a.eval(&x);
    Some(Point::new(x, y))
}

/// Intersection point of two chords, when their supporting lines meet
/// strictly inside both x-ranges.
pub fn intersect_chords(a: &Chord, b: &Chord) -> Result<Option<Point>, GeomError> {
    if a == b {
        return Err(GeomError::IdenticalChords);
    }
    Ok(line_intersection(a, b).filter(|z| a.spans(&z.x) && b.spans(&z.x)))
}

/// Horizontal distances around `z = ac ∩ bd` for four parabola points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParabolaRatio {
    #[serde(with = "rat_serde")]
    pub p: Rat,
    #[serde(with = "rat_serde")]
    pub q: Rat,
    #[serde(with = "rat_serde")]
    pub r: Rat,
    #[serde(with = "rat_serde")]
    pub s: Rat,
    pub ps_equals_qr: bool,
}

/// `p = b − a`, `q = d − c`, `r = z − b`, `s = c − z` for `z` the
/// x-coordinate of `ac ∩ bd`.
pub fn parabola_ratio(a: &Rat, b: &Rat, c: &Rat, d: &Rat) -> Result<ParabolaRatio, GeomError> {
    if !(a < b && b < c && c < d) {
        return Err(GeomError::NotIncreasing);
    }
    let ac = Chord::new(a.clone(), c.clone())?;
    let bd = Chord::new(b.clone(), d.clone())?;
    let z = line_intersection(&ac, &bd).ok_or(GeomError::NoCrossing(0, 1))?;
    let (p, q, r, s) = (b - a, d - c, &z.x - b, c - &z.x);
    let ps_equals_qr = &p * &s == &q * &r;
    Ok(ParabolaRatio {
        p,
        q,
        r,
        s,
        ps_equals_qr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderClass {
    Concave,
    Convex,
    Neither,
}

impl fmt::Display for OrderClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderClass::Concave => "concave",
            OrderClass::Convex => "convex",
            OrderClass::Neither => "neither",
        })
    }
}

/// Checks `L_1 < … < L_m < R_1 < … < R_m`.
pub fn check_fan_order(chords: &[Chord]) -> Result<(), GeomError> {
    for (i, w) in chords.windows(2).enumerate() {
        if w[0].p >= w[1].p {
            return Err(GeomError::OrderViolation(format!("L{} >= L{}", i + 1, i + 2)));
        }
        if w[0].q >= w[1].q {
            return Err(GeomError::OrderViolation(format!("R{} >= R{}", i + 1, i + 2)));
        }
    }
    if let (Some(first), Some(last)) = (chords.first(), chords.last()) {
        if last.p >= first.q {
            return Err(GeomError::OrderViolation(format!("L{} >= R1", chords.len())));
        }
    }
    Ok(())
}

/// x-coordinates of `a_{i+1} ∩ a_i` for consecutive chords of a fan.
pub fn fan_crossings(chords: &[Chord]) -> Result<Vec<Rat>, GeomError> {
    check_fan_order(chords)?;
    chords
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            intersect_chords(&w[0], &w[1])?
                .map(|z| z.x)
                .ok_or(GeomError::NoCrossing(i, i + 1))
        })
        .collect()
}

/// Concave when `a_m ∩ a_{m−1}, …, a_2 ∩ a_1` lie left to right, convex
/// for the reverse. Lists of at most two chords count as concave.
pub fn intersection_order_class(chords: &[Chord]) -> Result<OrderClass, GeomError> {
    let xs = fan_crossings(chords)?;
    if xs.len() <= 1 {
        return Ok(OrderClass::Concave);
    }
    if xs.windows(2).all(|w| w[0] > w[1]) {
        Ok(OrderClass::Concave)
    } else if xs.windows(2).all(|w| w[0] < w[1]) {
        Ok(OrderClass::Convex)
    } else {
        Ok(OrderClass::Neither)
    }
}

/// Gaps of three concave chords `ad, be, cf` and the three ratio claims.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioProfile {
    #[serde(with = "rat_serde")]
    pub alpha1: Rat,
    #[serde(with = "rat_serde")]
    pub alpha2: Rat,
    #[serde(with = "rat_serde")]
    pub gamma: Rat,
    #[serde(with = "rat_serde")]
    pub beta1: Rat,
    #[serde(with = "rat_serde")]
    pub beta2: Rat,
    pub claim1: bool,
    pub claim2: bool,
    pub claim3: bool,
}

impl RatioProfile {
    /// `β1 < β2`.
    pub fn beta_grows(&self) -> bool {
        self.beta1 < self.beta2
    }

    /// `α2 < γ + β1 + β2`.
    pub fn alpha_short(&self) -> bool {
        self.alpha2 < &self.gamma + &self.beta1 + &self.beta2
    }
}

/// Gap profile of a concave triple.
pub fn ratio_profile(triple: &[Chord; 3]) -> Result<RatioProfile, GeomError> {
    let class = intersection_order_class(triple)?;
    if class != OrderClass::Concave {
        return Err(GeomError::NotConcave(class));
    }
    Ok(profile_unchecked(triple))
}

/// Gaps of a fan of three chords, without checking concavity.
pub fn profile_unchecked(t: &[Chord; 3]) -> RatioProfile {
    let alpha1 = &t[1].p - &t[0].p;
    let alpha2 = &t[2].p - &t[1].p;
    let gamma = &t[0].q - &t[2].p;
    let beta1 = &t[1].q - &t[0].q;
    let beta2 = &t[2].q - &t[1].q;
    // a/b > c/d with positive denominators is a·d > c·b.
    let claim1 = &alpha1 * &gamma > &alpha2 * &beta1 && &beta2 * &gamma > &beta1 * &alpha2;
    let claim2 = &alpha1 * &beta2 > &alpha2 * &beta1;
    let mut p = RatioProfile {
        alpha1,
        alpha2,
        gamma,
        beta1,
        beta2,
        claim1,
        claim2,
        claim3: false,
    };
    p.claim3 = p.beta_grows() || p.alpha_short();
    p
}

/// `R_k − L_1 > 2(R_{k−1} − L_1)` for every `k ≥ 2`.
pub fn is_wide(chords: &[Chord]) -> Result<bool, GeomError> {
    check_fan_order(chords)?;
    let Some(first) = chords.first() else {
        return Ok(true);
    };
    let two = int(2);
    Ok(chords
        .windows(2)
        .all(|w| &w[1].q - &first.p > &two * (&w[0].q - &first.p)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WideFan {
    #[serde(serialize_with = "ser_rats")]
    pub gaps: Vec<Rat>,
    /// `gaps[k] > gaps[k+1] + … + gaps[m−2]` for each `k ≤ m − 3`.
    pub dominance: Vec<bool>,
}

impl WideFan {
    pub fn all_dominant(&self) -> bool {
        self.dominance.iter().all(|&b| b)
    }
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_rat))
}

/// Left-endpoint gaps of a wide concave set with their dominance flags.
pub fn wide_fan_gaps(chords: &[Chord]) -> Result<WideFan, GeomError> {
    if !is_wide(chords)? {
        return Err(GeomError::NotWide);
    }
    let class = intersection_order_class(chords)?;
    if class != OrderClass::Concave {
        return Err(GeomError::NotConcave(class));
    }
    let gaps: Vec<Rat> = chords.windows(2).map(|w| &w[1].p - &w[0].p).collect();
    let mut dominance = Vec::new();
    let mut tail = Rat::zero();
    for k in (0..gaps.len()).rev() {
        if k + 1 < gaps.len() {
            dominance.push(gaps[k] > tail);
        }
        tail += &gaps[k];
    }
    dominance.reverse();
    Ok(WideFan { gaps, dominance })
}

/// Rational point of the unit circle for parameter `t`.
pub fn circle_point(t: &Rat) -> Point {
    let t2 = t * t;
    let den = Rat::one() + &t2;
    Point::new((Rat::one() - &t2) / &den, (int(2) * t) / den)
}

/// `(x, y) ↦ (x/(1−y), (1+y)/(1−y))`, sending the unit circle minus
/// `(0, 1)` onto the parabola.
pub fn map_circle_to_parabola(pt: &Point) -> Result<Point, GeomError> {
    if &pt.x * &pt.x + &pt.y * &pt.y != Rat::one() {
        return Err(GeomError::NotOnCircle);
    }
    let den = Rat::one() - &pt.y;
    if den.is_zero() {
        return Err(GeomError::ExcludedPoint);
    }
    Ok(Point::new(&pt.x / &den, (Rat::one() + &pt.y) / den))
}

/// The parabola chord joining the images of two circle points.
pub fn map_circle_chord(a: &Point, b: &Point) -> Result<Chord, GeomError> {
    let (pa, pb) = (map_circle_to_parabola(a)?, map_circle_to_parabola(b)?);
    Chord::between(pa.x, pb.x)
}

/// `x ↦ ax + b`.
pub fn affine_remap(x: &Rat, a: &Rat, b: &Rat) -> Result<Rat, GeomError> {
    if a.is_zero() {
        return Err(GeomError::ZeroScale);
    }
    Ok(a * x + b)
}

/// `(x, y) ↦ (ax + b, 2abx + a²y + b²)`, which maps the parabola to itself.
pub fn affine_point(pt: &Point, a: &Rat, b: &Rat) -> Result<Point, GeomError> {
    let x = affine_remap(&pt.x, a, b)?;
    let y = int(2) * a * b * &pt.x + a * a * &pt.y + b * b;
    Ok(Point::new(x, y))
}

/// Applies `x ↦ ax + b` to both endpoints of every chord.
pub fn remap_chords(chords: &[Chord], a: &Rat, b: &Rat) -> Result<Vec<Chord>, GeomError> {
    chords
        .iter()
        .map(|c| Chord::between(affine_remap(&c.p, a, b)?, affine_remap(&c.q, a, b)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: i64, q: i64) -> Chord {
        Chord::ints(p, q)
    }

    /// Line through two points by the two-point form, solved with Cramer's
    /// rule; independent of the slope/offset shortcut.
    fn oracle_meet(a: (Rat, Rat), b: (Rat, Rat), c: (Rat, Rat), d: (Rat, Rat)) -> (Rat, Rat) {
        // Line through P, Q: (Qy − Py)·x − (Qx − Px)·y = (Qy − Py)·Px − (Qx − Px)·Py.
        let coef = |p: &(Rat, Rat), q: &(Rat, Rat)| {
            let a1 = &q.1 - &p.1;
            let b1 = -(&q.0 - &p.0);
            let c1 = &a1 * &p.0 + &b1 * &p.1;
            (a1, b1, c1)
        };
        let (a1, b1, c1) = coef(&a, &b);
        let (a2, b2, c2) = coef(&c, &d);
        let det = &a1 * &b2 - &a2 * &b1;
        ((&c1 * &b2 - &c2 * &b1) / &det, (&a1 * &c2 - &a2 * &c1) / det)
    }

    fn on(x: Rat) -> (Rat, Rat) {
        let y = &x * &x;
        (x, y)
    }

    #[test]
    fn intersections() {
        let z = intersect_chords(&c(-2, 1), &c(-1, 2)).unwrap().unwrap();
        let (ox, oy) = oracle_meet(on(int(-2)), on(int(1)), on(int(-1)), on(int(2)));
        assert_eq!((z.x.clone(), z.y.clone()), (ox, oy));
        assert_eq!(z, Point::new(int(0), int(2)));
        assert_eq!(intersect_chords(&c(0, 1), &c(2, 3)).unwrap(), None);
        // Equal slopes p + q: parallel supporting lines.
        assert_eq!(intersect_chords(&c(0, 3), &c(1, 2)).unwrap(), None);
        // Interleaved endpoints always cross.
        let z = intersect_chords(&c(0, 2), &c(1, 3)).unwrap().unwrap();
        assert_eq!(z, Point::new(rat(3, 2), int(3)));
        assert_eq!(intersect_chords(&c(0, 2), &c(0, 2)), Err(GeomError::IdenticalChords));
    }

    #[test]
    fn parabola_ratio_examples() {
        let r = parabola_ratio(&int(0), &int(1), &int(2), &int(4)).unwrap();
        let (zx, _) = oracle_meet(on(int(0)), on(int(2)), on(int(1)), on(int(4)));
        assert_eq!(zx, rat(4, 3));
        assert_eq!((r.p, r.q, r.r, r.s), (int(1), int(2), rat(1, 3), rat(2, 3)));
        assert!(r.ps_equals_qr);
        let r = parabola_ratio(&int(0), &int(1), &int(2), &int(3)).unwrap();
        assert_eq!((r.p, r.q, r.r, r.s), (int(1), int(1), rat(1, 2), rat(1, 2)));
        let r = parabola_ratio(&int(-1), &int(0), &int(1), &int(2)).unwrap();
        assert_eq!((r.p, r.q, r.r, r.s), (int(1), int(1), rat(1, 2), rat(1, 2)));
        assert!(parabola_ratio(&int(1), &int(0), &int(2), &int(3)).is_err());
    }

    #[test]
    fn order_classes() {
        let concave = [c(0, 10), c(1, 11), c(2, 16)];
        assert_eq!(fan_crossings(&concave).unwrap(), vec![rat(11, 2), rat(7, 2)]);
        assert_eq!(intersection_order_class(&concave).unwrap(), OrderClass::Concave);
        let convex = [c(0, 3), c(1, 4), c(2, 5)];
        assert_eq!(fan_crossings(&convex).unwrap(), vec![int(2), int(3)]);
        assert_eq!(intersection_order_class(&convex).unwrap(), OrderClass::Convex);
        assert_eq!(
            intersection_order_class(&[c(0, 3), c(1, 4)]).unwrap(),
            OrderClass::Concave
        );
        assert!(matches!(
            intersection_order_class(&[c(0, 3), c(4, 5)]),
            Err(GeomError::OrderViolation(_))
        ));
    }

    #[test]
    fn ratio_profile_example() {
        let p = ratio_profile(&[c(0, 10), c(1, 11), c(2, 16)]).unwrap();
        assert_eq!(
            [&p.alpha1, &p.alpha2, &p.gamma, &p.beta1, &p.beta2],
            [&int(1), &int(1), &int(8), &int(1), &int(5)]
        );
        assert!(p.claim1 && p.claim2 && p.claim3);
        assert!(matches!(
            ratio_profile(&[c(0, 3), c(1, 4), c(2, 5)]),
            Err(GeomError::NotConcave(OrderClass::Convex))
        ));
    }

    #[test]
    fn wide_examples() {
        let w = [
            Chord::new(int(0), int(1)).unwrap(),
            Chord::new(rat(1, 10), int(3)).unwrap(),
            Chord::new(rat(1, 5), int(7)).unwrap(),
        ];
        assert!(is_wide(&w).unwrap());
        let nw = [c(0, 1), Chord::new(rat(1, 10), int(2)).unwrap()];
        assert!(!is_wide(&nw).unwrap());
        assert!(is_wide(&[c(0, 1)]).unwrap());
    }

    #[test]
    fn wide_fan_examples() {
        let two = [c(0, 1), Chord::new(rat(1, 2), int(3)).unwrap()];
        let f = wide_fan_gaps(&two).unwrap();
        assert!(f.dominance.is_empty());
        // Wide but convex.
        let convex = [c(0, 10), c(1, 21), c(2, 43)];
        assert!(is_wide(&convex).unwrap());
        assert_eq!(intersection_order_class(&convex).unwrap(), OrderClass::Convex);
        assert!(matches!(wide_fan_gaps(&convex), Err(GeomError::NotConcave(_))));
    }

    #[test]
    fn circle_map() {
        let m = map_circle_to_parabola(&Point::new(int(0), int(-1))).unwrap();
        assert_eq!(m, Point::new(int(0), int(0)));
        let m = map_circle_to_parabola(&Point::new(int(1), int(0))).unwrap();
        assert_eq!(m, Point::new(int(1), int(1)));
        assert_eq!(
            map_circle_to_parabola(&Point::new(int(0), int(1))),
            Err(GeomError::ExcludedPoint)
        );
        assert_eq!(
            map_circle_to_parabola(&Point::new(int(1), int(1))),
            Err(GeomError::NotOnCircle)
        );
        let t = rat(1, 3);
        let m = map_circle_to_parabola(&circle_point(&t)).unwrap();
        assert!(m.on_parabola());
        assert_eq!(m.x, (Rat::one() + &t) / (Rat::one() - &t));
    }

    #[test]
    fn affine() {
        assert_eq!(affine_remap(&int(5), &int(1), &int(0)).unwrap(), int(5));
        let pt = affine_point(&Point::new(int(3), int(9)), &int(2), &int(1)).unwrap();
        assert_eq!(pt, Point::new(int(7), int(49)));
        assert_eq!(affine_remap(&int(1), &int(0), &int(1)), Err(GeomError::ZeroScale));
    }

    #[test]
    fn literals() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-7").unwrap(), int(-7));
        assert_eq!(parse_rat("-0.25").unwrap(), rat(-1, 4));
        assert!(parse_rat("1/0").is_err());
        assert_eq!(fmt_rat(&rat(-6, 4)), "-3/2");
        let ch: Chord = serde_json::from_str(r#"["-1/2", 3]"#).unwrap();
        assert_eq!(serde_json::to_string(&ch).unwrap(), r#"["-1/2","3"]"#);
        assert!(serde_json::from_str::<Chord>(r#"[3, 1]"#).is_err());
    }

    #[test]
    fn chord_from_line() {
        // y = x + 2 meets y = x² at −1 and 2.
        assert_eq!(Chord::from_line(&int(1), &int(2)).unwrap(), c(-1, 2));
        assert_eq!(Chord::from_line(&int(0), &int(2)), Err(GeomError::IrrationalRoots));
    }
}

//! Subcommand implementations. Each returns the text for stdout; file
//! outputs go through the [`Recorder`] so they land in the manifest.

use std::fmt;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use zonekit::configs::{build_config, Config, ConfigKind};
use zonekit::geom::{
    self, fmt_rat, parabola_ratio, parse_rat, ratio_profile, rat_serde::Lit, wide_fan_gaps, Chord,
    Point, Rat,
};
use zonekit::hs::{self, HsParams};
use zonekit::patterns::{self, PatternWitness};
use zonekit::realizer::{search_parallel, SearchOptions, Strategy};
use zonekit::{svg, zone, Seq};

use crate::manifest::Recorder;
use crate::{
    Command, ConfigBuild, ConfigCmd, Emit, ExBrute, ExCmd, GeomCheck, GeomCmd, HsCmd, HsGen,
    KindArg, Lemma, MapCircle, MapCmd, RealizeCmd, RealizeSearch, SeqCheck, SeqCmd, SeqEndpoints,
    ZoneCmd, ZoneRun,
};

/// A run stopped by a size limit of this tool rather than bad input.
#[derive(Debug)]
pub struct BudgetExceeded(pub String);

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BudgetExceeded {}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Hs(HsCmd::Gen(_)) => "hs gen",
        Command::Seq(SeqCmd::Check(_)) => "seq check",
        Command::Seq(SeqCmd::Endpoints(_)) => "seq endpoints",
        Command::Ex(ExCmd::Brute(_)) => "ex brute",
        Command::Config(ConfigCmd::Build(_)) => "config build",
        Command::Realize(RealizeCmd::Search(_)) => "realize search",
        Command::Geom(GeomCmd::Check(_)) => "geom check",
        Command::Zone(ZoneCmd::Run(_)) => "zone run",
        Command::Map(MapCmd::CircleToParabola(_)) => "map circle-to-parabola",
    }
}

/// Runs one subcommand, prints its output and writes the manifest.
pub fn run(cmd: Command, manifest: Option<&Path>) -> Result<()> {
    let mut rec = Recorder::new(name(&cmd));
    let out = match cmd {
        Command::Hs(HsCmd::Gen(a)) => hs_gen(a, &mut rec),
        Command::Seq(SeqCmd::Check(a)) => seq_check(a, &mut rec),
        Command::Seq(SeqCmd::Endpoints(a)) => seq_endpoints(a, &mut rec),
        Command::Ex(ExCmd::Brute(a)) => ex_brute(a, &mut rec),
        Command::Config(ConfigCmd::Build(a)) => config_build(a, &mut rec),
        Command::Realize(RealizeCmd::Search(a)) => realize_search(a, &mut rec),
        Command::Geom(GeomCmd::Check(a)) => geom_check(a, &mut rec),
        Command::Zone(ZoneCmd::Run(a)) => zone_run(a, &mut rec),
        Command::Map(MapCmd::CircleToParabola(a)) => map_circle(a, &mut rec),
    }?;
    if !out.is_empty() {
        println!("{out}");
    }
    rec.stdout(&out);
    rec.finish(manifest)?;
    Ok(())
}

fn read_seq(text: &str) -> Result<Seq> {
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(text).context("invalid sequence JSON")?)
    } else {
        Ok(Seq::parse_plain(text)?)
    }
}

fn witness_json(w: &PatternWitness) -> Value {
    json!({
        "mapping": w.mapping.iter().map(|(a, b)| [a.0, b.0]).collect::<Vec<_>>(),
        "positions": w.positions,
    })
}

fn hs_gen(a: HsGen, rec: &mut Recorder) -> Result<String> {
    rec.param("k", a.k);
    rec.param("m", a.m);
    rec.param("budget", a.budget);
    rec.param("format", if a.json { "json" } else { "text" });
    let p = HsParams::new(a.k, a.m)?;
    let s = hs::hart_sharir(p, a.budget)?;
    let body = if a.json { s.to_json() } else { s.to_string() };
    if a.verify {
        let violations = hs::verify(&s, p);
        if let Some(v) = violations.first() {
            bail!("{} invariant checks failed; first: {}: {}", violations.len(), v.check, v.detail);
        }
        eprintln!("verified: all invariants hold");
    }
    match &a.out {
        Some(path) => {
            rec.write(path, &(body + "\n"))?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn seq_check(a: SeqCheck, rec: &mut Recorder) -> Result<String> {
    rec.param("pattern", &a.pattern);
    rec.param("structural", a.structural);
    let host = read_seq(&rec.read(&a.input)?)?;
    let result = match a.pattern.as_str() {
        "ababa" if !a.structural => match patterns::find_ababa(&host) {
            Some(pos) => json!({ "contains": true, "positions": pos }),
            None => json!({ "contains": false }),
        },
        other => {
            let pattern = match other {
                "ababa" => Seq::parse_plain("ababa")?,
                "abcaccbc" => Seq::parse_plain("abcaccbc")?,
                _ => {
                    let path = other
                        .strip_prefix("file:")
                        .ok_or_else(|| anyhow!("unknown pattern {other:?}"))?;
                    read_seq(&rec.read(Path::new(path))?)?
                }
            };
            let found = if a.structural {
                patterns::structurally_contains(&host, &pattern, None)?
            } else {
                rec.param("steps", a.steps);
                patterns::contains_isomorphic_budget(&host, &pattern, a.steps)?
            };
            match found {
                Some(w) => json!({ "contains": true, "witness": witness_json(&w) }),
                None => json!({ "contains": false }),
            }
        }
    };
    Ok(result.to_string())
}

fn seq_endpoints(a: SeqEndpoints, rec: &mut Recorder) -> Result<String> {
    let u = read_seq(&rec.read(&a.input)?)?;
    let e = zonekit::seq::endpoint_seq(&u)?;
    Ok(if a.json {
        serde_json::to_string(&e)?
    } else {
        e.to_string()
    })
}

fn ex_brute(a: ExBrute, rec: &mut Recorder) -> Result<String> {
    rec.param("n", a.n);
    let forbidden = a
        .forbidden
        .iter()
        .map(|p| read_seq(&rec.read(p)?))
        .collect::<Result<Vec<_>>>()?;
    let r = patterns::max_ds_length(&forbidden, a.n)?;
    Ok(json!({
        "n": r.n,
        "max_length": r.max_length,
        "witness": r.witness.to_string(),
    })
    .to_string())
}

fn need<T>(v: Option<T>, flag: &str, kind: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("--kind {kind} needs --{flag}"))
}

fn config_kind(a: &ConfigBuild) -> Result<ConfigKind> {
    Ok(match a.kind {
        KindArg::X => ConfigKind::X,
        KindArg::Y => ConfigKind::Y,
        KindArg::Thm31 => ConfigKind::Thm31,
        KindArg::T => ConfigKind::T {
            n: need(a.n, "n", "T")?,
        },
        KindArg::Tj => ConfigKind::Tj {
            j: need(a.j, "j", "Tj")?,
            n: need(a.n, "n", "Tj")?,
        },
        KindArg::Z => ConfigKind::Z {
            m: need(a.m, "m", "Z")?,
        },
        KindArg::Zj => ConfigKind::Zj {
            j: need(a.j, "j", "Zj")?,
            m: need(a.m, "m", "Zj")?,
        },
        KindArg::Yf => ConfigKind::YF { m: a.m.unwrap_or(5) },
        KindArg::F => ConfigKind::F {
            m: need(a.m, "m", "F")?,
            wide: a.wide,
        },
    })
}

fn config_build(a: ConfigBuild, rec: &mut Recorder) -> Result<String> {
    let kind = config_kind(&a)?;
    rec.param("kind", kind.name());
    for (k, v) in [("n", a.n.map(|x| x as usize)), ("j", a.j), ("m", a.m)] {
        if let Some(v) = v {
            rec.param(k, v);
        }
    }
    if a.wide {
        rec.param("wide", true);
    }
    let cfg = build_config(kind)?;
    rec.write(&a.out, &(cfg.to_json() + "\n"))?;
    Ok(format!(
        "{}: {} segments, concave groups: {}, wide groups: {}",
        kind.name(),
        cfg.symbols().len(),
        cfg.concave_groups.len(),
        cfg.wide_groups.len()
    ))
}

fn realize_search(a: RealizeSearch, rec: &mut Recorder) -> Result<String> {
    let cfg: Config =
        serde_json::from_str(&rec.read(&a.config)?).context("invalid configuration JSON")?;
    rec.param("budget", a.budget);
    rec.seed(a.seed);
    let mut opts = SearchOptions::new(a.budget, a.seed);
    if !a.strategy.is_empty() {
        let list = a
            .strategy
            .iter()
            .map(|s| s.parse::<Strategy>().map_err(|e| anyhow!(e)))
            .collect::<Result<Vec<_>>>()?;
        opts = opts.with_strategies(&list);
    }
    rec.param(
        "strategies",
        opts.strategies.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","),
    );
    if a.exhaust {
        rec.param("exhaust", true);
        opts = opts.exhausting();
    }
    let report = search_parallel(&cfg, &opts, a.jobs);
    if let Some(path) = &a.report {
        rec.write(path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }
    let trials: u64 = report.strategies.iter().map(|s| s.trials).sum();
    Ok(match report.found_at {
        Some(i) => format!("realization found at trial {i}"),
        None => format!(
            "no realization found in {trials} trials (seed {}, at most {} of {} groups satisfied)",
            a.seed, report.max_satisfied, report.total_groups
        ),
    })
}

fn lits_to_rats(lits: Vec<Lit>) -> Result<Vec<Rat>> {
    lits.into_iter().map(|l| Ok(l.into_rat()?)).collect()
}

fn geom_check(a: GeomCheck, rec: &mut Recorder) -> Result<String> {
    let text = rec.read(&a.coords)?;
    let (name, value, holds) = match a.lemma {
        Lemma::ParabolaRatio => {
            let xs = lits_to_rats(serde_json::from_str(&text).context("expected four rationals")?)?;
            let [x1, x2, x3, x4] = xs.as_slice() else {
                bail!("parabola-ratio needs exactly four x-coordinates");
            };
            let r = parabola_ratio(x1, x2, x3, x4)?;
            ("parabola-ratio", serde_json::to_value(&r)?, r.ps_equals_qr)
        }
        Lemma::Ratios => {
            let chords: Vec<Chord> = serde_json::from_str(&text).context("expected chords")?;
            let t: [Chord; 3] = chords
                .try_into()
                .map_err(|_| anyhow!("ratios needs exactly three chords"))?;
            let p = ratio_profile(&t)?;
            let holds = p.claim1 && p.claim2 && p.claim3;
            ("ratios", serde_json::to_value(&p)?, holds)
        }
        Lemma::WideFan => {
            let chords: Vec<Chord> = serde_json::from_str(&text).context("expected chords")?;
            let w = wide_fan_gaps(&chords)?;
            ("wide-fan", serde_json::to_value(&w)?, w.all_dominant())
        }
    };
    rec.param("lemma", name);
    let out = json!({ "lemma": name, "holds": holds, "values": value }).to_string();
    if !holds {
        println!("{out}");
        bail!("{name} does not hold for these coordinates");
    }
    Ok(out)
}

fn read_chords(text: &str) -> Result<Vec<Chord>> {
    if text.trim_start().starts_with('[') {
        return Ok(serde_json::from_str(text).context("invalid chord JSON")?);
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.context("invalid chord CSV")?;
        if row.len() != 2 {
            bail!("CSV row {} has {} fields, expected 2", i + 1, row.len());
        }
        out.push(Chord::between(parse_rat(&row[0])?, parse_rat(&row[1])?)?);
    }
    Ok(out)
}

fn emit_name(e: Emit) -> &'static str {
    match e {
        Emit::Sprime => "sprime",
        Emit::S => "s",
        Emit::Envelope => "envelope",
        Emit::Complexity => "complexity",
        Emit::Svg => "svg",
    }
}

fn zone_run(a: ZoneRun, rec: &mut Recorder) -> Result<String> {
    let chords = read_chords(&rec.read(&a.chords)?)?;
    let emits: Vec<Emit> = a.emit.iter().fold(Vec::new(), |mut v, &e| {
        if !v.contains(&e) {
            v.push(e);
        }
        v
    });
    rec.param(
        "emit",
        emits.iter().map(|&e| emit_name(e)).collect::<Vec<_>>().join(","),
    );
    let arr = zone::build_arrangement(&chords)?;
    let t = zone::zone_tour(&arr)?;
    let mut fields: Vec<(&str, Value)> = Vec::new();
    for &e in &emits {
        let v = match e {
            Emit::Sprime => json!(t.s_prime_text()),
            Emit::S => json!(t.s_text()),
            Emit::Envelope => json!(zone::lower_envelope(&chords).to_string()),
            Emit::Complexity => json!(zone::zone_complexity(&arr).total),
            Emit::Svg => {
                let doc = svg::render(&arr, Some(&t));
                match &a.svg_out {
                    Some(path) => {
                        rec.write(path, &doc)?;
                        json!(path.display().to_string())
                    }
                    None => json!(doc),
                }
            }
        };
        fields.push((emit_name(e), v));
    }
    if a.json {
        let obj: serde_json::Map<String, Value> =
            fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        return Ok(Value::Object(obj).to_string());
    }
    let raw = |v: &Value| match v {
        Value::String(s) => s.trim_end().to_string(),
        other => other.to_string(),
    };
    Ok(match fields.as_slice() {
        [(_, v)] => raw(v),
        _ => fields
            .iter()
            .map(|(k, v)| format!("{k}: {}", raw(v)))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn point_json(p: &Point) -> Value {
    json!([fmt_rat(&p.x), fmt_rat(&p.y)])
}

fn map_circle(a: MapCircle, rec: &mut Recorder) -> Result<String> {
    let mut points: Vec<Point> = Vec::new();
    if let Some(path) = &a.points {
        let raw: Vec<[Lit; 2]> =
            serde_json::from_str(&rec.read(path)?).context("expected a list of [x, y] points")?;
        for [x, y] in raw {
            points.push(Point::new(x.into_rat()?, y.into_rat()?));
        }
    }
    if !a.t.is_empty() {
        rec.param("t", a.t.join(","));
        for t in &a.t {
            points.push(geom::circle_point(&parse_rat(t)?));
        }
    }
    let mapped = points
        .iter()
        .map(|p| Ok(json!({ "circle": point_json(p), "parabola": point_json(&geom::map_circle_to_parabola(p)?) })))
        .collect::<Result<Vec<_>>>()?;
    Ok(Value::Array(mapped).to_string())
}

//! Command-line front end.  Every command prints one JSON report on
//! standard output; SVG goes only to `--out`.
//!
//! Exit codes: 0 when a verdict was computed, 2 when the answer is
//! inconclusive at the given budget or radius, 1 for input errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::axes::{self, AxisData, Interval, TranslateEntry};
use crate::complex::{parse_complex, Complex2};
use crate::cover::{build_cover, edge_word_letters, parse_edge_word, Cover, CoverKind, CoverMode, CoverSpec};
use crate::ends;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::hypgeom::{self, HypStructure, MinimizeConfig};
use crate::intersect;
use crate::normalize;
use crate::pattern::{parse_pattern, Pattern};
use crate::render;
use crate::search::{self, SearchMode};

pub const SCHEMA: &str = "trackcalc.report/1";

#[derive(Parser, Debug)]
#[command(name = "trackcalc", version, about = "Patterns and tracks in 2-complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Convergence tolerance for length minimisation.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 20000)]
    max_iter: usize,
    /// Seed for randomised drivers; echoed in the report.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Clone, Default)]
struct CoverArgs {
    /// Use the file's cocycle with this index (repeatable); default all.
    #[arg(long)]
    cocycle: Vec<usize>,
    /// Subgroup generators as `;`-separated edge words; empty for the trivial subgroup.
    #[arg(long)]
    subgroup: Option<String>,
    /// Build the finite cyclic cover of this degree.
    #[arg(long)]
    finite: Option<u32>,
    /// Truncation radius; verdicts are recomputed at radius + 1.
    #[arg(long)]
    radius: Option<u32>,
    #[arg(long, default_value_t = 2000)]
    coset_bound: usize,
    /// Patterns are given on the cover rather than on the base complex.
    #[arg(long)]
    in_cover: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a complex and any patterns on it.
    Validate { complex: String, patterns: Vec<PathBuf> },
    /// Build a cover; `--out` writes it as a complex file.
    Cover {
        complex: String,
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalise a pattern, logging every move.
    Normalize {
        complex: String,
        pattern: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least-complexity essential or one-sided pattern up to a weight bound.
    Shortest {
        complex: String,
        #[arg(long, default_value = "essential")]
        mode: String,
        #[arg(long, default_value_t = 6)]
        weight_bound: usize,
        #[command(flatten)]
        cover: CoverArgs,
    },
    /// Complement and essentiality of a pattern, or the number of ends of a cover.
    Ends {
        complex: String,
        pattern: Option<PathBuf>,
        #[command(flatten)]
        cover: CoverArgs,
    },
    /// Crossing verdict for two axes, with A#B over `--end`.
    Cross {
        complex: String,
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        end: Option<String>,
        #[command(flatten)]
        cover: CoverArgs,
    },
    /// Canonical triple over a translate family.
    Triple {
        complex: String,
        a: PathBuf,
        family: PathBuf,
        #[command(flatten)]
        cover: CoverArgs,
    },
    /// The splitting conditions (a)-(e) for a track and its translates.
    Check51 {
        complex: String,
        track: PathBuf,
        family: Option<PathBuf>,
        #[command(flatten)]
        cover: CoverArgs,
    },
    /// Draw the complex and patterns as SVG.
    Render {
        complex: String,
        patterns: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// One figure per normalisation step of the single pattern given.
        #[arg(long)]
        replay: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Cover { .. } => "cover",
            Command::Normalize { .. } => "normalize",
            Command::Shortest { .. } => "shortest",
            Command::Ends { .. } => "ends",
            Command::Cross { .. } => "cross",
            Command::Triple { .. } => "triple",
            Command::Check51 { .. } => "check51",
            Command::Render { .. } => "render",
        }
    }
}

#[derive(Serialize)]
struct Input {
    path: String,
    sha256: String,
}

struct Ctx {
    inputs: Vec<Input>,
    cfg: MinimizeConfig,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.inputs.push(Input { path: path.display().to_string(), sha256: sha256_hex(text.as_bytes()) });
        Ok(text)
    }

    /// A complex file, or `fixture:<name>` for a built-in fixture.
    fn complex(&mut self, spec: &str) -> Result<Complex2> {
        let text = match spec.strip_prefix("fixture:") {
            Some(name) => {
                let text = fixtures::by_name(name).ok_or_else(|| Error::Io(format!("no fixture `{name}`")))?;
                self.inputs.push(Input { path: spec.to_string(), sha256: sha256_hex(text.as_bytes()) });
                text
            }
            None => self.read(Path::new(spec))?,
        };
        parse_complex(&text)
    }

    fn pattern(&mut self, y: &Complex2, path: &Path) -> Result<crate::pattern::ParsedPattern> {
        let text = self.read(path)?;
        parse_pattern(y, &text)
    }
}

pub fn run(args: &[String]) -> (i32, String) {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let mut ctx = Ctx { inputs: Vec::new(), cfg: MinimizeConfig { tol: cli.tol, max_iter: cli.max_iter } };
    let command = cli.command.name();
    match dispatch(&cli.command, &mut ctx) {
        Ok((code, result, stable)) => {
            let report = json!({
                "schema": SCHEMA,
                "command": command,
                "args": args.iter().skip(1).collect::<Vec<_>>(),
                "seed": cli.seed,
                "inputs": ctx.inputs,
                "stable": stable,
                "exit": code,
                "result": result,
            });
            (code, serde_json::to_string_pretty(&report).unwrap() + "\n")
        }
        Err(e) => (1, format!("error: {e}\n")),
    }
}

type Outcome = Result<(i32, Value, Option<bool>)>;

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Outcome {
    match cmd {
        Command::Validate { complex, patterns } => validate(ctx, complex, patterns),
        Command::Cover { complex, cover, out } => cover_cmd(ctx, complex, cover, out.as_deref()),
        Command::Normalize { complex, pattern, out } => normalize_cmd(ctx, complex, pattern, out.as_deref()),
        Command::Shortest { complex, mode, weight_bound, cover } => shortest(ctx, complex, mode, *weight_bound, cover),
        Command::Ends { complex, pattern, cover } => ends_cmd(ctx, complex, pattern.as_deref(), cover),
        Command::Cross { complex, a, b, end, cover } => cross(ctx, complex, a, b, end.as_deref(), cover),
        Command::Triple { complex, a, family, cover } => triple(ctx, complex, a, family, cover),
        Command::Check51 { complex, track, family, cover } => check51(ctx, complex, track, family.as_deref(), cover),
        Command::Render { complex, patterns, out, replay } => render_cmd(ctx, complex, patterns, out, *replay),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialise")
}

fn validate(ctx: &mut Ctx, complex: &str, patterns: &[PathBuf]) -> Outcome {
    let y = ctx.complex(complex)?;
    let mut links = Vec::new();
    for v in 0..y.n_vertices() {
        let l = y.link(v)?;
        links.push(json!({
            "vertex": y.vertices[v],
            "nodes": l.nodes.len(),
            "arcs": l.arcs.len(),
            "components": l.components.len(),
            "splitting": ends::is_splitting_vertex(&y, v)?,
        }));
    }
    let mut pats = Vec::new();
    for path in patterns {
        let p = ctx.pattern(&y, path)?;
        let t = &p.pattern;
        pats.push(json!({
            "path": path.display().to_string(),
            "weight": t.weight(),
            "components": t.components().len(),
            "normality": to_value(&t.normality(&y)),
            "two_sided": intersect::component_two_sided(&y, t),
            "embedded": t.first_crossing(&y).is_none(),
        }));
    }
    let result = json!({
        "vertices": y.n_vertices(),
        "edges": y.n_edges(),
        "triangles": y.n_triangles(),
        "euler": y.euler(),
        "connected": y.is_connected(),
        "frontier_vertices": (0..y.n_vertices()).filter(|&v| y.frontier_vertex[v]).count(),
        "frontier_edges": (0..y.n_edges()).filter(|&e| y.frontier_edge[e]).count(),
        "cocycles": y.cocycles.len(),
        "links": links,
        "patterns": pats,
    });
    Ok((0, result, None))
}

fn cover_spec(y: &Complex2, c: &CoverArgs) -> Result<CoverSpec> {
    if let Some(words) = &c.subgroup {
        let mut list = Vec::new();
        for w in words.split(';').map(str::trim).filter(|w| !w.is_empty()) {
            list.push(parse_edge_word(y, w)?);
        }
        return Ok(CoverSpec::Subgroup { words: list, coset_bound: c.coset_bound });
    }
    let idx: Vec<usize> = if c.cocycle.is_empty() { (0..y.cocycles.len()).collect() } else { c.cocycle.clone() };
    if idx.is_empty() {
        return Err(Error::Cover("the complex has no cocycle; give --subgroup".into()));
    }
    let mut phis = Vec::new();
    for i in idx {
        let phi = y.cocycles.get(i).ok_or_else(|| Error::Cover(format!("no cocycle with index {i}")))?;
        phis.push(y.normalize_cocycle(phi)?);
    }
    Ok(CoverSpec::Cocycle(phis))
}

fn cover_mode(c: &CoverArgs, radius_step: u32) -> Option<CoverMode> {
    match (c.finite, c.radius) {
        (Some(n), _) => Some(CoverMode::Finite(n)),
        (None, Some(k)) => Some(CoverMode::Truncated(k + radius_step)),
        _ => None,
    }
}

fn wants_cover(c: &CoverArgs) -> bool {
    c.finite.is_some() || c.radius.is_some()
}

fn cover_summary(cv: &Cover) -> Value {
    let y = &cv.complex;
    json!({
        "mode": to_value(&cv.mode),
        "vertices": y.n_vertices(),
        "edges": y.n_edges(),
        "triangles": y.n_triangles(),
        "cells": y.n_cells(),
        "frontier_regions": y.frontier_regions().len(),
        "deck": cv.deck.is_some(),
        "warning": cv.warning,
    })
}

fn cover_cmd(ctx: &mut Ctx, complex: &str, c: &CoverArgs, out: Option<&Path>) -> Outcome {
    let y = ctx.complex(complex)?;
    let mode = cover_mode(c, 0).ok_or_else(|| Error::Cover("give --finite or --radius".into()))?;
    let cv = build_cover(&y, &cover_spec(&y, c)?, mode)?;
    let mut result = cover_summary(&cv);
    if let Some(path) = out {
        let text = cv.complex.to_text();
        std::fs::write(path, &text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        result["written"] = json!({ "path": path.display().to_string(), "sha256": sha256_hex(text.as_bytes()) });
    }
    Ok((0, result, None))
}

fn normalize_cmd(ctx: &mut Ctx, complex: &str, pattern: &Path, out: Option<&Path>) -> Outcome {
    let y = ctx.complex(complex)?;
    let t = ctx.pattern(&y, pattern)?.pattern;
    let (n, log) = normalize::normalize(&y, &t)?;
    let text = n.to_text(&y);
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    let result = json!({
        "before": { "weight": t.weight(), "measure": normalize::measure(&t) },
        "after": { "weight": n.weight(), "measure": normalize::measure(&n), "normal": n.is_normal(&y), "empty": n.is_empty() },
        "log": to_value(&log),
        "pattern": text,
    });
    Ok((0, result, None))
}

fn parse_mode(s: &str) -> Result<SearchMode> {
    match s {
        "essential" => Ok(SearchMode::Essential),
        "one-sided" | "one_sided" | "onesided" => Ok(SearchMode::OneSided),
        _ => Err(Error::Precondition(format!("unknown mode `{s}`; use essential or one-sided"))),
    }
}

/// Base complex and structure, or the cover asked for at `radius + step`.
fn workspace(base: &Complex2, c: &CoverArgs, step: u32) -> Result<(Complex2, HypStructure, Option<Cover>)> {
    let hb = HypStructure::assign(base);
    match cover_mode(c, step) {
        None => Ok((base.clone(), hb, None)),
        Some(mode) => {
            let cv = build_cover(base, &cover_spec(base, c)?, mode)?;
            let h = HypStructure::lift(&hb, &cv);
            Ok((cv.complex.clone(), h, Some(cv)))
        }
    }
}

fn shortest(ctx: &mut Ctx, complex: &str, mode: &str, w: usize, c: &CoverArgs) -> Outcome {
    let base = ctx.complex(complex)?;
    let mode = parse_mode(mode)?;
    let steps: &[u32] = if c.radius.is_some() && c.finite.is_none() { &[0, 1] } else { &[0] };
    let mut runs = Vec::new();
    let mut found = Vec::new();
    for &s in steps {
        let (y, h, cv) = workspace(&base, c, s)?;
        let r = search::shortest_pattern(&y, &h, mode, w, &ctx.cfg, false)?;
        let mut v = json!({ "cover": cv.as_ref().map(cover_summary) });
        match &r {
            Some(sh) => {
                v["weight"] = json!(sh.complexity.weight);
                v["length"] = json!(sh.complexity.length);
                v["converged"] = json!(sh.converged);
                v["candidates"] = json!(sh.candidates);
                v["ties"] = json!(sh.ties);
                v["checks"] = to_value(&sh.checks);
                v["pattern"] = json!(sh.pattern.to_text(&y));
            }
            None => v["pattern"] = Value::Null,
        }
        found.push(r.map(|s| s.complexity));
        runs.push(v);
    }
    let stable = (steps.len() == 2).then(|| match (&found[0], &found[1]) {
        (Some(a), Some(b)) => a.weight == b.weight && (a.length - b.length).abs() <= 1e-6 * a.length.abs().max(1.0),
        _ => false,
    });
    let code = if found[0].is_none() || stable == Some(false) { 2 } else { 0 };
    Ok((code, json!({ "mode": to_value(&mode), "weight_bound": w, "runs": runs }), stable))
}

fn ends_cmd(ctx: &mut Ctx, complex: &str, pattern: Option<&Path>, c: &CoverArgs) -> Outcome {
    let base = ctx.complex(complex)?;
    match pattern {
        None => {
            let k = c.radius.ok_or_else(|| Error::Cover("counting ends needs --radius".into()))?;
            let ec = ends::end_count_estimate(&base, &cover_spec(&base, c)?, k)?;
            let code = if ec.stable { 0 } else { 2 };
            let mut v = to_value(&ec);
            // a lower bound even when the two radii disagree
            v["at_least"] = json!(ec.counts.0.min(ec.counts.1));
            Ok((code, v, Some(ec.stable)))
        }
        Some(path) => {
            let (y, _, cv) = workspace(&base, c, 0)?;
            let t = match (&cv, c.in_cover) {
                (Some(cv), false) => cv.lift_pattern(&base, &ctx.pattern(&base, path)?.pattern),
                _ => ctx.pattern(&y, path)?.pattern,
            };
            let comp = ends::complement_components(&y, &t)?;
            let essential = match ends::is_essential(&y, &t, &intersect::basis(&y)) {
                Ok(Some(e)) => json!({ "essential": true, "witness": e.line, "number": e.number }),
                Ok(None) => json!({ "essential": false }),
                Err(e) => json!({ "essential": Value::Null, "reason": e.to_string() }),
            };
            let result = json!({
                "cover": cv.as_ref().map(cover_summary),
                "components": to_value(&comp.components),
                "infinite": comp.n_infinite(),
                "splits": comp.splits(),
                "essentiality": essential,
            });
            Ok((0, result, None))
        }
    }
}

/// The axis through the base cell for a base track, or the given cover pattern.
fn axis_in(ctx: &mut Ctx, base: &Complex2, y: &Complex2, cv: &Cover, path: &Path, in_cover: bool, label: &str) -> Result<AxisData> {
    if in_cover {
        let p = ctx.pattern(y, path)?;
        return AxisData::new(y, p.pattern, label, p.ends.map(|(a, b)| [a, b]));
    }
    let t = ctx.pattern(base, path)?.pattern;
    let lifts = axes::lift_to_cover(cv, base, &t, label)?;
    let i = axes::nearest_to_base(y, &lifts).ok_or_else(|| Error::Axis(format!("`{label}` lifts to nothing")))?;
    Ok(lifts[i].clone())
}

fn need_cover(c: &CoverArgs) -> Result<()> {
    if wants_cover(c) {
        Ok(())
    } else {
        Err(Error::Cover("axes live in a cover: give --radius or --finite".into()))
    }
}

fn cross(ctx: &mut Ctx, complex: &str, a: &Path, b: &Path, end: Option<&str>, c: &CoverArgs) -> Outcome {
    need_cover(c)?;
    let base = ctx.complex(complex)?;
    let interval = match end {
        Some(s) => Some(Interval::parse(s).ok_or_else(|| Error::Precondition(format!("unknown interval `{s}`; use I1..I4")))?),
        None => None,
    };
    let steps: &[u32] = if c.radius.is_some() && c.finite.is_none() && !c.in_cover { &[0, 1] } else { &[0] };
    let mut runs = Vec::new();
    let mut verdicts = Vec::new();
    for &s in steps {
        let n_inputs = ctx.inputs.len();
        let (y, h, cv) = workspace(&base, c, s)?;
        let cv = cv.unwrap();
        let ax = axis_in(ctx, &base, &y, &cv, a, c.in_cover, "A")?;
        let bx = axis_in(ctx, &base, &y, &cv, b, c.in_cover, "B")?;
        if s > 0 {
            ctx.inputs.truncate(n_inputs);
        }
        let ab = axes::crosses_with_type(&y, &ax, &bx)?;
        let ba = axes::crosses_with_type(&y, &bx, &ax)?;
        let mut v = json!({
            "cover": cover_summary(&cv),
            "a_ends": ax.end_edges().iter().map(|&e| y.edges[e].name.clone()).collect::<Vec<_>>(),
            "b_ends": bx.end_edges().iter().map(|&e| y.edges[e].name.clone()).collect::<Vec<_>>(),
            "b_against_a": to_value(&ab),
            "a_against_b": to_value(&ba),
            "symmetric": ab.b_crosses_a == ba.b_crosses_a,
        });
        if let Ok(f) = axes::four_regions(&y, &ax, &bx) {
            v["four_regions"] = json!(Interval::ALL.iter().map(|&i| f.get(i).len()).collect::<Vec<_>>());
        }
        match axes::union_complement(&y, &ax, &bx) {
            Ok(u) => {
                v["frontier_pieces"] = json!(u.frontier_pieces.len());
                v["aligned"] = json!(u.aligned);
            }
            Err(e) => v["frontier_pieces"] = json!(e.to_string()),
        }
        if let Some(i) = interval {
            let sh = axes::sharp_sum(&y, &h, &ax, &bx, i)?;
            v["sharp_sum"] = json!({
                "interval": to_value(&sh.interval),
                "region": sh.region.len(),
                "weight": sh.complexity.weight,
                "length": sh.complexity.length,
                "parts": to_value(&sh.parts),
                "bounded": sh.bounded,
                "pattern": sh.pattern.to_text(&y),
            });
        }
        verdicts.push(ab.verdict);
        runs.push(v);
    }
    let stable = (verdicts.len() == 2).then(|| verdicts[0] == verdicts[1]);
    let code = if verdicts[0] == axes::Verdict::Unresolved || stable == Some(false) { 2 } else { 0 };
    Ok((code, json!({ "runs": runs }), stable))
}

/// Translate family file, one translate per line:
/// `label pattern <file> [<file of the square>]`, `label word <edge word>`
/// (trivial-subgroup covers) or `label shift <ints>` (cocycle covers).
fn read_family(ctx: &mut Ctx, y: &Complex2, base: &Complex2, cv: &Cover, a: &AxisData, path: &Path) -> Result<Vec<TranslateEntry>> {
    let text = ctx.read(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Syntax { line: i + 1, msg: msg.to_string() };
        let mut words = line.split_whitespace();
        let label = words.next().unwrap().to_string();
        let kind = words.next().ok_or_else(|| bad("expected `pattern`, `word` or `shift`"))?;
        let rest: Vec<&str> = words.collect();
        let leaves = || Error::Axis(format!("translate `{label}` leaves the truncation"));
        let entry = match kind {
            "pattern" => {
                let once = rest.first().ok_or_else(|| bad("missing pattern file"))?;
                // ends come from the file's `ends` line
                let p1 = ctx.pattern(y, &dir.join(once))?;
                let once = AxisData::new(y, p1.pattern, &label, p1.ends.map(|(p, n)| [p, n]))?;
                let twice = match rest.get(1) {
                    Some(f) => {
                        let p2 = ctx.pattern(y, &dir.join(f))?;
                        Some(AxisData::new(y, p2.pattern, &format!("{label}^2"), p2.ends.map(|(p, n)| [p, n]))?)
                    }
                    None => None,
                };
                TranslateEntry { label, once, twice }
            }
            "word" => {
                let CoverKind::Subgroup { generator, .. } = &cv.kind else {
                    return Err(bad("word translates need a subgroup cover"));
                };
                let w = edge_word_letters(generator, &parse_edge_word(base, &rest.join(" "))?);
                let once = a.translated(y, cv.translate_word(&a.pattern, &w).ok_or_else(leaves)?, &label)?;
                let ww: Vec<i32> = w.iter().chain(&w).copied().collect();
                let twice = match cv.translate_word(&a.pattern, &ww) {
                    Some(t) => Some(a.translated(y, t, &format!("{label}^2"))?),
                    None => None,
                };
                TranslateEntry { label, once, twice }
            }
            "shift" => {
                let d: Vec<i64> = rest.iter().map(|s| s.parse::<i64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad("shift takes integers"))?;
                let once = a.translated(y, cv.translate(&a.pattern, &d).ok_or_else(leaves)?, &label)?;
                let d2: Vec<i64> = d.iter().map(|x| 2 * x).collect();
                let twice = match cv.translate(&a.pattern, &d2) {
                    Some(t) => Some(a.translated(y, t, &format!("{label}^2"))?),
                    None => None,
                };
                TranslateEntry { label, once, twice }
            }
            _ => return Err(bad("expected `pattern`, `word` or `shift`")),
        };
        out.push(entry);
    }
    Ok(out)
}

fn triple(ctx: &mut Ctx, complex: &str, a: &Path, family: &Path, c: &CoverArgs) -> Outcome {
    need_cover(c)?;
    let base = ctx.complex(complex)?;
    let (y, _, cv) = workspace(&base, c, 0)?;
    let cv = cv.unwrap();
    let ax = axis_in(ctx, &base, &y, &cv, a, c.in_cover, "A")?;
    let fam = read_family(ctx, &y, &base, &cv, &ax, family)?;
    let t = axes::canonical_triple(&y, &ax, &fam)?;
    let code = if t.is_some() { 0 } else { 2 };
    Ok((code, json!({ "cover": cover_summary(&cv), "translates": fam.len(), "triple": to_value(&t) }), None))
}

fn check51(ctx: &mut Ctx, complex: &str, track: &Path, family: Option<&Path>, c: &CoverArgs) -> Outcome {
    need_cover(c)?;
    let base = ctx.complex(complex)?;
    let (y, _, cv) = workspace(&base, c, 0)?;
    let cv = cv.unwrap();
    let ax = axis_in(ctx, &base, &y, &cv, track, c.in_cover, "t")?;
    let translates: Vec<AxisData> = match family {
        Some(f) => read_family(ctx, &y, &base, &cv, &ax, f)?.into_iter().map(|e| e.once).collect(),
        None => {
            // deck powers of a finite cyclic cover
            let n = match (&cv.kind, c.finite) {
                (CoverKind::Cocycle { phi, .. }, Some(n)) if phi.len() == 1 => n as i64,
                _ => return Err(Error::Axis("translate set is empty: give a family file".into())),
            };
            let mut v = Vec::new();
            for d in 1..n {
                if let Some(t) = cv.translate(&ax.pattern, &[d]) {
                    v.push(ax.translated(&y, t, &format!("deck^{d}"))?);
                }
            }
            v
        }
    };
    let r = axes::check_splitting_conditions(&y, &ax, &translates)?;
    Ok((0, json!({ "cover": cover_summary(&cv), "all": r.all(), "report": to_value(&r) }), None))
}

fn render_cmd(ctx: &mut Ctx, complex: &str, patterns: &[PathBuf], out: &Path, replay: bool) -> Outcome {
    let y = ctx.complex(complex)?;
    let mut pats = Vec::new();
    for p in patterns {
        pats.push((p.display().to_string(), ctx.pattern(&y, p)?.pattern));
    }
    let write = |path: &Path, svg: &str| -> Result<Value> {
        std::fs::write(path, svg).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Ok(json!({ "path": path.display().to_string(), "sha256": sha256_hex(svg.as_bytes()), "crossings": render::crossing_markers(svg) }))
    };
    let mut written = Vec::new();
    if replay {
        if pats.len() != 1 {
            return Err(Error::Precondition("--replay takes exactly one pattern".into()));
        }
        let (n, log) = normalize::normalize_with(&y, &pats[0].1, true)?;
        let mut states: Vec<Pattern> = log.states.clone();
        states.push(n);
        let stem = out.with_extension("");
        for (i, t) in states.iter().enumerate() {
            let path = PathBuf::from(format!("{}-{i:03}.svg", stem.display()));
            written.push(write(&path, &render::render_svg(&y, &[(&pats[0].0, t)]))?);
        }
    } else {
        let refs: Vec<(&str, &Pattern)> = pats.iter().map(|(l, t)| (l.as_str(), t)).collect();
        written.push(write(out, &render::render_svg(&y, &refs))?);
    }
    let lengths: Vec<f64> = pats.iter().map(|(_, t)| hypgeom::pattern_length(&y, &HypStructure::assign(&y), t)).collect();
    Ok((0, json!({ "figures": written, "lengths": lengths }), None))
}

//! Intersections of patterns with curves and with each other, equivalence,
//! cut-and-paste at crossings, and partial patterns.
//!
//! Crossings are detected combinatorially (interleaving chord ends).  Where
//! a chord meets several others, crossings are ordered along it in the Klein
//! model of the triangle's chart, where geodesics are straight segments.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::Serialize;

use crate::complex::{Complex2, UnionFind};
use crate::error::{Error, Result};
use crate::hypgeom::{self, Complexity, HypStructure, MinimizeConfig};
use crate::pattern::{Chord, Pattern, Sidedness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CurveKind {
    Loop,
    Line,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Step {
    /// Cross triangle `tri` from gap `entry.1` of edge `entry.0` to gap
    /// `exit.1` of edge `exit.0`.  Gap `g` lies between the points of rank
    /// `g - 1` and `g`.
    Tri { tri: usize, entry: (usize, usize), exit: (usize, usize) },
    /// Run along a whole edge, `sign = +1` from `from` to `to`.
    Along { edge: usize, sign: i8 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePath {
    pub kind: CurveKind,
    pub steps: Vec<Step>,
    pub label: String,
}

impl CurvePath {
    /// Checks continuity and closure; gaps are checked against `t`.
    pub fn check(&self, y: &Complex2, t: &Pattern) -> Result<()> {
        let bad = |msg: String| Err(Error::Curve(format!("{}: {msg}", self.label)));
        if self.steps.is_empty() {
            return bad("no steps".into());
        }
        let tri_steps = self.steps.iter().filter(|s| matches!(s, Step::Tri { .. })).count();
        if tri_steps != 0 && tri_steps != self.steps.len() {
            return bad("triangle steps and edge steps cannot be mixed".into());
        }
        let n = self.steps.len();
        for (i, s) in self.steps.iter().enumerate() {
            match *s {
                Step::Tri { tri, entry, exit } => {
                    if tri >= y.n_triangles() {
                        return bad(format!("step {i}: no triangle {tri}"));
                    }
                    for (e, g) in [entry, exit] {
                        if e >= y.n_edges() || y.slot_of(tri, e).is_none() {
                            return bad(format!("step {i}: edge {e} is not on triangle `{}`", y.triangles[tri].name));
                        }
                        if g > t.on_edge[e].len() {
                            return bad(format!("step {i}: gap {g} out of range on edge `{}`", y.edges[e].name));
                        }
                    }
                    let last = i + 1 == n;
                    if !last || self.kind == CurveKind::Loop {
                        if let Step::Tri { entry: next, .. } = self.steps[(i + 1) % n] {
                            if next != exit {
                                return bad(format!("step {i} exits where step {} does not enter", (i + 1) % n));
                            }
                        }
                    }
                }
                Step::Along { edge, sign } => {
                    if edge >= y.n_edges() || sign.abs() != 1 {
                        return bad(format!("step {i}: bad edge step"));
                    }
                    let last = i + 1 == n;
                    if !last || self.kind == CurveKind::Loop {
                        if let Step::Along { edge: e2, sign: s2 } = self.steps[(i + 1) % n] {
                            if along_end(y, edge, sign) != along_start(y, e2, s2) {
                                return bad(format!("step {i} ends where step {} does not start", (i + 1) % n));
                            }
                        }
                    }
                }
            }
        }
        if self.kind == CurveKind::Line {
            let (first, last) = (self.steps[0], self.steps[n - 1]);
            let ok = match (first, last) {
                (Step::Tri { entry, .. }, Step::Tri { exit, .. }) => y.frontier_edge[entry.0] && y.frontier_edge[exit.0],
                (Step::Along { edge: a, sign: sa }, Step::Along { edge: b, sign: sb }) => {
                    y.frontier_vertex[along_start(y, a, sa)] && y.frontier_vertex[along_end(y, b, sb)]
                }
                _ => false,
            };
            if !ok {
                return bad("a line must start and end on the frontier".into());
            }
        }
        Ok(())
    }

    pub fn to_text(&self, y: &Complex2) -> String {
        let mut s = format!("{}\n", if self.kind == CurveKind::Loop { "loop" } else { "line" });
        for st in &self.steps {
            match *st {
                Step::Tri { tri, entry, exit } => s.push_str(&format!(
                    "step {} {},{} {},{}\n",
                    y.triangles[tri].name, y.edges[entry.0].name, entry.1, y.edges[exit.0].name, exit.1
                )),
                Step::Along { edge, sign } => {
                    s.push_str(&format!("along {} {}\n", y.edges[edge].name, if sign > 0 { "+1" } else { "-1" }))
                }
            }
        }
        s
    }
}

fn along_start(y: &Complex2, e: usize, sign: i8) -> usize {
    if sign > 0 {
        y.edges[e].from
    } else {
        y.edges[e].to
    }
}

fn along_end(y: &Complex2, e: usize, sign: i8) -> usize {
    if sign > 0 {
        y.edges[e].to
    } else {
        y.edges[e].from
    }
}

/// Parses a curve file: a `loop` or `line` header, then `step <triangle>
/// <edge>,<gap> <edge>,<gap>` or `along <edge> <±1>` lines.
pub fn parse_curve(y: &Complex2, text: &str, label: &str) -> Result<CurvePath> {
    let mut kind = None;
    let mut steps = Vec::new();
    for (ln0, raw) in text.lines().enumerate() {
        let line = ln0 + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let syntax = |msg: &str| Error::Syntax { line, msg: msg.to_string() };
        let edge_gap = |tok: &str| -> Result<(usize, usize)> {
            let (e, g) = tok.split_once(',').ok_or_else(|| syntax("expected <edge>,<gap>"))?;
            let e = y.edge_id(e).ok_or(Error::Dangling { line, kind: "edge", name: e.into() })?;
            let g = g.parse().map_err(|_| syntax("gap must be a non-negative integer"))?;
            Ok((e, g))
        };
        match toks[0] {
            "loop" | "line" if kind.is_none() && toks.len() == 1 => {
                kind = Some(if toks[0] == "loop" { CurveKind::Loop } else { CurveKind::Line });
            }
            "step" if kind.is_some() => {
                if toks.len() != 4 {
                    return Err(syntax("expected `step <triangle> <edge>,<gap> <edge>,<gap>`"));
                }
                let tri = y.triangle_id(toks[1]).ok_or(Error::Dangling { line, kind: "triangle", name: toks[1].into() })?;
                steps.push(Step::Tri { tri, entry: edge_gap(toks[2])?, exit: edge_gap(toks[3])? });
            }
            "along" if kind.is_some() => {
                if toks.len() != 3 {
                    return Err(syntax("expected `along <edge> <±1>`"));
                }
                let edge = y.edge_id(toks[1]).ok_or(Error::Dangling { line, kind: "edge", name: toks[1].into() })?;
                let sign = match toks[2] {
                    "+1" | "1" | "+" => 1,
                    "-1" | "-" => -1,
                    _ => return Err(syntax("direction must be +1 or -1")),
                };
                steps.push(Step::Along { edge, sign });
            }
            _ => return Err(syntax("expected a `loop`/`line` header followed by `step` or `along` lines")),
        }
    }
    let kind = kind.ok_or(Error::Syntax { line: 0, msg: "missing `loop` or `line` header".into() })?;
    Ok(CurvePath { kind, steps, label: label.to_string() })
}

/// Direction of every point and side of every chord, or an error when the
/// pattern is not fully and coherently oriented.
fn orientation(y: &Complex2, t: &Pattern) -> Result<Vec<i8>> {
    let dirs = t.point_dirs(y).map_err(|_| Error::Unoriented)?;
    if dirs.iter().any(|&d| d == 0) || t.chords.iter().any(|c| c.side == 0) {
        return Err(Error::Unoriented);
    }
    Ok(dirs)
}

/// Signed number of crossings of `c` with the oriented pattern `t`.
pub fn intersection_number(y: &Complex2, c: &CurvePath, t: &Pattern) -> Result<i64> {
    c.check(y, t)?;
    let dirs = orientation(y, t)?;
    Ok(count_crossings(y, c, t, &dirs))
}

fn count_crossings(y: &Complex2, c: &CurvePath, t: &Pattern, dirs: &[i8]) -> i64 {
    let mut by_tri: Vec<Vec<usize>> = vec![Vec::new(); y.n_triangles()];
    for (k, ch) in t.chords.iter().enumerate() {
        by_tri[ch.tri].push(k);
    }
    let mut total = 0i64;
    for st in &c.steps {
        match *st {
            Step::Along { edge, sign } => {
                total += t.on_edge[edge].iter().map(|&p| dirs[p] as i64).sum::<i64>() * sign as i64;
            }
            Step::Tri { tri, entry, exit } => {
                let a = t.gap_bpos(y, tri, entry.0, entry.1);
                let b = t.gap_bpos(y, tri, exit.0, exit.1);
                for &k in &by_tri[tri] {
                    let ch = &t.chords[k];
                    let lo = t.bpos(y, tri, ch.ends[0]);
                    let hi = t.bpos(y, tri, ch.ends[1]);
                    let inside = |x: u64| lo < x && x < hi;
                    if inside(a) != inside(b) {
                        total += ch.side as i64 * if inside(b) { 1 } else { -1 };
                    }
                }
            }
        }
    }
    total
}

/// Loops generating the fundamental group (fundamental cycles of the
/// 1-skeleton and of the dual graph), plus one line for every pair of
/// frontier regions.
pub fn basis(y: &Complex2) -> Vec<CurvePath> {
    let mut out = skeleton_loops(y);
    out.extend(dual_loops(y));
    out.extend(frontier_lines(y));
    out
}

pub fn skeleton_loops(y: &Complex2) -> Vec<CurvePath> {
    let tree = y.spanning_tree();
    let mut out = Vec::new();
    for (e, ed) in y.edges.iter().enumerate() {
        if tree.in_tree[e] || !tree.reached[ed.from] {
            continue;
        }
        let mut steps: Vec<Step> =
            y.tree_path(&tree, ed.from).into_iter().map(|(edge, sign)| Step::Along { edge, sign }).collect();
        steps.push(Step::Along { edge: e, sign: 1 });
        steps.extend(y.tree_path(&tree, ed.to).into_iter().rev().map(|(edge, sign)| Step::Along { edge, sign: -sign }));
        out.push(CurvePath { kind: CurveKind::Loop, steps, label: format!("loop:{}", ed.name) });
    }
    out
}

pub fn dual_loops(y: &Complex2) -> Vec<CurvePath> {
    let nt = y.n_triangles();
    // adjacency (other triangle, edge), first incident triangle to the rest
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nt];
    let mut pairs = Vec::new();
    for e in 0..y.n_edges() {
        let inc = y.incidence(e);
        for &(t, _) in inc.iter().skip(1) {
            adj[inc[0].0].push((t, e));
            adj[t].push((inc[0].0, e));
            pairs.push((inc[0].0, t, e));
        }
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nt];
    let mut root_of = vec![usize::MAX; nt];
    let mut tree_pair = std::collections::HashSet::new();
    for r in 0..nt {
        if root_of[r] != usize::MAX {
            continue;
        }
        root_of[r] = r;
        let mut q = VecDeque::from([r]);
        while let Some(u) = q.pop_front() {
            for &(w, e) in &adj[u] {
                if root_of[w] == usize::MAX {
                    root_of[w] = r;
                    parent[w] = Some((u, e));
                    tree_pair.insert((u.min(w), u.max(w), e));
                    q.push_back(w);
                }
            }
        }
    }
    // triangles and crossing edges from the root down to t
    let path_down = |t: usize| -> (Vec<usize>, Vec<usize>) {
        let mut tris = vec![t];
        let mut edges = Vec::new();
        let mut u = t;
        while let Some((p, e)) = parent[u] {
            tris.push(p);
            edges.push(e);
            u = p;
        }
        tris.reverse();
        edges.reverse();
        (tris, edges)
    };
    let mut out = Vec::new();
    for (a, b, e) in pairs {
        if tree_pair.contains(&(a.min(b), a.max(b), e)) {
            continue;
        }
        let (ta, ea) = path_down(a);
        let (tb, eb) = path_down(b);
        // root .. a, cross e, b .. root
        let mut tris = ta.clone();
        let mut crossings = ea.clone();
        crossings.push(e);
        tris.extend(tb.iter().rev().copied());
        crossings.extend(eb.iter().rev().copied());
        tris.pop(); // the root closes the loop
        let m = tris.len();
        debug_assert_eq!(crossings.len(), m);
        let steps: Vec<Step> = (0..m)
            .map(|i| {
                let entry = crossings[(i + m - 1) % m];
                let exit = crossings[i];
                Step::Tri { tri: tris[i], entry: (entry, 0), exit: (exit, 0) }
            })
            .collect();
        out.push(CurvePath {
            kind: CurveKind::Loop,
            steps,
            label: format!("dual:{}:{}:{}", y.triangles[a].name, y.edges[e].name, y.triangles[b].name),
        });
    }
    out
}

pub fn frontier_lines(y: &Complex2) -> Vec<CurvePath> {
    let regions = y.frontier_regions();
    let mut out = Vec::new();
    for i in 0..regions.len() {
        let tree = y.spanning_tree_from(regions[i][0]);
        for j in (i + 1)..regions.len() {
            let v = regions[j][0];
            if !tree.reached[v] {
                continue;
            }
            let steps: Vec<Step> = y.tree_path(&tree, v).into_iter().map(|(edge, sign)| Step::Along { edge, sign }).collect();
            if steps.is_empty() {
                continue;
            }
            out.push(CurvePath {
                kind: CurveKind::Line,
                steps,
                label: format!("line:{}:{}", y.vertices[regions[i][0]], y.vertices[v]),
            });
        }
    }
    out
}

/// Intersection numbers of an oriented pattern with every basis curve.
pub fn basis_numbers(y: &Complex2, basis: &[CurvePath], t: &Pattern) -> Result<Vec<i64>> {
    let dirs = orientation(y, t)?;
    basis
        .iter()
        .map(|c| {
            c.check(y, t)?;
            Ok(count_crossings(y, c, t, &dirs))
        })
        .collect()
}

/// Equal intersection numbers on every basis curve.
pub fn equivalent(y: &Complex2, t1: &Pattern, t2: &Pattern, basis: &[CurvePath]) -> Result<bool> {
    for t in [t1, t2] {
        if !t.is_two_sided(y) {
            return Err(Error::OneSided);
        }
    }
    Ok(basis_numbers(y, basis, t1)? == basis_numbers(y, basis, t2)?)
}

/// A transverse crossing: chord `a` of the first pattern meets chord `b` of
/// the second inside `tri`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Crossing {
    pub tri: usize,
    pub a: usize,
    pub b: usize,
}

/// Two patterns as one singular pattern; the first pattern's points and
/// chords keep their ids.
#[derive(Clone, Debug)]
pub struct Merged {
    pub pattern: Pattern,
    pub n_points: usize,
    pub n_chords: usize,
}

pub fn merge(y: &Complex2, t1: &Pattern, t2: &Pattern) -> Result<Merged> {
    for e in 0..y.n_edges() {
        for &p in &t1.on_edge[e] {
            for &q in &t2.on_edge[e] {
                if t1.points[p].coord == t2.points[q].coord {
                    return Err(Error::NotTransverse(format!(
                        "both patterns meet edge `{}` at coordinate {}",
                        y.edges[e].name, t1.points[p].coord
                    )));
                }
            }
        }
    }
    let off = t1.points.len();
    let mut pts = t1.points.clone();
    pts.extend(t2.points.iter().cloned());
    let mut chs = t1.chords.clone();
    chs.extend(t2.chords.iter().map(|c| Chord { tri: c.tri, ends: [c.ends[0] + off, c.ends[1] + off], side: c.side }));
    let circles: Vec<u32> = t1.circles.iter().zip(&t2.circles).map(|(a, b)| a + b).collect();
    let mut pattern = Pattern::assemble(y, pts, chs, circles, true)?;
    pattern.relaxed = true;
    Ok(Merged { pattern, n_points: off, n_chords: t1.chords.len() })
}

/// Crossings between two embedded patterns, or a report of non-transverse
/// contact (shared edge points, which includes coincident chords).
pub fn intersection_points(y: &Complex2, t1: &Pattern, t2: &Pattern) -> Result<Vec<Crossing>> {
    let m = merge(y, t1, t2)?;
    Ok(m.pattern
        .crossing_pairs(y)
        .into_iter()
        .filter(|&(a, b)| a < m.n_chords && b >= m.n_chords)
        .map(|(a, b)| Crossing { tri: m.pattern.chords[a].tri, a, b: b - m.n_chords })
        .collect())
}

/// Point of the Klein model for an upper half-plane point.
pub fn klein(z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let w = (z - i) / (z + i);
    w * (2.0 / (1.0 + w.norm_sqr()))
}

/// Hyperbolic distance between two Klein-model points.
pub fn klein_distance(u: Complex64, v: Complex64) -> f64 {
    let dot = u.re * v.re + u.im * v.im;
    let x = (1.0 - dot) / ((1.0 - u.norm_sqr()) * (1.0 - v.norm_sqr())).sqrt();
    x.max(1.0).acosh()
}

fn chord_klein(y: &Complex2, h: &HypStructure, t: &Pattern, c: usize) -> (Complex64, Complex64) {
    let ch = &t.chords[c];
    let end = |p: usize| klein(hypgeom::realize(y, h, ch.tri, t.slot_in(y, ch.tri, p), t.points[p].coord));
    (end(ch.ends[0]), end(ch.ends[1]))
}

fn cross2(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Parameter along chord `a` (0 at its first end) where it meets chord `b`.
fn meet_param(ka: (Complex64, Complex64), kb: (Complex64, Complex64)) -> f64 {
    let r = ka.1 - ka.0;
    let s = kb.1 - kb.0;
    let den = cross2(r, s);
    if den == 0.0 {
        return 0.5;
    }
    (cross2(kb.0 - ka.0, s) / den).clamp(0.0, 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Policy {
    /// Every cut and paste keeps the transverse orientation.
    Oriented,
    /// Prefer the reconnection whose two new arcs end on different edges.
    Normal,
    /// One choice per crossing, in crossing order: 0 joins the arms
    /// `(x1,x2),(x3,x4)`, 1 joins `(x2,x3),(x4,x1)`, with arms numbered by
    /// the boundary order of the chord ends they point at.
    Explicit(Vec<u8>),
}

/// Outcome of resolving every crossing of a singular pattern.
#[derive(Clone, Debug, Serialize)]
pub struct Resolution {
    pub pattern: Pattern,
    /// Self-crossings of the input, as chord pairs `(a, b)` in triangle `tri`.
    pub crossings: Vec<Crossing>,
    pub choices: Vec<u8>,
    /// Closed strands produced by the reconnection, deleted as trivial circles.
    pub closed_loops: u32,
}

/// Arms at a crossing, local to one triangle.
struct LocalCrossing {
    chords: [usize; 2],
    /// arm `2 * i + end` runs along `chords[i]` towards its end `end`
    partner: [usize; 4],
}

/// The two ways to reconnect crossing chords `a` and `b`, as arm pairs.
/// Arm `0`/`1` runs along `a` towards `a.ends[0]`/`a.ends[1]`, arms `2`/`3`
/// likewise along `b`.
pub fn reconnections(y: &Complex2, t: &Pattern, a: usize, b: usize) -> [[(usize, usize); 2]; 2] {
    let tri = t.chords[a].tri;
    let pos = |p: usize| t.bpos(y, tri, p);
    let ea = t.chords[a].ends;
    let eb = t.chords[b].ends;
    // arms sorted by the boundary position of the end they point at
    let mut arms = [(pos(ea[0]), 0usize), (pos(ea[1]), 1), (pos(eb[0]), 2), (pos(eb[1]), 3)];
    arms.sort();
    [[(arms[0].1, arms[1].1), (arms[2].1, arms[3].1)], [(arms[1].1, arms[2].1), (arms[3].1, arms[0].1)]]
}

/// Resolves every crossing of `t`, using `sides[c]` as the local
/// orientation of chord `c` for the oriented policy.
pub fn resolve_crossings(y: &Complex2, h: &HypStructure, t: &Pattern, sides: &[i8], policy: &Policy) -> Result<Resolution> {
    if t.n_circles() > 0 {
        return Err(Error::Precondition("delete trivial circles before cut and paste".into()));
    }
    let all = t.crossing_pairs(y);
    let crossings: Vec<Crossing> = all.iter().map(|&(a, b)| Crossing { tri: t.chords[a].tri, a, b }).collect();
    if let Policy::Explicit(ch) = policy {
        if ch.len() != crossings.len() {
            return Err(Error::Precondition(format!("{} choices given for {} crossings", ch.len(), crossings.len())));
        }
    }
    if *policy == Policy::Oriented && crossings.iter().any(|x| sides[x.a] == 0 || sides[x.b] == 0) {
        return Err(Error::Unoriented);
    }
    let mut choices = Vec::with_capacity(crossings.len());
    let mut new_chords: Vec<Chord> = Vec::new();
    let circles = t.circles.clone();
    let mut closed_loops = 0u32;
    let mut by_tri: Vec<Vec<usize>> = vec![Vec::new(); y.n_triangles()];
    for (k, x) in crossings.iter().enumerate() {
        by_tri[x.tri].push(k);
    }
    let mut chords_in: Vec<Vec<usize>> = vec![Vec::new(); y.n_triangles()];
    for (c, ch) in t.chords.iter().enumerate() {
        chords_in[ch.tri].push(c);
    }
    for tri in 0..y.n_triangles() {
        if by_tri[tri].is_empty() {
            for &c in &chords_in[tri] {
                new_chords.push(t.chords[c]);
            }
            continue;
        }
        let pos = |p: usize| t.bpos(y, tri, p);
        let slot = |p: usize| t.slot_in(y, tri, p);
        let klein_of: std::collections::HashMap<usize, (Complex64, Complex64)> =
            chords_in[tri].iter().map(|&c| (c, chord_klein(y, h, t, c))).collect();
        let mut local: Vec<LocalCrossing> = Vec::new();
        // crossings on each chord, sorted along it: (param, local crossing)
        let mut along: std::collections::HashMap<usize, Vec<(f64, usize)>> = Default::default();
        for &k in &by_tri[tri] {
            let x = crossings[k];
            let (a, b) = (x.a, x.b);
            let ea = t.chords[a].ends;
            let eb = t.chords[b].ends;
            let [r1, r2] = reconnections(y, t, a, b);
            let arm_point = |arm: usize| if arm < 2 { ea[arm] } else { eb[arm - 2] };
            let choice: u8 = match policy {
                Policy::Explicit(ch) => ch[k],
                Policy::Oriented => {
                    let inside = |p: usize, c: &Chord| pos(c.ends[0]) < pos(p) && pos(p) < pos(c.ends[1]);
                    let (ca, cb) = (&t.chords[a], &t.chords[b]);
                    let ok = |ai: usize, bj: usize| {
                        ((sides[a] == 1) == inside(arm_point(bj), ca)) == ((sides[b] == 1) == inside(arm_point(ai), cb))
                    };
                    // the partner of arm 0 (towards a's first end) in r1
                    let partner = r1.iter().find_map(|&(u, v)| if u == 0 { Some(v) } else if v == 0 { Some(u) } else { None }).unwrap();
                    if ok(0, partner) {
                        0
                    } else {
                        1
                    }
                }
                Policy::Normal => {
                    let normal = |r: &[(usize, usize); 2]| r.iter().all(|&(u, v)| slot(arm_point(u)) != slot(arm_point(v)));
                    if normal(&r1) || !normal(&r2) {
                        0
                    } else {
                        1
                    }
                }
            };
            choices.push(choice);
            let r = if choice == 0 { r1 } else { r2 };
            let mut partner = [0usize; 4];
            for (u, v) in r {
                partner[u] = v;
                partner[v] = u;
            }
            let li = local.len();
            local.push(LocalCrossing { chords: [a, b], partner });
            let ka = klein_of[&a];
            let kb = klein_of[&b];
            along.entry(a).or_default().push((meet_param(ka, kb), li));
            along.entry(b).or_default().push((meet_param(kb, ka), li));
        }
        for list in along.values_mut() {
            list.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        }
        let xs: std::collections::HashMap<usize, Vec<usize>> =
            along.iter().map(|(&c, l)| (c, l.iter().map(|&(_, x)| x).collect())).collect();
        let n_cross = |c: usize| xs.get(&c).map_or(0, |l| l.len());
        let index_on = |c: usize, x: usize| xs[&c].iter().position(|&z| z == x).unwrap();
        // walk: (chord, segment, direction); returns the next state or the point reached
        let advance = |c: usize, s: usize, d: i8| -> std::result::Result<(usize, usize, i8), usize> {
            let k = n_cross(c);
            let (x, toward) = if d > 0 {
                if s == k {
                    return Err(t.chords[c].ends[1]);
                }
                (xs[&c][s], 0usize)
            } else {
                if s == 0 {
                    return Err(t.chords[c].ends[0]);
                }
                (xs[&c][s - 1], 1usize)
            };
            let lc = &local[x];
            let which = if lc.chords[0] == c { 0 } else { 1 };
            let arm = 2 * which + toward;
            let out = lc.partner[arm];
            let c2 = lc.chords[out / 2];
            let i = index_on(c2, x);
            if out % 2 == 0 {
                Ok((c2, i, -1))
            } else {
                Ok((c2, i + 1, 1))
            }
        };
        let mut seen: std::collections::HashSet<(usize, usize)> = Default::default();
        let mut done_points: std::collections::HashSet<usize> = Default::default();
        for &c in &chords_in[tri] {
            for end in 0..2 {
                let p = t.chords[c].ends[end];
                if done_points.contains(&p) {
                    continue;
                }
                let mut state = if end == 0 { (c, 0usize, 1i8) } else { (c, n_cross(c), -1i8) };
                let q = loop {
                    seen.insert((state.0, state.1));
                    match advance(state.0, state.1, state.2) {
                        Ok(next) => state = next,
                        Err(q) => break q,
                    }
                };
                done_points.insert(p);
                done_points.insert(q);
                new_chords.push(Chord { tri, ends: [p, q], side: 0 });
            }
        }
        // whatever is left runs in closed strands
        for &c in &chords_in[tri] {
            for s in 0..=n_cross(c) {
                if seen.contains(&(c, s)) {
                    continue;
                }
                let mut state = (c, s, 1i8);
                while seen.insert((state.0, state.1)) {
                    state = advance(state.0, state.1, state.2).expect("closed strands avoid the boundary");
                }
                closed_loops += 1;
            }
        }
    }
    let mut out = Pattern::assemble(y, t.points.clone(), new_chords, circles, false)?;
    if *policy == Policy::Oriented {
        // orientation read off the original chord at each new chord's first end
        let dir_at = |p: usize| -> i8 {
            match t.chords_at(p).first() {
                Some(&c) => {
                    let which = if t.chords[c].ends[0] == p { 0 } else { 1 };
                    t.end_dir(y, c, which, sides[c])
                }
                None => t.points[p].dir,
            }
        };
        for k in 0..out.chords.len() {
            let p = out.chords[k].ends[0];
            out.chords[k].side = out.side_for_dir(y, k, 0, dir_at(p));
        }
    } else {
        for c in out.chords.iter_mut() {
            c.side = 0;
        }
        let n = out.components().len();
        out.orient_components(y, &vec![1; n]);
    }
    out.validate(y)?;
    Ok(Resolution { pattern: out, crossings, choices, closed_loops })
}

/// Cut and paste at every crossing of two patterns, with complexities
/// before, after straightening the new chords, and after re-minimising.
#[derive(Clone, Debug, Serialize)]
pub struct SurgeryReport {
    pub resolution: Resolution,
    pub before: Complexity,
    pub after: Complexity,
    pub after_minimized: Complexity,
    pub minimize_converged: bool,
}

fn surgery(y: &Complex2, h: &HypStructure, t: &Pattern, sides: &[i8], policy: &Policy, cfg: &MinimizeConfig) -> Result<SurgeryReport> {
    let before = Complexity { weight: t.weight() as u64, length: hypgeom::pattern_length(y, h, t) };
    let resolution = resolve_crossings(y, h, t, sides, policy)?;
    let after = hypgeom::pattern_complexity(y, h, &resolution.pattern)?;
    let m = hypgeom::minimize_length(y, h, &resolution.pattern, cfg)?;
    Ok(SurgeryReport { resolution, before, after, after_minimized: m.complexity, minimize_converged: m.converged })
}

pub fn cut_and_paste(
    y: &Complex2,
    h: &HypStructure,
    t1: &Pattern,
    t2: &Pattern,
    policy: &Policy,
    cfg: &MinimizeConfig,
) -> Result<SurgeryReport> {
    let m = merge(y, t1, t2)?;
    let sides: Vec<i8> = m.pattern.chords.iter().map(|c| c.side).collect();
    surgery(y, h, &m.pattern, &sides, policy, cfg)
}

/// Cut and paste at every self-crossing of a singular pattern.
pub fn resolve_singular(y: &Complex2, h: &HypStructure, f: &Pattern, policy: &Policy, cfg: &MinimizeConfig) -> Result<SurgeryReport> {
    let sides: Vec<i8> = f.chords.iter().map(|c| c.side).collect();
    surgery(y, h, f, &sides, policy, cfg)
}

/// Chord sides of a transverse orientation defined off a spanning tree of
/// the pattern: each chord takes the orientation carried to its second end.
/// Chords where the two ends disagree are the cut set of a one-sided pattern.
pub fn orient_off_tree(y: &Complex2, f: &Pattern) -> (Vec<i8>, Vec<usize>) {
    let n = f.points.len();
    let mut dir = vec![0i8; n];
    for r in 0..n {
        if dir[r] != 0 {
            continue;
        }
        dir[r] = 1;
        let mut q = VecDeque::from([r]);
        while let Some(p) = q.pop_front() {
            for &c in f.chords_at(p) {
                let ch = f.chords[c];
                let which = if ch.ends[0] == p { 0 } else { 1 };
                let s = f.side_for_dir(y, c, which, dir[p]);
                let o = ch.ends[1 - which];
                if dir[o] == 0 {
                    dir[o] = f.end_dir(y, c, 1 - which, s);
                    q.push_back(o);
                }
            }
        }
    }
    let mut sides = Vec::with_capacity(f.chords.len());
    let mut cut = Vec::new();
    for (c, ch) in f.chords.iter().enumerate() {
        let s1 = f.side_for_dir(y, c, 1, dir[ch.ends[1]]);
        let s0 = f.side_for_dir(y, c, 0, dir[ch.ends[0]]);
        if s0 != s1 {
            cut.push(c);
        }
        sides.push(s1);
    }
    (sides, cut)
}

/// Oriented cut and paste of a one-sided singular pattern, using an
/// orientation defined away from one point on each reversing chord.
pub fn resolve_one_sided(y: &Complex2, h: &HypStructure, f: &Pattern, cfg: &MinimizeConfig) -> Result<SurgeryReport> {
    let (sides, _) = orient_off_tree(y, f);
    let t = f.clone();
    let resolution = resolve_crossings(y, h, &t, &sides, &Policy::Oriented)?;
    let mut pattern = resolution.pattern.clone();
    // the orientation is only meaningful off the cut set; report sidedness honestly
    for c in pattern.chords.iter_mut() {
        c.side = 0;
    }
    let n = pattern.components().len();
    pattern.orient_components(y, &vec![1; n]);
    let before = Complexity { weight: f.weight() as u64, length: hypgeom::pattern_length(y, h, f) };
    let after = hypgeom::pattern_complexity(y, h, &pattern)?;
    let m = hypgeom::minimize_length(y, h, &pattern, cfg)?;
    Ok(SurgeryReport {
        resolution: Resolution { pattern, ..resolution },
        before,
        after,
        after_minimized: m.complexity,
        minimize_converged: m.converged,
    })
}

/// A piece of a pattern cut along its crossings with another pattern.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartialPattern {
    /// Points of the cut pattern in this piece.
    pub points: Vec<usize>,
    /// `(chord, segment)`: segment `s` of a chord lies between its `s`-th and
    /// `(s+1)`-th crossing counted from its first end.
    pub segments: Vec<(usize, usize)>,
    /// Segment ends at crossings.
    pub cut_ends: usize,
    pub complexity: Complexity,
}

/// Pieces of `t1` and of `t2` cut along `t1 ∩ t2`.
pub fn split_partial_patterns(
    y: &Complex2,
    h: &HypStructure,
    t1: &Pattern,
    t2: &Pattern,
) -> Result<(Vec<PartialPattern>, Vec<PartialPattern>)> {
    let xs = intersection_points(y, t1, t2)?;
    let first = pieces(y, h, t1, t2, &xs.iter().map(|x| (x.a, x.b)).collect::<Vec<_>>());
    let second = pieces(y, h, t2, t1, &xs.iter().map(|x| (x.b, x.a)).collect::<Vec<_>>());
    Ok((first, second))
}

fn pieces(y: &Complex2, h: &HypStructure, t: &Pattern, other: &Pattern, xs: &[(usize, usize)]) -> Vec<PartialPattern> {
    // crossing parameters along each chord of t
    let mut params: Vec<Vec<f64>> = vec![Vec::new(); t.chords.len()];
    for &(c, d) in xs {
        let kc = chord_klein(y, h, t, c);
        let kd = chord_klein(y, h, other, d);
        params[c].push(meet_param(kc, kd));
    }
    for l in params.iter_mut() {
        l.sort_by(f64::total_cmp);
    }
    // segment ids
    let mut seg_base = vec![0usize; t.chords.len() + 1];
    for c in 0..t.chords.len() {
        seg_base[c + 1] = seg_base[c] + params[c].len() + 1;
    }
    let n_seg = seg_base[t.chords.len()];
    let mut seg_len = vec![0.0; n_seg];
    for c in 0..t.chords.len() {
        let total = hypgeom::pattern_chord_length(y, h, t, c);
        let (k0, k1) = chord_klein(y, h, t, c);
        let mut prev = 0.0;
        for (i, &s) in params[c].iter().enumerate() {
            let d = klein_distance(k0, k0 + (k1 - k0) * s).min(total);
            seg_len[seg_base[c] + i] = (d - prev).max(0.0);
            prev = d.max(prev);
        }
        seg_len[seg_base[c] + params[c].len()] = (total - prev).max(0.0);
    }
    let mut uf = UnionFind::new(n_seg + t.points.len());
    for (c, ch) in t.chords.iter().enumerate() {
        uf.union(n_seg + ch.ends[0], seg_base[c]);
        uf.union(n_seg + ch.ends[1], seg_base[c] + params[c].len());
    }
    let mut out = Vec::new();
    for g in uf.groups() {
        let mut points = Vec::new();
        let mut segments = Vec::new();
        let mut length = 0.0;
        let mut cut_ends = 0;
        for x in g {
            if x >= n_seg {
                points.push(x - n_seg);
            } else {
                let c = seg_base.partition_point(|&b| b <= x) - 1;
                let s = x - seg_base[c];
                segments.push((c, s));
                length += seg_len[x];
                cut_ends += usize::from(s > 0) + usize::from(s < params[c].len());
            }
        }
        points.sort();
        segments.sort();
        out.push(PartialPattern {
            complexity: Complexity { weight: points.len() as u64, length },
            points,
            segments,
            cut_ends,
        });
    }
    out.sort_by(|a, b| a.points.cmp(&b.points).then(a.segments.cmp(&b.segments)));
    out
}

/// Whether two patterns are equal up to coordinates.
pub fn coincide(y: &Complex2, t1: &Pattern, t2: &Pattern) -> bool {
    t1.combinatorial_key(y) == t2.combinatorial_key(y)
}

/// Sidedness verdicts for every component, as booleans.
pub fn component_two_sided(y: &Complex2, t: &Pattern) -> Vec<bool> {
    t.all_sidedness(y).iter().map(|s| matches!(s, Sidedness::TwoSided { .. })).collect()
}

//! Normalisation: delete trivial circles and push innermost same-edge arcs
//! across their edge until the pattern is normal.

use serde::Serialize;

use crate::complex::Complex2;
use crate::error::{Error, Result};
use crate::pattern::{Chord, Pattern, Point};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Move {
    DeleteCircle { tri: usize },
    /// `chord` indexes the chords of the pattern the move was applied to.
    ResolveArc { tri: usize, chord: usize, edge: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MoveLog {
    pub moves: Vec<Move>,
    /// `w + d` before the first move and after each move, where `d` counts
    /// the pieces of the pattern in all triangles.
    pub measure: Vec<usize>,
    /// False for one-sided input: the output is normal but equivalence is
    /// not defined.
    pub equivalence_asserted: bool,
    /// Patterns before each move, when requested.
    #[serde(skip)]
    pub states: Vec<Pattern>,
}

pub fn measure(t: &Pattern) -> usize {
    t.weight() + t.triangle_pieces()
}

/// The innermost returning chord with the smallest `(triangle, chord)`.
fn innermost_returning(t: &Pattern) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (c, ch) in t.chords.iter().enumerate() {
        let [p, q] = ch.ends;
        if t.points[p].edge != t.points[q].edge {
            continue;
        }
        if t.rank(p).abs_diff(t.rank(q)) != 1 {
            continue;
        }
        let key = (ch.tri, c);
        if best.map_or(true, |b| key < b) {
            best = Some(key);
        }
    }
    best.map(|(_, c)| c)
}

/// Removes the returning chord `c` and its two points, joining the arcs
/// they met in every other triangle on that edge.
fn resolve_arc(y: &Complex2, t: &Pattern, c: usize, dirs: &[i8]) -> Pattern {
    let ch = t.chords[c];
    let [p, q] = ch.ends;
    let mut circles = t.circles.clone();
    let mut chords: Vec<Chord> = Vec::new();
    let mut by_tri: std::collections::BTreeMap<usize, (Option<usize>, Option<usize>)> = Default::default();
    for (d, other) in t.chords.iter().enumerate() {
        if d == c {
            continue;
        }
        let touches_p = other.ends.contains(&p);
        let touches_q = other.ends.contains(&q);
        if touches_p && touches_q {
            // a parallel copy of the removed arc closes up into a circle
            circles[other.tri] += 1;
        } else if touches_p || touches_q {
            let far = if other.ends[0] == p || other.ends[0] == q { other.ends[1] } else { other.ends[0] };
            let slot = by_tri.entry(other.tri).or_default();
            if touches_p {
                slot.0 = Some(far);
            } else {
                slot.1 = Some(far);
            }
        } else {
            chords.push(*other);
        }
    }
    // (triangle, far end of the arc at p, far end of the arc at q)
    let joined: Vec<(usize, usize, usize)> =
        by_tri.into_iter().map(|(tri, (a, b))| (tri, a.expect("arc at p"), b.expect("arc at q"))).collect();
    // renumber points without p and q
    let keep: Vec<usize> = (0..t.points.len()).filter(|&x| x != p && x != q).collect();
    let mut new_id = vec![usize::MAX; t.points.len()];
    for (i, &x) in keep.iter().enumerate() {
        new_id[x] = i;
    }
    let points: Vec<Point> = keep
        .iter()
        .map(|&x| {
            let mut pt = t.points[x].clone();
            if dirs[x] != 0 {
                pt.dir = dirs[x];
            }
            pt
        })
        .collect();
    let mut out_chords: Vec<Chord> = chords
        .into_iter()
        .map(|d| Chord { tri: d.tri, ends: [new_id[d.ends[0]], new_id[d.ends[1]]], side: d.side })
        .collect();
    let first_new = out_chords.len();
    for &(tri, a, b) in &joined {
        out_chords.push(Chord { tri, ends: [new_id[a], new_id[b]], side: 0 });
    }
    let mut out = Pattern::assemble(y, points, out_chords, circles, t.relaxed).expect("resolved pattern");
    for k in first_new..out.chords.len() {
        let a = out.chords[k].ends[0];
        let d = out.points[a].dir;
        if d != 0 {
            out.chords[k].side = out.side_for_dir(y, k, 0, d);
        }
    }
    out
}

/// Normalises an embedded pattern.  Orientation is carried along for
/// two-sided input; one-sided input is normalised with the equivalence flag
/// cleared.
pub fn normalize(y: &Complex2, t: &Pattern) -> Result<(Pattern, MoveLog)> {
    normalize_with(y, t, false)
}

/// Like [`normalize`], optionally recording every intermediate pattern.
pub fn normalize_with(y: &Complex2, t: &Pattern, keep_states: bool) -> Result<(Pattern, MoveLog)> {
    if t.relaxed && t.first_crossing(y).is_some() {
        return Err(Error::Precondition("normalisation needs an embedded pattern".into()));
    }
    let two_sided = t.is_two_sided(y);
    let mut cur = t.clone();
    let mut log = MoveLog { moves: Vec::new(), measure: vec![measure(&cur)], equivalence_asserted: two_sided, states: Vec::new() };
    loop {
        if keep_states {
            log.states.push(cur.clone());
        }
        if let Some(tri) = (0..y.n_triangles()).find(|&k| cur.circles[k] > 0) {
            cur.circles[tri] -= 1;
            log.moves.push(Move::DeleteCircle { tri });
        } else if let Some(c) = innermost_returning(&cur) {
            let dirs = cur.point_dirs(y).unwrap_or_else(|_| vec![0; cur.points.len()]);
            let ch = cur.chords[c];
            let edge = cur.points[ch.ends[0]].edge;
            cur = resolve_arc(y, &cur, c, &dirs);
            log.moves.push(Move::ResolveArc { tri: ch.tri, chord: c, edge });
        } else {
            if keep_states {
                log.states.pop();
            }
            break;
        }
        log.measure.push(measure(&cur));
    }
    Ok((cur, log))
}

//! Tracks in a truncated cover seen from the frontier: sides by crossing
//! parity, crossing verdicts and their orientation type, the four regions of
//! a crossing pair, A#B, canonical triples and the splitting-condition check.
//!
//! The frontier stands in for the boundary at infinity.  An end of an axis is
//! a point of the track on a frontier edge, and regions of the boundary are
//! sets of frontier vertices.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::complex::Complex2;
use crate::cover::Cover;
use crate::ends;
use crate::error::{Error, Result};
use crate::hypgeom::{self, Complexity, HypStructure};
use crate::intersect::{self, Policy};
use crate::pattern::Pattern;

/// Coordinates closer than this are treated as the same point.
const COORD_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

/// A two-sided track in a cover with its sides.  `R` is the side its
/// transverse orientation points into.
#[derive(Clone, Debug, Serialize)]
pub struct AxisData {
    pub label: String,
    pub pattern: Pattern,
    /// Points on frontier edges; `[P, N]` for an axis-like track.
    pub ends: Vec<usize>,
    /// Crossing parity of every vertex from the base vertex.
    pub parity: Vec<u8>,
    /// Parity class of the `R` side.
    pub r_class: u8,
}

impl AxisData {
    /// Sides of `pattern` by crossing parity.  `order` fixes which end is `P`;
    /// otherwise the ends are taken in point order.
    pub fn new(y: &Complex2, pattern: Pattern, label: &str, order: Option<[usize; 2]>) -> Result<AxisData> {
        if pattern.is_empty() || pattern.points.is_empty() {
            return Err(Error::Axis(format!("`{label}` has no points")));
        }
        if pattern.first_crossing(y).is_some() {
            return Err(Error::Axis(format!("`{label}` is not embedded")));
        }
        let mut pattern = pattern;
        if !pattern.is_oriented(y) {
            let n = pattern.components().len();
            if !pattern.orient_components(y, &vec![1; n]) {
                return Err(Error::OneSided);
            }
        }
        let parity = vertex_parity(y, &pattern).map_err(|e| Error::Axis(format!("`{label}`: {e}")))?;
        let dirs = pattern.point_dirs(y).map_err(|_| Error::Unoriented)?;
        let mut r_class = None;
        for (p, pt) in pattern.points.iter().enumerate() {
            let after = parity[y.edges[pt.edge].from] ^ ((pattern.rank(p) as u8 + 1) & 1);
            let r = if dirs[p] > 0 { after } else { after ^ 1 };
            match r_class {
                None => r_class = Some(r),
                Some(x) if x != r => {
                    return Err(Error::Axis(format!("`{label}`: transverse orientation disagrees with the sides")));
                }
                _ => {}
            }
        }
        let mut ends: Vec<usize> = (0..pattern.points.len()).filter(|&p| y.frontier_edge[pattern.points[p].edge]).collect();
        if let Some([p, n]) = order {
            if ends.len() != 2 || !ends.contains(&p) || !ends.contains(&n) || p == n {
                return Err(Error::Axis(format!("`{label}`: given ends are not its frontier points")));
            }
            ends = vec![p, n];
        }
        Ok(AxisData { label: label.to_string(), pattern, ends, parity, r_class: r_class.unwrap() })
    }

    /// A translate of this axis, given with the same point numbering, so
    /// that its ends correspond.
    pub fn translated(&self, y: &Complex2, pattern: Pattern, label: &str) -> Result<AxisData> {
        let order = self.end_pair().ok();
        AxisData::new(y, pattern, label, order)
    }

    pub fn is_axis_like(&self) -> bool {
        self.ends.len() == 2
    }

    pub fn end_pair(&self) -> Result<[usize; 2]> {
        if self.is_axis_like() {
            Ok([self.ends[0], self.ends[1]])
        } else {
            Err(Error::Axis(format!("`{}` has {} frontier points, not two ends", self.label, self.ends.len())))
        }
    }

    pub fn vertex_side(&self, v: usize) -> Side {
        if self.parity[v] == self.r_class {
            Side::R
        } else {
            Side::L
        }
    }

    /// Side of a point of edge `e` at `coord`; `None` on the track itself.
    pub fn side_at(&self, y: &Complex2, e: usize, coord: f64) -> Option<Side> {
        let mut below = 0u8;
        for &p in &self.pattern.on_edge[e] {
            let c = self.pattern.points[p].coord;
            if (c - coord).abs() <= COORD_EPS {
                return None;
            }
            if c < coord {
                below ^= 1;
            }
        }
        let class = self.parity[y.edges[e].from] ^ below;
        Some(if class == self.r_class { Side::R } else { Side::L })
    }

    /// Side of point `p` of another pattern.
    pub fn side_of_point(&self, y: &Complex2, t: &Pattern, p: usize) -> Option<Side> {
        self.side_at(y, t.points[p].edge, t.points[p].coord)
    }

    /// Side of every frontier vertex.
    pub fn side_map(&self, y: &Complex2) -> Vec<(usize, Side)> {
        (0..y.n_vertices()).filter(|&v| y.frontier_vertex[v]).map(|v| (v, self.vertex_side(v))).collect()
    }

    /// Frontier edges holding the ends, in end order.
    pub fn end_edges(&self) -> Vec<usize> {
        self.ends.iter().map(|&p| self.pattern.points[p].edge).collect()
    }
}

/// Parity of the number of crossings with `t` along any edge path from the
/// base vertex.
fn vertex_parity(y: &Complex2, t: &Pattern) -> std::result::Result<Vec<u8>, String> {
    let adj = y.adjacency();
    let mut parity: Vec<Option<u8>> = vec![None; y.n_vertices()];
    parity[y.base] = Some(0);
    let mut q = VecDeque::from([y.base]);
    while let Some(u) = q.pop_front() {
        let pu = parity[u].unwrap();
        for &(e, w, _) in &adj[u] {
            let pw = pu ^ (t.on_edge[e].len() as u8 & 1);
            match parity[w] {
                None => {
                    parity[w] = Some(pw);
                    q.push_back(w);
                }
                Some(x) if x != pw => {
                    return Err(format!("crossing parity along edge `{}` is inconsistent, so the track does not separate", y.edges[e].name));
                }
                _ => {}
            }
        }
    }
    parity.into_iter().map(|p| p.ok_or_else(|| "the complex is not connected".to_string())).collect()
}

/// Walk direction along a base track whose points all have two chords:
/// for each chord, the end the walk enters it by.
fn walk_entries(t: &Pattern) -> Option<Vec<usize>> {
    let comps = t.components();
    if comps.len() != 1 || (0..t.points.len()).any(|p| t.chords_at(p).len() != 2) {
        return None;
    }
    let mut entry = vec![usize::MAX; t.chords.len()];
    let mut p = 0;
    let mut c = *t.chords_at(0).iter().min().unwrap();
    while entry[c] == usize::MAX {
        entry[c] = p;
        let ends = t.chords[c].ends;
        let q = if ends[0] == p { ends[1] } else { ends[0] };
        let next = t.chords_at(q).iter().copied().find(|&d| d != c).unwrap();
        p = q;
        c = next;
    }
    Some(entry)
}

/// Components of the preimage of a base track in a cover, each with its
/// sides.  A component that does not separate the cover is an error.  Axis-like
/// components get `P` at the end reached by walking along the base track's
/// direction, so translates of a lift agree on which end is which.
pub fn lift_to_cover(cover: &Cover, base: &Complex2, t: &Pattern, label: &str) -> Result<Vec<AxisData>> {
    if t.is_empty() || t.points.is_empty() {
        return Ok(Vec::new());
    }
    if t.touches_frontier(base) {
        return Err(Error::TouchesFrontier);
    }
    let mut t = t.clone();
    if !t.is_oriented(base) {
        // a one-sided track is lifted unoriented; its lifts may be two-sided
        let n = t.components().len();
        t.orient_components(base, &vec![1; n]);
    }
    let y = &cover.complex;
    let lifted = cover.lift_pattern(base, &t);
    // lifted ids follow the order used to build the lift
    let mut point_base = Vec::with_capacity(lifted.points.len());
    for l in &cover.edge_label {
        point_base.extend(t.on_edge[l.base].iter().copied());
    }
    let mut by_tri: Vec<Vec<usize>> = vec![Vec::new(); base.n_triangles()];
    for (c, ch) in t.chords.iter().enumerate() {
        by_tri[ch.tri].push(c);
    }
    let mut chord_base = Vec::with_capacity(lifted.chords.len());
    for l in &cover.tri_label {
        chord_base.extend(by_tri[l.base].iter().copied());
    }
    let entries = walk_entries(&t);
    let mut out = Vec::new();
    for (i, comp) in lifted.components().into_iter().enumerate() {
        if comp.circle.is_some() {
            continue;
        }
        let frontier: Vec<usize> = comp.points.iter().copied().filter(|&p| y.frontier_edge[lifted.points[p].edge]).collect();
        let mut order = None;
        if let (Some(entry), 2) = (&entries, frontier.len()) {
            let mut c = comp.chords[0];
            let mut p_end = None;
            for _ in 0..=comp.chords.len() {
                let ends = lifted.chords[c].ends;
                let enter = entry[chord_base[c]];
                let q = if point_base[ends[0]] == enter { ends[1] } else { ends[0] };
                if frontier.contains(&q) {
                    p_end = Some(q);
                    break;
                }
                match lifted.chords_at(q).iter().copied().find(|&d| d != c) {
                    Some(d) => c = d,
                    None => break,
                }
            }
            if let Some(p) = p_end {
                let n = if frontier[0] == p { frontier[1] } else { frontier[0] };
                let mut sorted = comp.points.clone();
                sorted.sort();
                let new_id = |x: usize| sorted.binary_search(&x).unwrap();
                order = Some([new_id(p), new_id(n)]);
            }
        }
        let sub = lifted.subpattern(y, &comp.points, &comp.chords, &vec![0; y.n_triangles()]);
        out.push(AxisData::new(y, sub, &format!("{label}.{i}"), order)?);
    }
    Ok(out)
}

/// Index of the component passing closest to the base vertex.
pub fn nearest_to_base(y: &Complex2, axes: &[AxisData]) -> Option<usize> {
    let adj = y.adjacency();
    let mut dist = vec![usize::MAX; y.n_vertices()];
    dist[y.base] = 0;
    let mut q = VecDeque::from([y.base]);
    while let Some(u) = q.pop_front() {
        for &(_, w, _) in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                q.push_back(w);
            }
        }
    }
    let score = |a: &AxisData| {
        a.pattern
            .points
            .iter()
            .map(|p| dist[y.edges[p.edge].from].min(dist[y.edges[p.edge].to]))
            .min()
            .unwrap_or(usize::MAX)
    };
    (0..axes.len()).min_by_key(|&i| (score(&axes[i]), i))
}

/// Whether `b` crosses `a`: its two ends lie on different sides of `a`.
/// `None` when an end of `b` lies on `a`.
pub fn crosses(y: &Complex2, a: &AxisData, b: &AxisData) -> Result<Option<bool>> {
    let [p, n] = b.end_pair()?;
    let sp = a.side_of_point(y, &b.pattern, p);
    let sn = a.side_of_point(y, &b.pattern, n);
    Ok(match (sp, sn) {
        (Some(x), Some(z)) => Some(x != z),
        _ => None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CrossType {
    OrientationPreserving,
    OrientationReversing,
    /// Only one of the two axes crosses the other.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Coincide,
    DisjointEnds,
    Crosses(CrossType),
    /// An end of one axis lies on the other.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingReport {
    pub verdict: Verdict,
    pub b_crosses_a: Option<bool>,
    pub a_crosses_b: Option<bool>,
    /// Sides of `P_B`, `N_B` with respect to `a`.
    pub b_ends: [Option<Side>; 2],
    /// Sides of `P_A`, `N_A` with respect to `b`.
    pub a_ends: [Option<Side>; 2],
}

/// Crossing verdict of `b` against `a`, with the orientation type when the
/// two cross each other.
pub fn crosses_with_type(y: &Complex2, a: &AxisData, b: &AxisData) -> Result<CrossingReport> {
    let [pa, na] = a.end_pair()?;
    let [pb, nb] = b.end_pair()?;
    let b_ends = [a.side_of_point(y, &b.pattern, pb), a.side_of_point(y, &b.pattern, nb)];
    let a_ends = [b.side_of_point(y, &a.pattern, pa), b.side_of_point(y, &a.pattern, na)];
    let cross = |s: [Option<Side>; 2]| match s {
        [Some(x), Some(z)] => Some(x != z),
        _ => None,
    };
    let (b_crosses_a, a_crosses_b) = (cross(b_ends), cross(a_ends));
    let verdict = if intersect::coincide(y, &a.pattern, &b.pattern) {
        Verdict::Coincide
    } else {
        match (b_crosses_a, a_crosses_b) {
            (None, _) => Verdict::Unresolved,
            (Some(false), _) => Verdict::DisjointEnds,
            (Some(true), Some(true)) => {
                let r = Some(Side::R);
                // {P_B, N_A} or {N_B, P_A} on the positive sides
                if (b_ends[0] == r && a_ends[1] == r) || (b_ends[1] == r && a_ends[0] == r) {
                    Verdict::Crosses(CrossType::OrientationPreserving)
                } else {
                    Verdict::Crosses(CrossType::OrientationReversing)
                }
            }
            (Some(true), _) => Verdict::Crosses(CrossType::Mixed),
        }
    };
    Ok(CrossingReport { verdict, b_crosses_a, a_crosses_b, b_ends, a_ends })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Interval {
    /// `[P_A, P_B]`
    I1,
    /// `[P_B, N_A]`
    I2,
    /// `[N_A, N_B]`
    I3,
    /// `[N_B, P_A]`
    I4,
}

impl Interval {
    pub const ALL: [Interval; 4] = [Interval::I1, Interval::I2, Interval::I3, Interval::I4];

    pub fn parse(s: &str) -> Option<Interval> {
        match s.to_ascii_uppercase().as_str() {
            "I1" => Some(Interval::I1),
            "I2" => Some(Interval::I2),
            "I3" => Some(Interval::I3),
            "I4" => Some(Interval::I4),
            _ => None,
        }
    }
}

/// Frontier vertices in each interval of a crossing pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourRegions {
    pub i1: Vec<usize>,
    pub i2: Vec<usize>,
    pub i3: Vec<usize>,
    pub i4: Vec<usize>,
}

impl FourRegions {
    pub fn get(&self, i: Interval) -> &[usize] {
        match i {
            Interval::I1 => &self.i1,
            Interval::I2 => &self.i2,
            Interval::I3 => &self.i3,
            Interval::I4 => &self.i4,
        }
    }
}

/// Sides `(of a, of b)` of the interval `i`, for axes crossing each other.
pub fn interval_sides(y: &Complex2, a: &AxisData, b: &AxisData, i: Interval) -> Result<(Side, Side)> {
    let r = crosses_with_type(y, a, b)?;
    if r.b_crosses_a != Some(true) || r.a_crosses_b != Some(true) {
        return Err(Error::Axis(format!("`{}` and `{}` do not cross each other", a.label, b.label)));
    }
    let [pb, nb] = r.b_ends.map(Option::unwrap);
    let [pa, na] = r.a_ends.map(Option::unwrap);
    Ok(match i {
        Interval::I1 => (pb, pa),
        Interval::I2 => (pb, na),
        Interval::I3 => (nb, na),
        Interval::I4 => (nb, pa),
    })
}

pub fn four_regions(y: &Complex2, a: &AxisData, b: &AxisData) -> Result<FourRegions> {
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(4);
    for i in Interval::ALL {
        let (sa, sb) = interval_sides(y, a, b, i)?;
        sets.push((0..y.n_vertices()).filter(|&v| y.frontier_vertex[v] && a.vertex_side(v) == sa && b.vertex_side(v) == sb).collect());
    }
    let i4 = sets.pop().unwrap();
    let i3 = sets.pop().unwrap();
    let i2 = sets.pop().unwrap();
    let i1 = sets.pop().unwrap();
    Ok(FourRegions { i1, i2, i3, i4 })
}

/// Complement of the union of two axes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnionComplement {
    /// Frontier vertices of every frontier-touching component.
    pub frontier_pieces: Vec<Vec<usize>>,
    /// Each piece lies in one interval and each non-empty interval in one piece.
    pub aligned: Option<bool>,
}

/// When the axes share edge points, `B` is replaced by a copy with shifted
/// coordinates; its ends and sides are unchanged.
pub fn union_complement(y: &Complex2, a: &AxisData, b: &AxisData) -> Result<UnionComplement> {
    let mut m = intersect::merge(y, &a.pattern, &b.pattern);
    let mut shift = 0.0;
    while matches!(m, Err(Error::NotTransverse(_))) && shift < 0.5 {
        shift += 0.1;
        let coords: Vec<f64> = b.pattern.points.iter().map(|p| p.coord + shift).collect();
        m = intersect::merge(y, &a.pattern, &b.pattern.with_coords(&coords));
    }
    let m = m?;
    let comp = ends::complement_components_relaxed(y, &m.pattern);
    let frontier_pieces: Vec<Vec<usize>> = comp
        .components
        .iter()
        .filter(|c| c.infinite)
        .map(|c| c.vertices.iter().copied().filter(|&v| y.frontier_vertex[v]).collect())
        .collect();
    let aligned = four_regions(y, a, b).ok().map(|f| {
        let sets: Vec<BTreeSet<usize>> = Interval::ALL.iter().map(|&i| f.get(i).iter().copied().collect()).collect();
        let piece_ok = frontier_pieces.iter().all(|p| p.is_empty() || sets.iter().any(|s| p.iter().all(|v| s.contains(v))));
        let set_ok = sets.iter().all(|s| s.is_empty() || frontier_pieces.iter().any(|p| s.iter().all(|v| p.contains(v))));
        piece_ok && set_ok
    });
    Ok(UnionComplement { frontier_pieces, aligned })
}

/// The boundary of one interval's complement component of `A ∪ B`.
#[derive(Clone, Debug, Serialize)]
pub struct SharpSum {
    pub pattern: Pattern,
    pub interval: Interval,
    /// Frontier vertices of the selected component.
    pub region: Vec<usize>,
    pub complexity: Complexity,
    /// The pieces of `a` and `b` it is made from, before straightening.
    pub parts: Complexity,
    pub bounded: bool,
}

/// A#B: the half of `a` and the half of `b` bounding the complement
/// component over interval `i`, joined at their crossing, oriented into
/// that component.
pub fn sharp_sum(y: &Complex2, h: &HypStructure, a: &AxisData, b: &AxisData, i: Interval) -> Result<SharpSum> {
    let (sa, sb) = interval_sides(y, a, b, i)?;
    let region: Vec<usize> =
        (0..y.n_vertices()).filter(|&v| y.frontier_vertex[v] && a.vertex_side(v) == sa && b.vertex_side(v) == sb).collect();
    if region.is_empty() {
        return Err(Error::Axis(format!("interval {i:?} does not reach the frontier")));
    }
    let m = intersect::merge(y, &a.pattern, &b.pattern)?;
    let t = &m.pattern;
    let mut choices = Vec::new();
    for (ca, cb) in t.crossing_pairs(y) {
        // arms 0, 1 run along the chord of a, 2, 3 along the chord of b
        let ends = [t.chords[ca].ends[0], t.chords[ca].ends[1], t.chords[cb].ends[0], t.chords[cb].ends[1]];
        let arm_a = (0..2).find(|&k| b.side_at(y, t.points[ends[k]].edge, t.points[ends[k]].coord) == Some(sb));
        let arm_b = (2..4).find(|&k| a.side_at(y, t.points[ends[k]].edge, t.points[ends[k]].coord) == Some(sa));
        let (Some(u), Some(v)) = (arm_a, arm_b) else {
            return Err(Error::Axis("cannot round the corner at a crossing".into()));
        };
        let rs = intersect::reconnections(y, t, ca, cb);
        let pick = rs.iter().position(|r| r.iter().any(|&(x, z)| (x, z) == (u, v) || (x, z) == (v, u))).unwrap();
        choices.push(pick as u8);
    }
    let sides: Vec<i8> = t.chords.iter().map(|c| c.side).collect();
    let mut out = intersect::resolve_crossings(y, h, t, &sides, &Policy::Explicit(choices))?.pattern;
    let comp = ends::complement_components(y, &out)?;
    let target = comp.vertex_component[region[0]];
    let dirs = out.point_dirs(y).map_err(|_| Error::Unoriented)?;
    let mut signs = Vec::new();
    let mut keep_points = Vec::new();
    let mut keep_chords = Vec::new();
    for c in out.components() {
        let touching: Vec<usize> =
            c.points.iter().copied().filter(|&p| comp.sides[p].0 == target || comp.sides[p].1 == target).collect();
        let sign = match touching.first() {
            Some(&p) => {
                // a point whose `to` side is the target already points in
                if (comp.sides[p].1 == target) == (dirs[p] > 0) {
                    1
                } else {
                    -1
                }
            }
            None => 1,
        };
        signs.push(sign);
        if !touching.is_empty() {
            keep_points.extend(c.points.iter().copied());
            keep_chords.extend(c.chords.iter().copied());
        }
    }
    // orient_components restarts from +1, so compose with the current signs
    let base_dirs = dirs;
    out.orient_components(y, &vec![1; signs.len()]);
    let fresh = out.point_dirs(y).map_err(|_| Error::Unoriented)?;
    for (k, c) in out.components().iter().enumerate() {
        if let Some(&p) = c.points.first() {
            if fresh[p] != base_dirs[p] {
                signs[k] = -signs[k];
            }
        }
    }
    out.orient_components(y, &signs);
    let pattern = out.subpattern(y, &keep_points, &keep_chords, &vec![0; y.n_triangles()]);
    let complexity = hypgeom::pattern_complexity(y, h, &pattern)?;
    let (pa, pb) = intersect::split_partial_patterns(y, h, &a.pattern, &b.pattern)?;
    let mut parts = Complexity { weight: 0, length: 0.0 };
    for piece in &pa {
        if piece.points.first().and_then(|&p| b.side_of_point(y, &a.pattern, p)) == Some(sb) {
            parts.weight += piece.complexity.weight;
            parts.length += piece.complexity.length;
        }
    }
    for piece in &pb {
        if piece.points.first().and_then(|&p| a.side_of_point(y, &b.pattern, p)) == Some(sa) {
            parts.weight += piece.complexity.weight;
            parts.length += piece.complexity.length;
        }
    }
    let bounded = complexity.weight <= parts.weight && complexity.length <= parts.length + 1e-9;
    Ok(SharpSum { pattern, interval: i, region, complexity, parts, bounded })
}

/// A translate `gA` of an axis, and `g²A` when available.
#[derive(Clone, Debug)]
pub struct TranslateEntry {
    pub label: String,
    pub once: AxisData,
    pub twice: Option<AxisData>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalTriple {
    pub label: String,
    /// Frontier vertices in `[P_A, P_B]` for the chosen `B = gA`.
    pub nearest: Vec<usize>,
    /// Translates crossing `a` that were compared.
    pub candidates: usize,
    /// `g²A` is disjoint from `a`; `None` when it was not supplied.
    pub good: Option<bool>,
}

/// Among the supplied translates crossing `a`, the one whose `P` end is
/// nearest `P_A`: its interval `[P_A, P_B]` contains no other candidate's.
pub fn canonical_triple(y: &Complex2, a: &AxisData, family: &[TranslateEntry]) -> Result<Option<CanonicalTriple>> {
    if family.is_empty() {
        return Err(Error::Axis("translate set is empty".into()));
    }
    let mut cands: Vec<(usize, BTreeSet<usize>)> = Vec::new();
    for (k, entry) in family.iter().enumerate() {
        let r = crosses_with_type(y, a, &entry.once)?;
        if r.b_crosses_a == Some(true) && r.a_crosses_b == Some(true) {
            let f = four_regions(y, a, &entry.once)?;
            cands.push((k, f.i1.into_iter().collect()));
        }
    }
    let minimal = cands
        .iter()
        .filter(|(_, s)| !cands.iter().any(|(_, o)| o.len() < s.len() && o.is_subset(s)))
        .min_by(|x, z| x.1.len().cmp(&z.1.len()).then_with(|| family[x.0].label.cmp(&family[z.0].label)));
    let Some((k, set)) = minimal else { return Ok(None) };
    let entry = &family[*k];
    let good = match &entry.twice {
        Some(c) => Some(!intersect::coincide(y, &a.pattern, &c.pattern) && intersect::intersection_points(y, &a.pattern, &c.pattern)?.is_empty()),
        None => None,
    };
    Ok(Some(CanonicalTriple { label: entry.label.clone(), nearest: set.iter().copied().collect(), candidates: cands.len(), good }))
}

/// One of `gE∩E`, `gE∩E*`, `gE*∩E`, `gE*∩E*`, with `E` the `R` side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadrantCheck {
    /// Reaches the frontier.
    pub infinite: bool,
    pub empty: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranslateCheck {
    pub label: String,
    /// `gE∩E`, `gE∩E*`, `gE*∩E`, `gE*∩E*`.
    pub quadrants: [QuadrantCheck; 4],
    pub c: bool,
    pub d: bool,
    /// `gE = E*`.
    pub swaps_sides: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplittingReport {
    pub weight: usize,
    pub a: bool,
    pub complement_components: usize,
    pub infinite_components: usize,
    pub b: bool,
    pub c: bool,
    pub d: bool,
    pub e: bool,
    pub failures: Vec<String>,
    pub remedy: Option<String>,
    pub translates: Vec<TranslateCheck>,
}

impl SplittingReport {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c && self.d && self.e
    }
}

/// The five conditions for `a` to give a splitting, checked against a
/// finite set of translates, with reaching the frontier standing in for
/// having infinite image.
pub fn check_splitting_conditions(y: &Complex2, a: &AxisData, translates: &[AxisData]) -> Result<SplittingReport> {
    if translates.is_empty() {
        return Err(Error::Axis("translate set is empty".into()));
    }
    let comp = ends::complement_components(y, &a.pattern)?;
    let real: Vec<&ends::ComplementComponent> = comp.components.iter().filter(|c| c.disk.is_none()).collect();
    let infinite_components = real.iter().filter(|c| c.infinite).count();
    let b = real.len() == 2 && infinite_components == 2;
    let mut failures = Vec::new();
    if !b {
        failures.push(format!("(b) complement has {} components, {} reaching the frontier", real.len(), infinite_components));
    }
    let mut checks = Vec::new();
    for g in translates {
        let mut quadrants = [QuadrantCheck { infinite: false, empty: true }; 4];
        let mut mark = |sg: Option<Side>, sa: Option<Side>, frontier: bool| {
            if let (Some(sg), Some(sa)) = (sg, sa) {
                let q = match (sg, sa) {
                    (Side::R, Side::R) => 0,
                    (Side::R, Side::L) => 1,
                    (Side::L, Side::R) => 2,
                    (Side::L, Side::L) => 3,
                };
                quadrants[q].empty = false;
                quadrants[q].infinite |= frontier;
            }
        };
        for v in 0..y.n_vertices() {
            mark(Some(g.vertex_side(v)), Some(a.vertex_side(v)), y.frontier_vertex[v]);
        }
        for e in 0..y.n_edges() {
            let mut coords: Vec<f64> = a.pattern.on_edge[e]
                .iter()
                .map(|&p| a.pattern.points[p].coord)
                .chain(g.pattern.on_edge[e].iter().map(|&p| g.pattern.points[p].coord))
                .collect();
            coords.sort_by(f64::total_cmp);
            coords.dedup_by(|x, z| (*x - *z).abs() <= COORD_EPS);
            for w in coords.windows(2) {
                let mid = 0.5 * (w[0] + w[1]);
                mark(g.side_at(y, e, mid), a.side_at(y, e, mid), y.frontier_edge[e]);
            }
        }
        let c = quadrants.iter().any(|q| !q.infinite);
        let finite: Vec<&QuadrantCheck> = quadrants.iter().filter(|q| !q.infinite).collect();
        let d = finite.len() < 2 || finite.iter().any(|q| q.empty);
        let swaps_sides = intersect::coincide(y, &a.pattern, &g.pattern) && quadrants[0].empty && quadrants[3].empty;
        if !c {
            failures.push(format!("(c) fails for `{}`: all four intersections reach the frontier", g.label));
        }
        if !d {
            failures.push(format!("(d) fails for `{}`: two intersections are finite and neither is empty", g.label));
        }
        if swaps_sides {
            failures.push(format!("(e) fails for `{}`: it exchanges the two sides", g.label));
        }
        checks.push(TranslateCheck { label: g.label.clone(), quadrants, c, d, swaps_sides });
    }
    let c = checks.iter().all(|t| t.c);
    let d = checks.iter().all(|t| t.d);
    let e = checks.iter().all(|t| !t.swaps_sides);
    let remedy = (!e).then(|| "the quotient track is one-sided: replace t by a parallel two-sided track t'".to_string());
    Ok(SplittingReport {
        weight: a.pattern.weight(),
        a: true,
        complement_components: real.len(),
        infinite_components,
        b,
        c,
        d,
        e,
        failures,
        remedy,
        translates: checks,
    })
}

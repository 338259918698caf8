//! Patterns: points on edges joined by chords inside triangles.
//!
//! A chord stores its two endpoints in boundary order of its triangle (slot 0,
//! then slot 1, then slot 2, each slot read in its traversal direction).  The
//! boundary arc strictly between the two endpoints is the chord's *inside*;
//! `side = +1` means the transverse orientation points inside, `-1` outside,
//! `0` unoriented.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::complex::{Complex2, End, UnionFind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Point {
    pub edge: usize,
    /// Arclength coordinate along the edge, increasing towards `to`.
    pub coord: f64,
    /// Transverse direction along the edge (+1 towards `to`) for points on
    /// free edges; ignored elsewhere.
    pub dir: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Chord {
    pub tri: usize,
    pub ends: [usize; 2],
    pub side: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pattern {
    pub points: Vec<Point>,
    /// Point ids on each edge, ordered from `from` to `to`.
    pub on_edge: Vec<Vec<usize>>,
    pub chords: Vec<Chord>,
    /// Trivial circle count per triangle.
    pub circles: Vec<u32>,
    /// Chords may cross (a singular pattern).
    pub relaxed: bool,
    #[serde(skip)]
    rank: Vec<usize>,
    #[serde(skip)]
    at_point: Vec<Vec<usize>>,
}

/// One connected piece of a pattern, by ids into the parent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub points: Vec<usize>,
    pub chords: Vec<usize>,
    /// Set for a trivial circle component: its triangle.
    pub circle: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Sidedness {
    /// Side bit for each chord of the component (in component order) and
    /// direction for each point.
    TwoSided { chord_sides: Vec<(usize, i8)>, point_dirs: Vec<(usize, i8)> },
    /// A closed chord walk along which the side choice reverses.
    OneSided { cycle: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalityReport {
    pub normal: bool,
    /// Chords with both ends on one edge.
    pub returning_chords: Vec<usize>,
    /// Triangles holding trivial circles.
    pub circle_triangles: Vec<usize>,
}

/// Even positions are gaps, odd positions are points.
pub const SLOT_STRIDE: u64 = 1 << 32;

impl Pattern {
    pub fn empty(y: &Complex2) -> Pattern {
        Pattern {
            points: Vec::new(),
            on_edge: vec![Vec::new(); y.n_edges()],
            chords: Vec::new(),
            circles: vec![0; y.n_triangles()],
            relaxed: false,
            rank: Vec::new(),
            at_point: Vec::new(),
        }
    }

    /// Builds and validates a pattern.  Chord ends may be given in either
    /// order; a side bit refers to the order given.
    pub fn new(
        y: &Complex2,
        points: Vec<Point>,
        chords: Vec<Chord>,
        circles: Vec<u32>,
        relaxed: bool,
    ) -> Result<Pattern> {
        let t = Self::assemble(y, points, chords, circles, relaxed)?;
        t.validate(y)?;
        Ok(t)
    }

    /// Like [`Pattern::new`] without the valence and embedding checks.
    pub fn assemble(
        y: &Complex2,
        points: Vec<Point>,
        chords: Vec<Chord>,
        circles: Vec<u32>,
        relaxed: bool,
    ) -> Result<Pattern> {
        if circles.len() != y.n_triangles() {
            return Err(Error::Pattern("circle counts must cover every triangle".into()));
        }
        let mut on_edge = vec![Vec::new(); y.n_edges()];
        for (i, p) in points.iter().enumerate() {
            if p.edge >= y.n_edges() {
                return Err(Error::Pattern(format!("point {i} lies on a missing edge")));
            }
            if !p.coord.is_finite() {
                return Err(Error::Pattern(format!("point {i} has a non-finite coordinate")));
            }
            on_edge[p.edge].push(i);
        }
        for list in on_edge.iter_mut() {
            list.sort_by(|&a, &b| points[a].coord.total_cmp(&points[b].coord).then(a.cmp(&b)));
        }
        let mut t = Pattern {
            points,
            on_edge,
            chords,
            circles,
            relaxed,
            rank: Vec::new(),
            at_point: Vec::new(),
        };
        t.refresh();
        for c in 0..t.chords.len() {
            let ch = t.chords[c];
            if ch.tri >= y.n_triangles() {
                return Err(Error::Pattern(format!("chord {c} lies in a missing triangle")));
            }
            for &p in &ch.ends {
                if p >= t.points.len() {
                    return Err(Error::Pattern(format!("chord {c} uses a missing point")));
                }
                if y.slot_of(ch.tri, t.points[p].edge).is_none() {
                    return Err(Error::Pattern(format!(
                        "chord {c} in triangle `{}` uses a point off its boundary",
                        y.triangles[ch.tri].name
                    )));
                }
            }
            if ch.ends[0] == ch.ends[1] {
                return Err(Error::Pattern(format!("chord {c} joins a point to itself")));
            }
            let (a, b) = (t.bpos(y, ch.tri, ch.ends[0]), t.bpos(y, ch.tri, ch.ends[1]));
            if a > b {
                t.chords[c].ends.swap(0, 1);
                t.chords[c].side = -ch.side;
            }
        }
        Ok(t)
    }

    /// Recomputes the per-point caches after edits to `on_edge` or `chords`.
    pub fn refresh(&mut self) {
        self.rank = vec![0; self.points.len()];
        for list in &self.on_edge {
            for (i, &p) in list.iter().enumerate() {
                self.rank[p] = i;
            }
        }
        self.at_point = vec![Vec::new(); self.points.len()];
        for (c, ch) in self.chords.iter().enumerate() {
            for &p in &ch.ends {
                self.at_point[p].push(c);
            }
        }
    }

    pub fn validate(&self, y: &Complex2) -> Result<()> {
        for list in &self.on_edge {
            for w in list.windows(2) {
                if self.points[w[0]].coord >= self.points[w[1]].coord {
                    return Err(Error::Pattern(format!(
                        "points on edge `{}` do not have strictly increasing coordinates",
                        y.edges[self.points[w[0]].edge].name
                    )));
                }
            }
        }
        for (p, pt) in self.points.iter().enumerate() {
            let mut seen: Vec<usize> = self.at_point[p].iter().map(|&c| self.chords[c].tri).collect();
            seen.sort();
            let expected: Vec<usize> = y.incidence(pt.edge).iter().map(|&(t, _)| t).collect();
            if seen != expected {
                return Err(Error::Pattern(format!(
                    "point {p} on edge `{}` needs exactly one chord in each of its {} triangles, has {}",
                    y.edges[pt.edge].name,
                    expected.len(),
                    seen.len()
                )));
            }
        }
        if !self.relaxed {
            if let Some((a, b)) = self.first_crossing(y) {
                return Err(Error::Pattern(format!("chords {a} and {b} cross")));
            }
        }
        Ok(())
    }

    pub fn weight(&self) -> usize {
        self.points.len()
    }
    pub fn n_circles(&self) -> u32 {
        self.circles.iter().sum()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.n_circles() == 0
    }
    /// Number of components of `t ∩ σ` summed over triangles.
    pub fn triangle_pieces(&self) -> usize {
        self.chords.len() + self.n_circles() as usize
    }

    /// Index of a point among the points of its edge.
    pub fn rank(&self, p: usize) -> usize {
        self.rank[p]
    }
    /// Chords ending at a point.
    pub fn chords_at(&self, p: usize) -> &[usize] {
        &self.at_point[p]
    }
    pub fn chord_in(&self, p: usize, tri: usize) -> Option<usize> {
        self.at_point[p].iter().copied().find(|&c| self.chords[c].tri == tri)
    }

    /// Position of a point on the boundary of `tri` (odd values).
    pub fn bpos(&self, y: &Complex2, tri: usize, p: usize) -> u64 {
        let e = self.points[p].edge;
        let k = y.slot_of(tri, e).expect("point on triangle boundary");
        let n = self.on_edge[e].len();
        let local = if y.slot(tri, k).sign > 0 { self.rank[p] } else { n - 1 - self.rank[p] };
        k as u64 * SLOT_STRIDE + 2 * local as u64 + 1
    }

    /// Position of gap `g` of edge `e` on the boundary of `tri` (even values).
    pub fn gap_bpos(&self, y: &Complex2, tri: usize, e: usize, g: usize) -> u64 {
        let k = y.slot_of(tri, e).expect("edge on triangle boundary");
        let n = self.on_edge[e].len();
        let local = if y.slot(tri, k).sign > 0 { g } else { n - g };
        k as u64 * SLOT_STRIDE + 2 * local as u64
    }

    /// Slot of a point in `tri`.
    pub fn slot_in(&self, y: &Complex2, tri: usize, p: usize) -> usize {
        y.slot_of(tri, self.points[p].edge).expect("point on triangle boundary")
    }

    /// Transverse direction at chord end `which` implied by a side bit.
    pub fn end_dir(&self, y: &Complex2, c: usize, which: usize, side: i8) -> i8 {
        let ch = &self.chords[c];
        let p = ch.ends[which];
        let k = self.slot_in(y, ch.tri, p);
        let eps = y.slot(ch.tri, k).sign;
        if which == 0 {
            side * eps
        } else {
            -side * eps
        }
    }

    /// Side bit that makes end `which` of chord `c` point in direction `dir`.
    pub fn side_for_dir(&self, y: &Complex2, c: usize, which: usize, dir: i8) -> i8 {
        // end_dir is linear in side with a ±1 factor
        dir * self.end_dir(y, c, which, 1)
    }

    /// Transverse direction of every point, or the first point where the
    /// chords disagree.  Points with no information get 0.
    pub fn point_dirs(&self, y: &Complex2) -> std::result::Result<Vec<i8>, usize> {
        let mut dirs = vec![0i8; self.points.len()];
        for (p, pt) in self.points.iter().enumerate() {
            if self.at_point[p].is_empty() {
                dirs[p] = pt.dir;
            }
        }
        for c in 0..self.chords.len() {
            let s = self.chords[c].side;
            if s == 0 {
                continue;
            }
            for w in 0..2 {
                let p = self.chords[c].ends[w];
                let d = self.end_dir(y, c, w, s);
                if dirs[p] == 0 {
                    dirs[p] = d;
                } else if dirs[p] != d {
                    return Err(p);
                }
            }
        }
        Ok(dirs)
    }

    /// True when every chord and every free point carries a coherent orientation.
    pub fn is_oriented(&self, y: &Complex2) -> bool {
        match self.point_dirs(y) {
            Ok(d) => d.iter().all(|&x| x != 0) && self.chords.iter().all(|c| c.side != 0),
            Err(_) => false,
        }
    }

    /// First pair of chords in one triangle whose ends interleave.
    pub fn first_crossing(&self, y: &Complex2) -> Option<(usize, usize)> {
        let mut by_tri: Vec<Vec<usize>> = vec![Vec::new(); y.n_triangles()];
        for (c, ch) in self.chords.iter().enumerate() {
            by_tri[ch.tri].push(c);
        }
        for (t, list) in by_tri.iter().enumerate() {
            let mut ev: Vec<(u64, usize, bool)> = Vec::new();
            for &c in list {
                let ch = &self.chords[c];
                ev.push((self.bpos(y, t, ch.ends[0]), c, true));
                ev.push((self.bpos(y, t, ch.ends[1]), c, false));
            }
            ev.sort();
            let mut stack: Vec<usize> = Vec::new();
            for (_, c, open) in ev {
                if open {
                    stack.push(c);
                } else {
                    let top = stack.pop().unwrap();
                    if top != c {
                        return Some((top.min(c), top.max(c)));
                    }
                }
            }
        }
        None
    }

    /// All interleaving chord pairs `(a, b)` with `a < b`.
    pub fn crossing_pairs(&self, y: &Complex2) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut by_tri: Vec<Vec<usize>> = vec![Vec::new(); y.n_triangles()];
        for (c, ch) in self.chords.iter().enumerate() {
            by_tri[ch.tri].push(c);
        }
        for (t, list) in by_tri.iter().enumerate() {
            let pos: Vec<(u64, u64)> = list
                .iter()
                .map(|&c| (self.bpos(y, t, self.chords[c].ends[0]), self.bpos(y, t, self.chords[c].ends[1])))
                .collect();
            for i in 0..list.len() {
                for j in (i + 1)..list.len() {
                    if interleave(pos[i], pos[j]) {
                        let (a, b) = (list[i].min(list[j]), list[i].max(list[j]));
                        out.push((a, b));
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn normality(&self, y: &Complex2) -> NormalityReport {
        let returning_chords: Vec<usize> = (0..self.chords.len())
            .filter(|&c| {
                let ch = &self.chords[c];
                self.points[ch.ends[0]].edge == self.points[ch.ends[1]].edge
            })
            .collect();
        let circle_triangles: Vec<usize> = (0..y.n_triangles()).filter(|&t| self.circles[t] > 0).collect();
        NormalityReport { normal: returning_chords.is_empty() && circle_triangles.is_empty(), returning_chords, circle_triangles }
    }

    pub fn is_normal(&self, y: &Complex2) -> bool {
        self.normality(y).normal
    }

    pub fn touches_frontier(&self, y: &Complex2) -> bool {
        self.points.iter().any(|p| y.frontier_edge[p.edge])
    }

    /// Connected components; trivial circles come last, one per circle.
    pub fn components(&self) -> Vec<Component> {
        let mut uf = UnionFind::new(self.points.len());
        for ch in &self.chords {
            uf.union(ch.ends[0], ch.ends[1]);
        }
        let groups = uf.groups();
        let mut comp_of = vec![0usize; self.points.len()];
        for (i, g) in groups.iter().enumerate() {
            for &p in g {
                comp_of[p] = i;
            }
        }
        let mut out: Vec<Component> =
            groups.into_iter().map(|points| Component { points, chords: Vec::new(), circle: None }).collect();
        for (c, ch) in self.chords.iter().enumerate() {
            out[comp_of[ch.ends[0]]].chords.push(c);
        }
        for (t, &n) in self.circles.iter().enumerate() {
            for _ in 0..n {
                out.push(Component { points: Vec::new(), chords: Vec::new(), circle: Some(t) });
            }
        }
        out
    }

    /// The sub-pattern made of the given points and chords (and circles).
    pub fn subpattern(&self, y: &Complex2, points: &[usize], chords: &[usize], circles: &[u32]) -> Pattern {
        let mut new_id = HashMap::new();
        let mut pts = Vec::new();
        let mut sorted_points = points.to_vec();
        sorted_points.sort();
        for &p in &sorted_points {
            new_id.insert(p, pts.len());
            pts.push(self.points[p].clone());
        }
        let mut chs = Vec::new();
        let mut sorted_chords = chords.to_vec();
        sorted_chords.sort();
        for &c in &sorted_chords {
            let ch = self.chords[c];
            chs.push(Chord { tri: ch.tri, ends: [new_id[&ch.ends[0]], new_id[&ch.ends[1]]], side: ch.side });
        }
        let mut t = Pattern::assemble(y, pts, chs, circles.to_vec(), self.relaxed).expect("sub-pattern of a valid pattern");
        t.relaxed = self.relaxed;
        t
    }

    /// The components as separate patterns.
    pub fn component_split(&self, y: &Complex2) -> Vec<Pattern> {
        self.components()
            .into_iter()
            .map(|c| {
                let mut circles = vec![0u32; y.n_triangles()];
                if let Some(t) = c.circle {
                    circles[t] = 1;
                }
                self.subpattern(y, &c.points, &c.chords, &circles)
            })
            .collect()
    }

    /// Side propagation over one component, starting from chord `start`
    /// (an index into the component's chord list).
    pub fn sidedness(&self, y: &Complex2, comp: &Component, start: usize) -> Sidedness {
        if comp.circle.is_some() {
            return Sidedness::TwoSided { chord_sides: Vec::new(), point_dirs: Vec::new() };
        }
        if comp.chords.is_empty() {
            let dirs = comp
                .points
                .iter()
                .map(|&p| (p, if self.points[p].dir != 0 { self.points[p].dir } else { 1 }))
                .collect();
            return Sidedness::TwoSided { chord_sides: Vec::new(), point_dirs: dirs };
        }
        let c0 = comp.chords[start % comp.chords.len()];
        let mut side: HashMap<usize, i8> = HashMap::new();
        let mut dir: HashMap<usize, i8> = HashMap::new();
        // BFS tree over points: parent chord of each point
        let mut via: HashMap<usize, Option<usize>> = HashMap::new();
        side.insert(c0, 1);
        let mut queue = VecDeque::new();
        let root = self.chords[c0].ends[0];
        via.insert(root, None);
        dir.insert(root, self.end_dir(y, c0, 0, 1));
        queue.push_back(root);
        while let Some(p) = queue.pop_front() {
            let d = dir[&p];
            for &c in &self.at_point[p] {
                let ch = self.chords[c];
                let which = if ch.ends[0] == p { 0 } else { 1 };
                let s = self.side_for_dir(y, c, which, d);
                match side.get(&c) {
                    Some(&old) if old != s => {
                        return Sidedness::OneSided { cycle: self.reversing_cycle(&via, c, p) };
                    }
                    Some(_) => {}
                    None => {
                        side.insert(c, s);
                    }
                }
                let q = ch.ends[1 - which];
                let dq = self.end_dir(y, c, 1 - which, s);
                match dir.get(&q) {
                    Some(&old) if old != dq => {
                        return Sidedness::OneSided { cycle: self.reversing_cycle(&via, c, q) };
                    }
                    Some(_) => {}
                    None => {
                        dir.insert(q, dq);
                        via.insert(q, Some(c));
                        queue.push_back(q);
                    }
                }
            }
        }
        let mut chord_sides: Vec<(usize, i8)> = comp.chords.iter().map(|&c| (c, side[&c])).collect();
        chord_sides.sort();
        let mut point_dirs: Vec<(usize, i8)> = comp.points.iter().map(|&p| (p, dir[&p])).collect();
        point_dirs.sort();
        Sidedness::TwoSided { chord_sides, point_dirs }
    }

    fn reversing_cycle(&self, via: &HashMap<usize, Option<usize>>, closing: usize, at: usize) -> Vec<usize> {
        // tree paths from both ends of the closing chord back to the root
        let path_to_root = |mut p: usize| {
            let mut chords = Vec::new();
            let mut pts = vec![p];
            while let Some(Some(c)) = via.get(&p) {
                chords.push(*c);
                let ch = self.chords[*c];
                p = if ch.ends[0] == p { ch.ends[1] } else { ch.ends[0] };
                pts.push(p);
            }
            (chords, pts)
        };
        let ch = self.chords[closing];
        let other = if ch.ends[0] == at { ch.ends[1] } else { ch.ends[0] };
        let (ca, pa) = path_to_root(at);
        let (cb, pb) = path_to_root(other);
        // strip the common tail
        let (mut i, mut j) = (pa.len(), pb.len());
        while i > 1 && j > 1 && pa[i - 2] == pb[j - 2] {
            i -= 1;
            j -= 1;
        }
        let mut cycle = vec![closing];
        cycle.extend(ca[..i - 1].iter().copied());
        cycle.extend(cb[..j - 1].iter().rev().copied());
        cycle
    }

    /// Sidedness verdict for every component.
    pub fn all_sidedness(&self, y: &Complex2) -> Vec<Sidedness> {
        self.components().iter().map(|c| self.sidedness(y, c, 0)).collect()
    }

    pub fn is_two_sided(&self, y: &Complex2) -> bool {
        self.all_sidedness(y).iter().all(|s| matches!(s, Sidedness::TwoSided { .. }))
    }

    /// Orients every two-sided component; `signs[i]` flips component `i`.
    /// One-sided components keep side 0.
    pub fn orient_components(&mut self, y: &Complex2, signs: &[i8]) -> bool {
        let comps = self.components();
        let mut all = true;
        for (i, comp) in comps.iter().enumerate() {
            let sgn = signs.get(i).copied().unwrap_or(1);
            match self.sidedness(y, comp, 0) {
                Sidedness::TwoSided { chord_sides, point_dirs } => {
                    for (c, s) in chord_sides {
                        self.chords[c].side = s * sgn;
                    }
                    for (p, d) in point_dirs {
                        if self.at_point[p].is_empty() {
                            self.points[p].dir = d * sgn;
                        }
                    }
                }
                Sidedness::OneSided { .. } => {
                    for &c in &comp.chords {
                        self.chords[c].side = 0;
                    }
                    all = false;
                }
            }
        }
        all
    }

    /// The same pattern with every transverse orientation reversed.
    pub fn reversed(&self) -> Pattern {
        let mut t = self.clone();
        for c in t.chords.iter_mut() {
            c.side = -c.side;
        }
        for p in t.points.iter_mut() {
            p.dir = -p.dir;
        }
        t
    }

    /// Replaces coordinates; `coords[p]` for every point.  Equal neighbours
    /// are allowed here (an optimiser may merge points in the limit).
    pub fn with_coords(&self, coords: &[f64]) -> Pattern {
        let mut t = self.clone();
        for (p, &c) in coords.iter().enumerate() {
            t.points[p].coord = c;
        }
        t
    }

    /// Disjoint union, keeping `self`'s points first.  Coordinates must not collide.
    pub fn union(&self, y: &Complex2, other: &Pattern) -> Result<Pattern> {
        let off = self.points.len();
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        let mut chs = self.chords.clone();
        chs.extend(other.chords.iter().map(|c| Chord { tri: c.tri, ends: [c.ends[0] + off, c.ends[1] + off], side: c.side }));
        let circles: Vec<u32> = self.circles.iter().zip(&other.circles).map(|(a, b)| a + b).collect();
        Pattern::new(y, pts, chs, circles, self.relaxed || other.relaxed)
    }

    /// Canonical combinatorial key: chords as ((edge, rank), (edge, rank)) per
    /// triangle, free-edge point counts, circle counts.
    pub fn combinatorial_key(&self, y: &Complex2) -> Vec<u64> {
        let mut key = Vec::new();
        let mut per_tri: Vec<Vec<(u64, u64)>> = vec![Vec::new(); y.n_triangles()];
        for ch in &self.chords {
            let a = (self.points[ch.ends[0]].edge as u64) << 20 | self.rank[ch.ends[0]] as u64;
            let b = (self.points[ch.ends[1]].edge as u64) << 20 | self.rank[ch.ends[1]] as u64;
            per_tri[ch.tri].push((a.min(b), a.max(b)));
        }
        for (t, mut list) in per_tri.into_iter().enumerate() {
            list.sort();
            key.push(list.len() as u64);
            for (a, b) in list {
                key.push(a);
                key.push(b);
            }
            key.push(self.circles[t] as u64);
        }
        for e in 0..y.n_edges() {
            if y.is_free(e) {
                key.push(self.on_edge[e].len() as u64);
            }
        }
        key
    }

    /// Closed chord walks generating the cycles of the pattern's graph.
    /// Each walk is a list of `(point, chord)` steps: leave the point along the chord.
    pub fn cycle_basis(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.points.len();
        let mut via: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut depth = vec![0usize; n];
        let mut tree_chord = vec![false; self.chords.len()];
        for r in 0..n {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            let mut q = VecDeque::from([r]);
            while let Some(p) = q.pop_front() {
                for &c in &self.at_point[p] {
                    let ch = self.chords[c];
                    let o = if ch.ends[0] == p { ch.ends[1] } else { ch.ends[0] };
                    if !seen[o] {
                        seen[o] = true;
                        via[o] = Some(c);
                        depth[o] = depth[p] + 1;
                        tree_chord[c] = true;
                        q.push_back(o);
                    }
                }
            }
        }
        let other = |c: usize, p: usize| {
            let ch = self.chords[c];
            if ch.ends[0] == p {
                ch.ends[1]
            } else {
                ch.ends[0]
            }
        };
        let mut out = Vec::new();
        for c in 0..self.chords.len() {
            if tree_chord[c] {
                continue;
            }
            let [a, b] = self.chords[c].ends;
            // path a -> lca and b -> lca
            let (mut x, mut z) = (a, b);
            let mut up_a: Vec<(usize, usize)> = Vec::new();
            let mut up_b: Vec<(usize, usize)> = Vec::new();
            while x != z {
                if depth[x] >= depth[z] {
                    let pc = via[x].unwrap();
                    up_a.push((x, pc));
                    x = other(pc, x);
                } else {
                    let pc = via[z].unwrap();
                    up_b.push((z, pc));
                    z = other(pc, z);
                }
            }
            // walk: b --c--> a, a up to lca, lca down to b
            let mut walk = vec![(b, c)];
            walk.extend(up_a.iter().copied());
            for &(zp, pc) in up_b.iter().rev() {
                walk.push((other(pc, zp), pc));
            }
            out.push(walk);
        }
        out
    }

    /// Edge moves of the corner-path homotopy of a closed chord walk: each
    /// entry `(edge, sign)` traverses the edge; `start` is the vertex the
    /// loop starts from.
    pub fn corner_path(&self, y: &Complex2, walk: &[(usize, usize)]) -> (Option<usize>, Vec<(usize, i8)>) {
        // end of the point's edge at which chord c cuts its corner, None for a returning chord
        let corner_end = |c: usize, p: usize| -> Option<End> {
            let ch = self.chords[c];
            let q = if ch.ends[0] == p { ch.ends[1] } else { ch.ends[0] };
            let i = self.slot_in(y, ch.tri, p);
            let j = self.slot_in(y, ch.tri, q);
            if i == j {
                None
            } else if j == (i + 1) % 3 {
                Some(y.slot(ch.tri, i).finish_end())
            } else {
                Some(y.slot(ch.tri, i).start_end())
            }
        };
        let n = walk.len();
        // arrival chord at walk[i].0 is walk[i-1].1
        let start = (0..n).find(|&i| corner_end(walk[(i + n - 1) % n].1, walk[i].0).is_some());
        let Some(s) = start else { return (None, Vec::new()) };
        let mut moves = Vec::new();
        let p0 = walk[s].0;
        let mut cur = corner_end(walk[(s + n - 1) % n].1, p0).unwrap();
        let start_vertex = y.vertex_of_end(self.points[p0].edge, cur);
        for k in 0..n {
            let (p, c) = walk[(s + k) % n];
            let e = self.points[p].edge;
            if let Some(d) = corner_end(c, p) {
                if d != cur {
                    moves.push((e, if cur == End::From { 1 } else { -1 }));
                }
                let ch = self.chords[c];
                let q = if ch.ends[0] == p { ch.ends[1] } else { ch.ends[0] };
                cur = corner_end(c, q).unwrap();
            }
        }
        (Some(start_vertex), moves)
    }
}

/// Whether two chords given by boundary positions `(a0 < a1)` and `(b0 < b1)` interleave.
pub fn interleave(a: (u64, u64), b: (u64, u64)) -> bool {
    let inside = |x: u64, c: (u64, u64)| c.0 < x && x < c.1;
    inside(b.0, a) != inside(b.1, a)
}

/// Subgroup carried by a track, as an index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CarriedIndex {
    /// `0` means the trivial subgroup, `d` the subgroup of index `d`.
    Index(u64),
    Unknown,
}

/// How to measure the cyclic group `H` on loops of the ambient complex.
pub enum Carry<'a> {
    /// A cocycle taking the value ±1 on a generator of `H`.
    Cocycle(&'a [i64]),
    /// A subgroup-mode cover; words are compared with powers of the first
    /// subgroup generator up to `depth_cap`.
    Subgroup { cover: &'a crate::cover::Cover, depth_cap: u32 },
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Index of the subgroup of `H` carried by `t`.
pub fn carried_index(y: &Complex2, t: &Pattern, carry: &Carry) -> Result<CarriedIndex> {
    if t.touches_frontier(y) {
        return Err(Error::TouchesFrontier);
    }
    let mut d = 0u64;
    for walk in t.cycle_basis() {
        let (start, moves) = t.corner_path(y, &walk);
        let k = match carry {
            Carry::Cocycle(psi) => {
                if psi.len() != y.n_edges() {
                    return Err(Error::Cocycle("one value per edge expected".into()));
                }
                Some(moves.iter().map(|&(e, s)| s as i64 * psi[e]).sum::<i64>())
            }
            Carry::Subgroup { cover, depth_cap } => match start {
                None => Some(0),
                Some(v) => cover.power_of_generator(v, &moves, *depth_cap)?,
            },
        };
        match k {
            Some(k) => d = gcd(d, k.unsigned_abs()),
            None => return Ok(CarriedIndex::Unknown),
        }
    }
    Ok(CarriedIndex::Index(d))
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// A pattern read from text, with the ids used in the file.
#[derive(Clone, Debug)]
pub struct ParsedPattern {
    pub pattern: Pattern,
    pub point_names: Vec<String>,
    /// `ends P N` line, when present: the two named points.
    pub ends: Option<(usize, usize)>,
}

/// Parses the pattern text format.
///
/// ```text
/// point p1 a 0 0.25      # id, edge, index along the edge, optional coordinate
/// chord T1 p1 p2
/// circle T2 1
/// orient 0 +1            # chord ordinal (0-based), or point:<id> for free edges
/// ends p1 p2             # optional: P end, N end of an axis
/// ```
pub fn parse_pattern(y: &Complex2, text: &str) -> Result<ParsedPattern> {
    struct RawPoint {
        name: String,
        edge: usize,
        index: usize,
        coord: Option<f64>,
        line: usize,
    }
    let mut raw: Vec<RawPoint> = Vec::new();
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut chords: Vec<(usize, usize, String, String)> = Vec::new();
    let mut circles = vec![0u32; y.n_triangles()];
    let mut orients: Vec<(usize, String, i8)> = Vec::new();
    let mut ends_line: Option<(usize, String, String)> = None;
    let mut relaxed = false;
    for (ln0, rawline) in text.lines().enumerate() {
        let line = ln0 + 1;
        let toks: Vec<&str> = strip_comment(rawline).split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let syntax = |msg: &str| Error::Syntax { line, msg: msg.to_string() };
        match toks[0] {
            "point" => {
                if toks.len() != 4 && toks.len() != 5 {
                    return Err(syntax("expected `point <id> <edge> <index> [coord]`"));
                }
                let edge = y.edge_id(toks[2]).ok_or(Error::Dangling { line, kind: "edge", name: toks[2].into() })?;
                let index: usize = toks[3].parse().map_err(|_| syntax("index must be a non-negative integer"))?;
                let coord = match toks.get(4) {
                    Some(t) => Some(t.parse::<f64>().map_err(|_| syntax("coordinate must be a number"))?),
                    None => None,
                };
                if names.insert(toks[1].to_string(), raw.len()).is_some() {
                    return Err(syntax(&format!("duplicate point `{}`", toks[1])));
                }
                raw.push(RawPoint { name: toks[1].to_string(), edge, index, coord, line });
            }
            "chord" => {
                if toks.len() != 4 {
                    return Err(syntax("expected `chord <triangle> <point> <point>`"));
                }
                let t = y.triangle_id(toks[1]).ok_or(Error::Dangling { line, kind: "triangle", name: toks[1].into() })?;
                chords.push((line, t, toks[2].to_string(), toks[3].to_string()));
            }
            "circle" => {
                if toks.len() != 3 {
                    return Err(syntax("expected `circle <triangle> <count>`"));
                }
                let t = y.triangle_id(toks[1]).ok_or(Error::Dangling { line, kind: "triangle", name: toks[1].into() })?;
                circles[t] += toks[2].parse::<u32>().map_err(|_| syntax("count must be a non-negative integer"))?;
            }
            "orient" => {
                if toks.len() != 3 {
                    return Err(syntax("expected `orient <chord ordinal | point:<id>> <±1>`"));
                }
                let s: i8 = match toks[2] {
                    "+1" | "1" | "+" => 1,
                    "-1" | "-" => -1,
                    _ => return Err(syntax("orientation must be +1 or -1")),
                };
                orients.push((line, toks[1].to_string(), s));
            }
            "ends" => {
                if toks.len() != 3 {
                    return Err(syntax("expected `ends <P point> <N point>`"));
                }
                ends_line = Some((line, toks[1].to_string(), toks[2].to_string()));
            }
            "singular" => relaxed = true,
            other => return Err(syntax(&format!("unknown keyword `{other}`"))),
        }
    }
    // coordinates: explicit ones, or evenly spaced by index
    let mut per_edge: Vec<Vec<usize>> = vec![Vec::new(); y.n_edges()];
    for (i, r) in raw.iter().enumerate() {
        per_edge[r.edge].push(i);
    }
    let mut coords = vec![0.0; raw.len()];
    for (e, list) in per_edge.iter_mut().enumerate() {
        list.sort_by_key(|&i| raw[i].index);
        for (k, &i) in list.iter().enumerate() {
            if raw[i].index != k {
                return Err(Error::Syntax {
                    line: raw[i].line,
                    msg: format!("indices on edge `{}` must be 0..{} without gaps", y.edges[e].name, list.len()),
                });
            }
        }
        let explicit = list.iter().all(|&i| raw[i].coord.is_some());
        let n = list.len() as f64;
        for (k, &i) in list.iter().enumerate() {
            coords[i] = if explicit { raw[i].coord.unwrap() } else { default_coord(k, n as usize) };
        }
        if explicit {
            for w in list.windows(2) {
                if coords[w[0]] >= coords[w[1]] {
                    return Err(Error::Syntax {
                        line: raw[w[1]].line,
                        msg: "coordinates must increase with the index".into(),
                    });
                }
            }
        }
    }
    let points: Vec<Point> = raw.iter().enumerate().map(|(i, r)| Point { edge: r.edge, coord: coords[i], dir: 0 }).collect();
    let mut chs = Vec::new();
    for (line, t, a, b) in &chords {
        let pa = *names.get(a).ok_or(Error::Dangling { line: *line, kind: "point", name: a.clone() })?;
        let pb = *names.get(b).ok_or(Error::Dangling { line: *line, kind: "point", name: b.clone() })?;
        chs.push(Chord { tri: *t, ends: [pa, pb], side: 0 });
    }
    let mut pts = points;
    for (line, r, s) in &orients {
        if let Some(name) = r.strip_prefix("point:") {
            let p = *names.get(name).ok_or(Error::Dangling { line: *line, kind: "point", name: name.into() })?;
            pts[p].dir = *s;
        } else {
            let c: usize = r.parse().map_err(|_| Error::Syntax { line: *line, msg: "bad chord reference".into() })?;
            if c >= chs.len() {
                return Err(Error::Syntax { line: *line, msg: format!("no chord {c}") });
            }
            chs[c].side = *s;
        }
    }
    let pattern = Pattern::new(y, pts, chs, circles, relaxed)?;
    if let Err(p) = pattern.point_dirs(y) {
        return Err(Error::Pattern(format!("orientation disagrees at point `{}`", raw[p].name)));
    }
    let ends = match ends_line {
        Some((line, a, b)) => {
            let pa = *names.get(&a).ok_or(Error::Dangling { line, kind: "point", name: a.clone() })?;
            let pb = *names.get(&b).ok_or(Error::Dangling { line, kind: "point", name: b.clone() })?;
            Some((pa, pb))
        }
        None => None,
    };
    Ok(ParsedPattern { pattern, point_names: raw.into_iter().map(|r| r.name).collect(), ends })
}

/// Default coordinate of the `k`-th of `n` points on an edge.
pub fn default_coord(k: usize, n: usize) -> f64 {
    (k as f64 - (n as f64 - 1.0) / 2.0) * 0.5
}

impl Pattern {
    /// Serialise in the text format accepted by [`parse_pattern`].
    pub fn to_text(&self, y: &Complex2) -> String {
        let mut s = String::new();
        if self.relaxed {
            s.push_str("singular\n");
        }
        for (p, pt) in self.points.iter().enumerate() {
            s.push_str(&format!("point p{} {} {} {}\n", p, y.edges[pt.edge].name, self.rank[p], fmt_f64(pt.coord)));
        }
        for ch in &self.chords {
            s.push_str(&format!("chord {} p{} p{}\n", y.triangles[ch.tri].name, ch.ends[0], ch.ends[1]));
        }
        for (t, &n) in self.circles.iter().enumerate() {
            if n > 0 {
                s.push_str(&format!("circle {} {}\n", y.triangles[t].name, n));
            }
        }
        for (c, ch) in self.chords.iter().enumerate() {
            if ch.side != 0 {
                s.push_str(&format!("orient {} {}\n", c, if ch.side > 0 { "+1" } else { "-1" }));
            }
        }
        for (p, pt) in self.points.iter().enumerate() {
            if self.at_point[p].is_empty() && pt.dir != 0 {
                s.push_str(&format!("orient point:p{} {}\n", p, if pt.dir > 0 { "+1" } else { "-1" }));
            }
        }
        s
    }
}

/// Shortest decimal that round-trips.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Reads a pattern file.
pub fn read_pattern(y: &Complex2, path: &std::path::Path) -> Result<ParsedPattern> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_pattern(y, &text)
}

/// Coordinate magnitude used for points hugging a vertex.
pub const NEAR_VERTEX: f64 = 20.0;

/// The pattern dual to the coboundary of a vertex set: one point on each
/// edge joining the two parts, oriented from `E` towards `E*`.
pub fn coboundary_pattern(y: &Complex2, b: &crate::complex::VertexBipartition) -> Pattern {
    let mut points = Vec::new();
    let mut at_edge: Vec<Option<usize>> = vec![None; y.n_edges()];
    for (e, ed) in y.edges.iter().enumerate() {
        let (fe, te) = (b.contains_e(ed.from), b.contains_e(ed.to));
        if fe != te {
            at_edge[e] = Some(points.len());
            points.push(Point { edge: e, coord: 0.0, dir: if fe { 1 } else { -1 } });
        }
    }
    let mut chords = Vec::new();
    for t in 0..y.n_triangles() {
        let ends: Vec<usize> = (0..3).filter_map(|k| at_edge[y.slot(t, k).edge]).collect();
        if ends.len() == 2 {
            chords.push(Chord { tri: t, ends: [ends[0], ends[1]], side: 0 });
        }
    }
    let mut out = Pattern::assemble(y, points, chords, vec![0; y.n_triangles()], false).expect("coboundary pattern");
    for c in 0..out.chords.len() {
        let p = out.chords[c].ends[0];
        out.chords[c].side = out.side_for_dir(y, c, 0, out.points[p].dir);
    }
    out
}

/// One component of the link of `v`, pushed off `v` as a pattern.
pub fn link_pattern(y: &Complex2, link: &crate::complex::Link, component: usize) -> Pattern {
    let nodes = &link.components[component];
    let mut id = HashMap::new();
    let mut points = Vec::new();
    for &n in nodes {
        let node = link.nodes[n];
        id.insert(n, points.len());
        let coord = if node.end == End::From { -NEAR_VERTEX } else { NEAR_VERTEX };
        // transverse direction points away from the vertex
        let dir = if node.end == End::From { 1 } else { -1 };
        points.push(Point { edge: node.edge, coord, dir });
    }
    let mut chords = Vec::new();
    for a in &link.arcs {
        if let (Some(&p), Some(&q)) = (id.get(&a.a), id.get(&a.b)) {
            chords.push(Chord { tri: a.tri, ends: [p, q], side: 0 });
        }
    }
    let mut out = Pattern::assemble(y, points, chords, vec![0; y.n_triangles()], false).expect("link pattern");
    for c in 0..out.chords.len() {
        let p = out.chords[c].ends[0];
        out.chords[c].side = out.side_for_dir(y, c, 0, out.points[p].dir);
    }
    out
}

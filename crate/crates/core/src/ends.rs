//! Complements of patterns, essentiality, elementary patterns and end counts.
//!
//! The complement is built cellwise: vertices, the gaps between consecutive
//! points on each edge, and the regions a chord diagram cuts out of each
//! triangle.  A component is infinite when it reaches the frontier.

use serde::Serialize;

use crate::complex::{Complex2, UnionFind};
use crate::cover::{build_cover, Cover, CoverMode, CoverSpec};
use crate::error::{Error, Result};
use crate::intersect::{self, CurveKind, CurvePath};
use crate::pattern::{link_pattern, Pattern};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Facing {
    /// Every boundary point's orientation points into the component.
    In,
    Out,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplementComponent {
    pub infinite: bool,
    pub vertices: Vec<usize>,
    /// `(point, into)`: the component meets a side of `point`; `into` when the
    /// point's transverse direction points into the component.
    pub boundary: Vec<(usize, bool)>,
    pub facing: Facing,
    /// Set for the disk bounded by a trivial circle: its triangle.
    pub disk: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Complement {
    pub components: Vec<ComplementComponent>,
    /// Component on the `from` side and on the `to` side of every point.
    #[serde(skip)]
    pub sides: Vec<(usize, usize)>,
    #[serde(skip)]
    pub vertex_component: Vec<usize>,
}

impl Complement {
    pub fn n_infinite(&self) -> usize {
        self.components.iter().filter(|c| c.infinite).count()
    }
    pub fn splits(&self) -> bool {
        self.n_infinite() >= 2
    }
}

pub fn complement_components(y: &Complex2, t: &Pattern) -> Result<Complement> {
    if t.first_crossing(y).is_some() {
        return Err(Error::Precondition("complements need an embedded pattern".into()));
    }
    Ok(complement_cells(y, t))
}

/// Complement of a pattern whose chords may cross.  Regions inside a
/// triangle are told apart by which chords separate them from the boundary,
/// which is exact for straight chords; polygons cut off entirely inside a
/// triangle are not reported.
pub fn complement_components_relaxed(y: &Complex2, t: &Pattern) -> Complement {
    complement_cells(y, t)
}

fn complement_cells(y: &Complex2, t: &Pattern) -> Complement {
    let nv = y.n_vertices();
    let mut gap_base = vec![0usize; y.n_edges() + 1];
    for e in 0..y.n_edges() {
        gap_base[e + 1] = gap_base[e] + t.on_edge[e].len() + 1;
    }
    let gap = |e: usize, g: usize| nv + gap_base[e] + g;
    let mut uf = UnionFind::new(nv + gap_base[y.n_edges()]);
    for (e, ed) in y.edges.iter().enumerate() {
        uf.union(gap(e, 0), ed.from);
        uf.union(gap(e, t.on_edge[e].len()), ed.to);
    }
    let mut chords_in: Vec<Vec<usize>> = vec![Vec::new(); y.n_triangles()];
    for (c, ch) in t.chords.iter().enumerate() {
        chords_in[ch.tri].push(c);
    }
    for tri in 0..y.n_triangles() {
        let spans: Vec<(u64, u64)> = chords_in[tri]
            .iter()
            .map(|&c| (t.bpos(y, tri, t.chords[c].ends[0]), t.bpos(y, tri, t.chords[c].ends[1])))
            .collect();
        let mut regions: std::collections::HashMap<Vec<bool>, usize> = Default::default();
        for k in 0..3 {
            let e = y.slot(tri, k).edge;
            for g in 0..=t.on_edge[e].len() {
                let x = t.gap_bpos(y, tri, e, g);
                let sig: Vec<bool> = spans.iter().map(|&(a, b)| a < x && x < b).collect();
                let r = *regions.entry(sig).or_insert_with(|| uf.push());
                uf.union(r, gap(e, g));
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut comp_of_root: std::collections::HashMap<usize, usize> = Default::default();
    let mut comp = |uf: &mut UnionFind, x: usize| -> usize {
        let r = uf.find(x);
        *comp_of_root.entry(r).or_insert_with(|| {
            roots.push(r);
            roots.len() - 1
        })
    };
    // components are numbered by first vertex, then by first point side
    let mut vertex_component = vec![0; nv];
    for (v, slot) in vertex_component.iter_mut().enumerate() {
        *slot = comp(&mut uf, v);
    }
    let mut sides = Vec::with_capacity(t.points.len());
    for p in 0..t.points.len() {
        let e = t.points[p].edge;
        let r = t.rank(p);
        sides.push((comp(&mut uf, gap(e, r)), comp(&mut uf, gap(e, r + 1))));
    }
    let mut frontier_comps = Vec::new();
    for e in 0..y.n_edges() {
        if y.frontier_edge[e] {
            for g in 0..=t.on_edge[e].len() {
                frontier_comps.push(comp(&mut uf, gap(e, g)));
            }
        }
    }
    let n = roots.len();
    let mut infinite = vec![false; n];
    for v in 0..nv {
        if y.frontier_vertex[v] {
            infinite[vertex_component[v]] = true;
        }
    }
    for c in frontier_comps {
        infinite[c] = true;
    }
    let dirs = t.point_dirs(y).unwrap_or_else(|_| vec![0; t.points.len()]);
    let mut components: Vec<ComplementComponent> = (0..n)
        .map(|i| ComplementComponent { infinite: infinite[i], vertices: Vec::new(), boundary: Vec::new(), facing: Facing::Mixed, disk: None })
        .collect();
    for (v, &c) in vertex_component.iter().enumerate() {
        components[c].vertices.push(v);
    }
    for (p, &(lo, hi)) in sides.iter().enumerate() {
        // dir +1 points towards the `to` side
        components[hi].boundary.push((p, dirs[p] > 0));
        components[lo].boundary.push((p, dirs[p] < 0));
    }
    for c in components.iter_mut() {
        c.boundary.sort();
        c.facing = facing(&c.boundary);
    }
    for (tri, &k) in t.circles.iter().enumerate() {
        for _ in 0..k {
            components.push(ComplementComponent { infinite: false, vertices: Vec::new(), boundary: Vec::new(), facing: Facing::Mixed, disk: Some(tri) });
        }
    }
    Complement { components, sides, vertex_component }
}

fn facing(boundary: &[(usize, bool)]) -> Facing {
    if boundary.is_empty() {
        Facing::Mixed
    } else if boundary.iter().all(|b| b.1) {
        Facing::In
    } else if boundary.iter().all(|b| !b.1) {
        Facing::Out
    } else {
        Facing::Mixed
    }
}

pub fn splits(y: &Complex2, t: &Pattern) -> Result<bool> {
    Ok(complement_components(y, t)?.splits())
}

/// Evidence that a pattern is essential: a frontier line it crosses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Essential {
    pub line: String,
    pub number: i64,
}

/// Essential when every basis loop meets the pattern algebraically zero
/// times and some frontier line does not.  Only oriented two-sided patterns
/// off the frontier are judged.
pub fn is_essential(y: &Complex2, t: &Pattern, basis: &[CurvePath]) -> Result<Option<Essential>> {
    if t.touches_frontier(y) {
        return Err(Error::TouchesFrontier);
    }
    if !t.is_two_sided(y) {
        return Err(Error::OneSided);
    }
    let numbers = intersect::basis_numbers(y, basis, t)?;
    let mut witness = None;
    for (c, &n) in basis.iter().zip(&numbers) {
        match c.kind {
            CurveKind::Loop if n != 0 => return Ok(None),
            CurveKind::Line if n != 0 && witness.is_none() => {
                witness = Some(Essential { line: c.label.clone(), number: n });
            }
            _ => {}
        }
    }
    Ok(witness)
}

/// The components of `t` with exactly one side in the complementary piece
/// containing the first frontier vertex, oriented into that piece.
pub fn extract_elementary(y: &Complex2, t: &Pattern) -> Result<Pattern> {
    let comp = complement_components(y, t)?;
    if !comp.splits() {
        return Err(Error::Precondition("pattern does not separate the frontier".into()));
    }
    let v0 = (0..y.n_vertices()).find(|&v| y.frontier_vertex[v]).ok_or(Error::Precondition("no frontier".into()))?;
    let u = comp.vertex_component[v0];
    let parts = t.components();
    let mut points = Vec::new();
    let mut chords = Vec::new();
    for part in parts.iter().filter(|c| c.circle.is_none()) {
        let p = part.points[0];
        let (lo, hi) = comp.sides[p];
        if (lo == u) != (hi == u) {
            points.extend(part.points.iter().copied());
            chords.extend(part.chords.iter().copied());
        }
    }
    if points.is_empty() {
        return Err(Error::Precondition("no component borders the first infinite piece".into()));
    }
    let mut out = t.subpattern(y, &points, &chords, &vec![0; y.n_triangles()]);
    points.sort();
    let parts = out.components();
    out.orient_components(y, &vec![1; parts.len()]);
    let dirs = out.point_dirs(y).map_err(|_| Error::OneSided)?;
    // subpattern point i is points[i] of t
    let signs: Vec<i8> = parts
        .iter()
        .map(|part| {
            let p = part.points[0];
            let (_, hi) = comp.sides[points[p]];
            let into_u = (hi == u) == (dirs[p] > 0);
            if into_u {
                1
            } else {
                -1
            }
        })
        .collect();
    for c in out.chords.iter_mut() {
        c.side = 0;
    }
    out.orient_components(y, &signs);
    Ok(out)
}

/// End count of a truncated cover seen between radii `k` and `k + 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EndCount {
    pub radius: u32,
    /// Counts at radius `k` and at `k + 1`.
    pub counts: (usize, usize),
    pub stable: bool,
    pub warnings: Vec<String>,
}

/// Components of the collar between the interior of `inner` and the
/// frontier of `outer` that reach both.
pub fn collar_count(inner: &Cover, outer: &Cover) -> usize {
    let y = &outer.complex;
    let interior_vertex = |v: usize| -> bool {
        inner.vertex_at(&outer.vertex_label[v]).map_or(false, |w| !inner.complex.frontier_vertex[w])
    };
    let in_collar: Vec<bool> = (0..y.n_vertices()).map(|v| !interior_vertex(v)).collect();
    let mut uf = UnionFind::new(y.n_vertices());
    for (e, ed) in y.edges.iter().enumerate() {
        let interior_edge = inner.edge_at(&outer.edge_label[e]).map_or(false, |f| !inner.complex.frontier_edge[f]);
        if !interior_edge && in_collar[ed.from] && in_collar[ed.to] {
            uf.union(ed.from, ed.to);
        }
    }
    let mut touches_outer = std::collections::HashSet::new();
    let mut touches_inner = std::collections::HashSet::new();
    for v in 0..y.n_vertices() {
        if !in_collar[v] {
            continue;
        }
        let r = uf.find(v);
        if y.frontier_vertex[v] {
            touches_outer.insert(r);
        }
        if inner.vertex_at(&outer.vertex_label[v]).is_some() {
            touches_inner.insert(r);
        }
    }
    touches_outer.intersection(&touches_inner).count()
}

/// Estimates the number of ends of the cover from truncations at radii
/// `k`, `k + 1` and `k + 2`.
pub fn end_count_estimate(base: &Complex2, spec: &CoverSpec, k: u32) -> Result<EndCount> {
    let covers: Vec<Cover> = (k..k + 3).map(|r| build_cover(base, spec, CoverMode::Truncated(r))).collect::<Result<_>>()?;
    let warnings: Vec<String> = covers.iter().filter_map(|c| c.warning.clone()).collect();
    let a = collar_count(&covers[0], &covers[1]);
    let b = collar_count(&covers[1], &covers[2]);
    Ok(EndCount { radius: k, counts: (a, b), stable: a == b, warnings })
}

/// For each link component of `v`: does pushing it off `v` separate the frontier?
pub fn splitting_link_components(y: &Complex2, v: usize) -> Result<Vec<bool>> {
    let link = y.link(v)?;
    (0..link.components.len())
        .map(|i| {
            let t = link_pattern(y, &link, i);
            splits(y, &t)
        })
        .collect()
}

pub fn is_splitting_vertex(y: &Complex2, v: usize) -> Result<bool> {
    Ok(splitting_link_components(y, v)?.into_iter().any(|b| b))
}

/// Lines of the basis, for callers that only need frontier-to-frontier curves.
pub fn lines(basis: &[CurvePath]) -> Vec<&CurvePath> {
    basis.iter().filter(|c| c.kind == CurveKind::Line).collect()
}

//! Covers of a complex: finite cyclic and truncated covers from cocycles, and
//! truncated covers of subgroups from partial coset enumeration.
//!
//! Every cover cell carries a label `(base cell, sheet)`.  In cocycle mode the
//! sheet is the vector of levels; in subgroup mode it is `[coset]`.
//! A cell is frontier when its star in the full cover is not entirely present.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::complex::{Complex2, ComplexParts, Edge, Slot, SpanningTree, Triangle};
use crate::coset::{self, CosetTable};
use crate::error::{Error, Result};
use crate::pattern::{Chord, Pattern, Point};

#[derive(Clone, Debug, PartialEq)]
pub enum CoverSpec {
    /// One or more cocycles, each vanishing on the spanning tree.
    Cocycle(Vec<Vec<i64>>),
    /// Subgroup generated by edge words (`(edge, ±1)` steps).
    Subgroup { words: Vec<Vec<(usize, i8)>>, coset_bound: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoverMode {
    Finite(u32),
    Truncated(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Label {
    pub base: usize,
    pub sheet: Vec<i64>,
}

/// Deck transformation of a finite cyclic cover, as permutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deck {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub triangles: Vec<usize>,
}

#[derive(Clone, Debug)]
pub enum CoverKind {
    Cocycle { phi: Vec<Vec<i64>>, modulus: Option<i64> },
    Subgroup {
        table: CosetTable,
        /// Generator index of each base edge; `None` for spanning-tree edges.
        generator: Vec<Option<usize>>,
        subgroup: Vec<Vec<i32>>,
        tree: SpanningTree,
    },
}

#[derive(Clone, Debug)]
pub struct Cover {
    pub complex: Complex2,
    pub vertex_label: Vec<Label>,
    pub edge_label: Vec<Label>,
    pub tri_label: Vec<Label>,
    pub mode: CoverMode,
    pub kind: CoverKind,
    pub deck: Option<Deck>,
    pub warning: Option<String>,
    vertex_at: HashMap<Label, usize>,
    edge_at: HashMap<Label, usize>,
    tri_at: HashMap<Label, usize>,
}

/// How sheets change along base edges.
trait SheetAction {
    /// Sheet at `to` when leaving `from` on `sheet` along edge `e`.
    fn step(&self, sheet: &[i64], e: usize) -> Option<Vec<i64>>;
    fn step_back(&self, sheet: &[i64], e: usize) -> Option<Vec<i64>>;
}

struct CocycleAction<'a> {
    phi: &'a [Vec<i64>],
    modulus: Option<i64>,
}

impl CocycleAction<'_> {
    fn shift(&self, sheet: &[i64], e: usize, sign: i64) -> Vec<i64> {
        sheet
            .iter()
            .zip(self.phi)
            .map(|(&l, row)| match self.modulus {
                Some(n) => (l + sign * row[e]).rem_euclid(n),
                None => l + sign * row[e],
            })
            .collect()
    }
}

impl SheetAction for CocycleAction<'_> {
    fn step(&self, sheet: &[i64], e: usize) -> Option<Vec<i64>> {
        Some(self.shift(sheet, e, 1))
    }
    fn step_back(&self, sheet: &[i64], e: usize) -> Option<Vec<i64>> {
        Some(self.shift(sheet, e, -1))
    }
}

struct CosetAction<'a> {
    table: &'a CosetTable,
    generator: &'a [Option<usize>],
}

impl CosetAction<'_> {
    fn go(&self, sheet: &[i64], e: usize, sign: i32) -> Option<Vec<i64>> {
        match self.generator[e] {
            None => Some(sheet.to_vec()),
            Some(g) => self.table.act(sheet[0] as usize, sign * (g as i32 + 1)).map(|c| vec![c as i64]),
        }
    }
}

impl SheetAction for CosetAction<'_> {
    fn step(&self, sheet: &[i64], e: usize) -> Option<Vec<i64>> {
        self.go(sheet, e, 1)
    }
    fn step_back(&self, sheet: &[i64], e: usize) -> Option<Vec<i64>> {
        self.go(sheet, e, -1)
    }
}

/// Raw cells of a cover, before truncation and frontier marking.
#[derive(Default)]
struct Cells {
    vertices: Vec<Label>,
    /// Edge label with the labels of its endpoints.
    edges: Vec<(Label, Label, Label)>,
    /// Triangle label with the edge labels of its slots.
    triangles: Vec<(Label, [Label; 3])>,
}

fn triangle_lift(tr: &Triangle, s: &[i64], act: &dyn SheetAction) -> Option<[Label; 3]> {
    let mut c = s.to_vec();
    let mut out: Vec<Label> = Vec::with_capacity(3);
    for sl in &tr.slots {
        let next = if sl.sign > 0 { act.step(&c, sl.edge)? } else { act.step_back(&c, sl.edge)? };
        let owner = if sl.sign > 0 { c.clone() } else { next.clone() };
        out.push(Label { base: sl.edge, sheet: owner });
        c = next;
    }
    if c != s {
        return None;
    }
    Some([out[0].clone(), out[1].clone(), out[2].clone()])
}

fn lift_cells(base: &Complex2, sheets: &[Vec<i64>], act: &dyn SheetAction) -> Cells {
    let mut cells = Cells::default();
    let mut have_vertex = HashSet::new();
    for s in sheets {
        for v in 0..base.n_vertices() {
            let l = Label { base: v, sheet: s.clone() };
            have_vertex.insert(l.clone());
            cells.vertices.push(l);
        }
    }
    let mut have_edge = HashSet::new();
    for s in sheets {
        for (e, ed) in base.edges.iter().enumerate() {
            if let Some(t) = act.step(s, e) {
                let to = Label { base: ed.to, sheet: t };
                if have_vertex.contains(&to) {
                    let l = Label { base: e, sheet: s.clone() };
                    have_edge.insert(l.clone());
                    cells.edges.push((l, Label { base: ed.from, sheet: s.clone() }, to));
                }
            }
        }
    }
    for s in sheets {
        for (t, tr) in base.triangles.iter().enumerate() {
            if let Some(lifts) = triangle_lift(tr, s, act) {
                if lifts.iter().all(|l| have_edge.contains(l)) {
                    cells.triangles.push((Label { base: t, sheet: s.clone() }, lifts));
                }
            }
        }
    }
    cells
}

/// Keeps the closure of the chambers (triangles and free edges) within
/// `radius` steps of the first chamber at `root`.  Triangles are adjacent
/// across shared edges; a free edge is adjacent to every chamber at its endpoints.
fn chamber_ball(base: &Complex2, cells: &Cells, root: &Label, radius: u32) -> Cells {
    let mut edge_tris: HashMap<&Label, Vec<usize>> = HashMap::new();
    for (i, (_, es)) in cells.triangles.iter().enumerate() {
        for l in es {
            edge_tris.entry(l).or_default().push(i);
        }
    }
    let nt = cells.triangles.len();
    let edge_ends: HashMap<&Label, (&Label, &Label)> = cells.edges.iter().map(|(l, a, b)| (l, (a, b))).collect();
    // chambers: triangles 0..nt, then free edges
    let free: Vec<usize> = (0..cells.edges.len()).filter(|&i| base.is_free(cells.edges[i].0.base)).collect();
    let mut at_vertex: HashMap<&Label, Vec<usize>> = HashMap::new();
    for (i, (_, es)) in cells.triangles.iter().enumerate() {
        for l in es {
            let (a, b) = edge_ends[l];
            for v in [a, b] {
                let list = at_vertex.entry(v).or_default();
                if !list.contains(&i) {
                    list.push(i);
                }
            }
        }
    }
    for (k, &i) in free.iter().enumerate() {
        for v in [&cells.edges[i].1, &cells.edges[i].2] {
            let list = at_vertex.entry(v).or_default();
            if !list.contains(&(nt + k)) {
                list.push(nt + k);
            }
        }
    }
    let n = nt + free.len();
    let chamber_vertices = |c: usize| -> Vec<&Label> {
        if c < nt {
            cells.triangles[c]
                .1
                .iter()
                .flat_map(|l| {
                    let (a, b) = edge_ends[l];
                    [a, b]
                })
                .collect()
        } else {
            let (_, a, b) = &cells.edges[free[c - nt]];
            vec![a, b]
        }
    };
    let mut start = None;
    for c in 0..n {
        if chamber_vertices(c).contains(&root) {
            start = Some(c);
            break;
        }
    }
    let mut dist = vec![u32::MAX; n];
    if let Some(s) = start {
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(c) = q.pop_front() {
            if dist[c] == radius {
                continue;
            }
            let mut nbrs: Vec<usize> = Vec::new();
            if c < nt {
                for l in &cells.triangles[c].1 {
                    nbrs.extend(edge_tris[l].iter().copied());
                }
            }
            for v in chamber_vertices(c) {
                for &d in &at_vertex[v] {
                    if d >= nt || c >= nt {
                        nbrs.push(d);
                    }
                }
            }
            nbrs.sort();
            nbrs.dedup();
            for d in nbrs {
                if dist[d] == u32::MAX {
                    dist[d] = dist[c] + 1;
                    q.push_back(d);
                }
            }
        }
    }
    let mut keep_v: HashSet<Label> = HashSet::new();
    let mut keep_e: HashSet<Label> = HashSet::new();
    let mut out = Cells::default();
    for c in 0..n {
        if dist[c] == u32::MAX {
            continue;
        }
        if c < nt {
            out.triangles.push(cells.triangles[c].clone());
            for l in &cells.triangles[c].1 {
                keep_e.insert(l.clone());
            }
        } else {
            keep_e.insert(cells.edges[free[c - nt]].0.clone());
        }
    }
    for (l, a, b) in &cells.edges {
        if keep_e.contains(l) {
            keep_v.insert(a.clone());
            keep_v.insert(b.clone());
            out.edges.push((l.clone(), a.clone(), b.clone()));
        }
    }
    if keep_v.is_empty() {
        keep_v.insert(root.clone());
    }
    out.vertices = cells.vertices.iter().filter(|l| keep_v.contains(*l)).cloned().collect();
    out
}

fn sheet_name(sheet: &[i64], subgroup: bool) -> String {
    if subgroup {
        format!("c{}", sheet[0])
    } else {
        sheet.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn box_sheets(rank: usize, k: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        let mut next = Vec::new();
        for s in &out {
            for l in -k..=k {
                let mut t = s.clone();
                t.push(l);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Builds the cover complex from cells, marking frontier cells by star completeness.
fn assemble(base: &Complex2, cells: &Cells, subgroup: bool, base_sheet: &[i64]) -> Result<Complex2> {
    let mut p = ComplexParts::default();
    let mut vid: HashMap<&Label, usize> = HashMap::new();
    for l in &cells.vertices {
        vid.insert(l, p.vertices.len());
        p.vertices.push(format!("{}@{}", base.vertices[l.base], sheet_name(&l.sheet, subgroup)));
    }
    let mut eid: HashMap<&Label, usize> = HashMap::new();
    for (l, a, b) in &cells.edges {
        eid.insert(l, p.edges.len());
        p.edges.push(Edge {
            name: format!("{}@{}", base.edges[l.base].name, sheet_name(&l.sheet, subgroup)),
            from: vid[a],
            to: vid[b],
        });
    }
    for (l, es) in &cells.triangles {
        let tr = &base.triangles[l.base];
        let slots = [0, 1, 2].map(|k| Slot { edge: eid[&es[k]], sign: tr.slots[k].sign });
        p.triangles.push(Triangle { name: format!("{}@{}", tr.name, sheet_name(&l.sheet, subgroup)), slots });
    }
    // star completeness
    let nv = p.vertices.len();
    let ne = p.edges.len();
    let mut ends = vec![0usize; nv];
    let mut corners = vec![0usize; nv];
    let mut valence = vec![0usize; ne];
    for e in &p.edges {
        ends[e.from] += 1;
        ends[e.to] += 1;
    }
    for t in &p.triangles {
        for s in &t.slots {
            valence[s.edge] += 1;
            let e = &p.edges[s.edge];
            corners[if s.sign > 0 { e.from } else { e.to }] += 1;
        }
    }
    let mut base_ends = vec![0usize; base.n_vertices()];
    let mut base_corners = vec![0usize; base.n_vertices()];
    for e in &base.edges {
        base_ends[e.from] += 1;
        base_ends[e.to] += 1;
    }
    for t in 0..base.n_triangles() {
        for k in 0..3 {
            base_corners[base.corner_vertex(t, k)] += 1;
        }
    }
    let mut fv = vec![false; nv];
    let mut fe = vec![false; ne];
    for (i, l) in cells.vertices.iter().enumerate() {
        fv[i] = ends[i] != base_ends[l.base] || corners[i] != base_corners[l.base] || base.frontier_vertex[l.base];
    }
    for (i, (l, _, _)) in cells.edges.iter().enumerate() {
        fe[i] = valence[i] != base.valence(l.base) || base.frontier_edge[l.base];
        if fe[i] {
            fv[p.edges[i].from] = true;
            fv[p.edges[i].to] = true;
        }
    }
    p.frontier_vertices = (0..nv).filter(|&v| fv[v]).collect();
    p.frontier_edges = (0..ne).filter(|&e| fe[e]).collect();
    p.base = vid.get(&Label { base: base.base, sheet: base_sheet.to_vec() }).copied().unwrap_or(0);
    p.cocycles = base.cocycles.iter().map(|phi| cells.edges.iter().map(|(l, _, _)| phi[l.base]).collect()).collect();
    Complex2::from_parts(p)
}

fn index_map(labels: &[Label]) -> HashMap<Label, usize> {
    labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect()
}

/// Generator index of every non-tree edge, in edge-id order.
pub fn edge_generators(base: &Complex2, tree: &SpanningTree) -> Vec<Option<usize>> {
    let mut next = 0;
    (0..base.n_edges())
        .map(|e| {
            if tree.in_tree[e] {
                None
            } else {
                next += 1;
                Some(next - 1)
            }
        })
        .collect()
}

/// Converts an edge word to generator letters, dropping tree edges.
pub fn edge_word_letters(generator: &[Option<usize>], word: &[(usize, i8)]) -> Vec<i32> {
    word.iter().filter_map(|&(e, s)| generator[e].map(|g| s as i32 * (g as i32 + 1))).collect()
}

/// Parses `a b^-1 -c` style edge words.
pub fn parse_edge_word(y: &Complex2, text: &str) -> Result<Vec<(usize, i8)>> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        let (name, sign) = if let Some(n) = tok.strip_suffix("^-1") {
            (n, -1)
        } else if let Some(n) = tok.strip_prefix('-') {
            (n, -1)
        } else {
            (tok.strip_prefix('+').unwrap_or(tok), 1)
        };
        let e = y.edge_id(name).ok_or_else(|| Error::Cover(format!("unknown edge `{name}` in word")))?;
        out.push((e, sign));
    }
    Ok(out)
}

pub fn build_cover(base: &Complex2, spec: &CoverSpec, mode: CoverMode) -> Result<Cover> {
    match spec {
        CoverSpec::Cocycle(phi) => build_cocycle_cover(base, phi, mode),
        CoverSpec::Subgroup { words, coset_bound } => build_subgroup_cover(base, words, *coset_bound, mode),
    }
}

fn build_cocycle_cover(base: &Complex2, phi: &[Vec<i64>], mode: CoverMode) -> Result<Cover> {
    if phi.is_empty() {
        return Err(Error::Cocycle("at least one cocycle is needed".into()));
    }
    for row in phi {
        if row.len() != base.n_edges() {
            return Err(Error::Cocycle("one value per edge expected".into()));
        }
        if let Some(t) = base.cocycle_defect(row) {
            return Err(Error::Cocycle(format!("not closed on triangle `{}`", base.triangles[t].name)));
        }
        base.check_cocycle_on_tree(row)?;
    }
    let rank = phi.len();
    let (sheets, modulus) = match mode {
        CoverMode::Finite(n) => {
            if rank != 1 {
                return Err(Error::Cover("finite covers take a single cocycle".into()));
            }
            if n == 0 {
                return Err(Error::Cover("a finite cover needs at least one sheet".into()));
            }
            ((0..n as i64).map(|l| vec![l]).collect::<Vec<_>>(), Some(n as i64))
        }
        CoverMode::Truncated(k) => (box_sheets(rank, k as i64), None),
    };
    let act = CocycleAction { phi, modulus };
    let cells = lift_cells(base, &sheets, &act);
    let complex = assemble(base, &cells, false, &vec![0; rank])?;
    let mut cover = finish(complex, cells, mode, CoverKind::Cocycle { phi: phi.to_vec(), modulus }, None);
    if let Some(n) = modulus {
        let shift = |l: &Label| Label { base: l.base, sheet: vec![(l.sheet[0] + 1).rem_euclid(n)] };
        cover.deck = Some(Deck {
            vertices: cover.vertex_label.iter().map(|l| cover.vertex_at[&shift(l)]).collect(),
            edges: cover.edge_label.iter().map(|l| cover.edge_at[&shift(l)]).collect(),
            triangles: cover.tri_label.iter().map(|l| cover.tri_at[&shift(l)]).collect(),
        });
    }
    Ok(cover)
}

fn build_subgroup_cover(base: &Complex2, words: &[Vec<(usize, i8)>], bound: usize, mode: CoverMode) -> Result<Cover> {
    let CoverMode::Truncated(radius) = mode else {
        return Err(Error::Cover("subgroup covers are built as truncations".into()));
    };
    if !base.is_connected() {
        return Err(Error::Cover("the base complex must be connected".into()));
    }
    let tree = base.spanning_tree();
    let generator = edge_generators(base, &tree);
    let n_gens = generator.iter().flatten().count();
    let mut subgroup = Vec::new();
    for w in words {
        if w.is_empty() {
            return Err(Error::Cover("subgroup words must be non-empty".into()));
        }
        for pair in w.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == -pair[1].1 {
                return Err(Error::Cover("subgroup words must be freely reduced".into()));
            }
        }
        let letters = coset::free_reduce(&edge_word_letters(&generator, w));
        if !letters.is_empty() {
            subgroup.push(letters);
        }
    }
    let relators: Vec<Vec<i32>> = base
        .triangles
        .iter()
        .map(|t| {
            let w: Vec<(usize, i8)> = t.slots.iter().map(|s| (s.edge, s.sign)).collect();
            coset::free_reduce(&edge_word_letters(&generator, &w))
        })
        .filter(|w| !w.is_empty())
        .collect();
    let table = coset::enumerate(n_gens, &relators, &subgroup, bound);
    let sheets: Vec<Vec<i64>> = (0..table.len()).map(|c| vec![c as i64]).collect();
    let act = CosetAction { table: &table, generator: &generator };
    let full = lift_cells(base, &sheets, &act);
    let root = Label { base: base.base, sheet: vec![0] };
    let cells = chamber_ball(base, &full, &root, radius);
    let complex = assemble(base, &cells, true, &[0])?;
    let interior = (0..complex.n_vertices()).any(|v| !complex.frontier_vertex[v]);
    let warning = if interior {
        None
    } else {
        Some(format!("coset bound {bound} exhausted before any complete interior cell"))
    };
    Ok(finish(complex, cells, mode, CoverKind::Subgroup { table, generator, subgroup, tree }, warning))
}

fn finish(complex: Complex2, cells: Cells, mode: CoverMode, kind: CoverKind, warning: Option<String>) -> Cover {
    let vertex_label = cells.vertices;
    let edge_label: Vec<Label> = cells.edges.into_iter().map(|x| x.0).collect();
    let tri_label: Vec<Label> = cells.triangles.into_iter().map(|x| x.0).collect();
    Cover {
        complex,
        vertex_at: index_map(&vertex_label),
        edge_at: index_map(&edge_label),
        tri_at: index_map(&tri_label),
        vertex_label,
        edge_label,
        tri_label,
        mode,
        kind,
        deck: None,
        warning,
    }
}

impl Cover {
    pub fn vertex_at(&self, l: &Label) -> Option<usize> {
        self.vertex_at.get(l).copied()
    }
    pub fn edge_at(&self, l: &Label) -> Option<usize> {
        self.edge_at.get(l).copied()
    }
    pub fn tri_at(&self, l: &Label) -> Option<usize> {
        self.tri_at.get(l).copied()
    }

    pub fn is_subgroup_mode(&self) -> bool {
        matches!(self.kind, CoverKind::Subgroup { .. })
    }

    /// Base cocycle composed with the projection.
    pub fn pull_back(&self, phi: &[i64]) -> Vec<i64> {
        self.edge_label.iter().map(|l| phi[l.base]).collect()
    }

    /// Full preimage of a base pattern (restricted to the truncation).
    pub fn lift_pattern(&self, base: &Complex2, t: &Pattern) -> Pattern {
        let y = &self.complex;
        let mut points = Vec::new();
        let mut id: HashMap<(usize, usize), usize> = HashMap::new();
        for (ce, l) in self.edge_label.iter().enumerate() {
            for &p in &t.on_edge[l.base] {
                id.insert((p, ce), points.len());
                points.push(Point { edge: ce, coord: t.points[p].coord, dir: t.points[p].dir });
            }
        }
        let mut chords = Vec::new();
        let mut circles = vec![0u32; y.n_triangles()];
        let mut by_tri: Vec<Vec<usize>> = vec![Vec::new(); base.n_triangles()];
        for (c, ch) in t.chords.iter().enumerate() {
            by_tri[ch.tri].push(c);
        }
        for (ct, l) in self.tri_label.iter().enumerate() {
            circles[ct] = t.circles[l.base];
            for &c in &by_tri[l.base] {
                let ch = t.chords[c];
                let lift_end = |p: usize| {
                    let k = base.slot_of(l.base, t.points[p].edge).unwrap();
                    id[&(p, y.slot(ct, k).edge)]
                };
                chords.push(Chord { tri: ct, ends: [lift_end(ch.ends[0]), lift_end(ch.ends[1])], side: ch.side });
            }
        }
        Pattern::assemble(y, points, chords, circles, t.relaxed).expect("lift of a valid pattern")
    }

    /// Image of a cover pattern in the base; coincident images make it singular.
    pub fn project_pattern(&self, base: &Complex2, t: &Pattern) -> Pattern {
        let points: Vec<Point> = t
            .points
            .iter()
            .map(|p| Point { edge: self.edge_label[p.edge].base, coord: p.coord, dir: p.dir })
            .collect();
        let chords: Vec<Chord> =
            t.chords.iter().map(|c| Chord { tri: self.tri_label[c.tri].base, ends: c.ends, side: c.side }).collect();
        let mut circles = vec![0u32; base.n_triangles()];
        for (ct, &n) in t.circles.iter().enumerate() {
            circles[self.tri_label[ct].base] += n;
        }
        let mut out = Pattern::assemble(base, points, chords, circles, true).expect("projection of a valid pattern");
        out.relaxed = true;
        out
    }

    /// Translate by a sheet offset (cocycle mode).  `None` when part of the
    /// pattern leaves the truncation.
    pub fn translate(&self, t: &Pattern, delta: &[i64]) -> Option<Pattern> {
        let CoverKind::Cocycle { modulus, .. } = &self.kind else { return None };
        let f = |l: &Label| Label {
            base: l.base,
            sheet: l
                .sheet
                .iter()
                .zip(delta)
                .map(|(&a, &d)| match modulus {
                    Some(n) => (a + d).rem_euclid(*n),
                    None => a + d,
                })
                .collect(),
        };
        self.relabel(t, &f)
    }

    /// Left translate by a group element given as generator letters (subgroup
    /// mode with trivial subgroup, where cosets are group elements).
    pub fn translate_word(&self, t: &Pattern, g: &[i32]) -> Option<Pattern> {
        let CoverKind::Subgroup { table, subgroup, .. } = &self.kind else { return None };
        if !subgroup.is_empty() {
            return None;
        }
        let mut cache: HashMap<i64, Option<i64>> = HashMap::new();
        let mut image = |c: i64| -> Option<i64> {
            *cache.entry(c).or_insert_with(|| {
                let mut w = g.to_vec();
                w.extend_from_slice(&table.rep_words[c as usize]);
                table.trace(0, &w).map(|x| x as i64)
            })
        };
        let mut map: HashMap<Label, Label> = HashMap::new();
        for l in self.edge_label.iter().chain(&self.tri_label) {
            if let Some(c) = image(l.sheet[0]) {
                map.insert(l.clone(), Label { base: l.base, sheet: vec![c] });
            }
        }
        self.relabel(t, &|l: &Label| map.get(l).cloned().unwrap_or(Label { base: usize::MAX, sheet: vec![] }))
    }

    fn relabel(&self, t: &Pattern, f: &dyn Fn(&Label) -> Label) -> Option<Pattern> {
        let y = &self.complex;
        let mut points = t.points.clone();
        for p in points.iter_mut() {
            p.edge = self.edge_at(&f(&self.edge_label[p.edge]))?;
        }
        let mut chords = t.chords.clone();
        for c in chords.iter_mut() {
            c.tri = self.tri_at(&f(&self.tri_label[c.tri]))?;
        }
        let mut circles = vec![0u32; y.n_triangles()];
        for (ct, &n) in t.circles.iter().enumerate() {
            if n > 0 {
                circles[self.tri_at(&f(&self.tri_label[ct]))?] += n;
            }
        }
        let out = Pattern::assemble(y, points, chords, circles, t.relaxed).ok()?;
        out.validate(y).ok()?;
        Some(out)
    }

    /// Applies the deck transformation `power` times (finite covers).
    pub fn deck_power(&self, power: i64) -> Option<Deck> {
        let d = self.deck.as_ref()?;
        let m = match self.kind {
            CoverKind::Cocycle { modulus: Some(m), .. } => m,
            _ => return None,
        };
        let k = power.rem_euclid(m);
        let mut out = Deck {
            vertices: (0..d.vertices.len()).collect(),
            edges: (0..d.edges.len()).collect(),
            triangles: (0..d.triangles.len()).collect(),
        };
        for _ in 0..k {
            out.vertices = out.vertices.iter().map(|&x| d.vertices[x]).collect();
            out.edges = out.edges.iter().map(|&x| d.edges[x]).collect();
            out.triangles = out.triangles.iter().map(|&x| d.triangles[x]).collect();
        }
        Some(out)
    }

    /// Whether every cell of `self` reappears in `larger` with the same incidences.
    pub fn agrees_inside(&self, larger: &Cover) -> bool {
        let y = &self.complex;
        let z = &larger.complex;
        (0..y.n_vertices()).filter(|&v| !y.frontier_vertex[v]).all(|v| larger.vertex_at(&self.vertex_label[v]).is_some())
            && (0..y.n_edges()).all(|e| match larger.edge_at(&self.edge_label[e]) {
                Some(f) => {
                    let (a, b) = (&y.edges[e], &z.edges[f]);
                    self.vertex_label[a.from] == larger.vertex_label[b.from]
                        && self.vertex_label[a.to] == larger.vertex_label[b.to]
                }
                None => false,
            })
            && (0..y.n_triangles()).all(|t| match larger.tri_at(&self.tri_label[t]) {
                Some(u) => (0..3).all(|k| self.edge_label[y.slot(t, k).edge] == larger.edge_label[z.slot(u, k).edge]),
                None => false,
            })
    }

    /// Exponent `k` with `loop = h^k` for the first subgroup generator `h`,
    /// found by free reduction for `|k| ≤ cap`.  The loop starts at cover
    /// vertex `start` and follows cover edges.
    pub fn power_of_generator(&self, start: usize, moves: &[(usize, i8)], cap: u32) -> Result<Option<i64>> {
        let CoverKind::Subgroup { table, generator, subgroup, .. } = &self.kind else {
            return Err(Error::Cover("generator powers need a subgroup-mode cover".into()));
        };
        let word: Vec<(usize, i8)> = moves.iter().map(|&(e, s)| (self.edge_label[e].base, s)).collect();
        let inner = edge_word_letters(generator, &word);
        let rep = &table.rep_words[self.vertex_label[start].sheet[0] as usize];
        let mut full = rep.clone();
        full.extend(inner);
        full.extend(coset::invert(rep));
        let reduced = coset::free_reduce(&full);
        if reduced.is_empty() {
            return Ok(Some(0));
        }
        let Some(h) = subgroup.first() else { return Ok(None) };
        for k in 1..=cap as i64 {
            for sgn in [1i64, -1] {
                let base_word = if sgn > 0 { h.clone() } else { coset::invert(h) };
                let mut p = Vec::new();
                for _ in 0..k {
                    p.extend(base_word.iter().copied());
                }
                if coset::free_reduce(&p) == reduced {
                    return Ok(Some(sgn * k));
                }
            }
        }
        Ok(None)
    }
}

//! Finite 2-complexes built from vertices, oriented edges and triangles.
//!
//! Triangles are given by three edge slots with traversal signs; the slot
//! boundary must close up.  Loops and multiple edges are allowed, so a torus
//! can be written with one vertex.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub name: String,
    pub from: usize,
    pub to: usize,
}

/// An edge occurrence on a triangle boundary; `sign` is +1 when the slot runs
/// from `from` to `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Slot {
    pub edge: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Triangle {
    pub name: String,
    pub slots: [Slot; 3],
}

/// Which end of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum End {
    From,
    To,
}

/// Everything needed to build a [`Complex2`]; validated by [`Complex2::from_parts`].
#[derive(Clone, Debug, Default)]
pub struct ComplexParts {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    pub triangles: Vec<Triangle>,
    pub frontier_vertices: Vec<usize>,
    pub frontier_edges: Vec<usize>,
    pub base: usize,
    /// `cocycles[r][e]`; every rank has one entry per edge.
    pub cocycles: Vec<Vec<i64>>,
    pub shears: Vec<(usize, f64)>,
}

#[derive(Clone, Debug)]
pub struct Complex2 {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    pub triangles: Vec<Triangle>,
    pub frontier_vertex: Vec<bool>,
    pub frontier_edge: Vec<bool>,
    pub base: usize,
    pub cocycles: Vec<Vec<i64>>,
    pub shear: Vec<Option<f64>>,
    incidence: Vec<Vec<(usize, usize)>>,
    vertex_ids: HashMap<String, usize>,
    edge_ids: HashMap<String, usize>,
    tri_ids: HashMap<String, usize>,
}

/// A node of a vertex link: one end of an edge at the vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinkNode {
    pub edge: usize,
    pub end: End,
}

/// A link arc: the corner `corner` of triangle `tri`, joining two link nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinkArc {
    pub tri: usize,
    pub corner: usize,
    pub a: usize,
    pub b: usize,
}

/// The link of a vertex as a 1-complex.
#[derive(Clone, Debug, Serialize)]
pub struct Link {
    pub vertex: usize,
    pub nodes: Vec<LinkNode>,
    pub arcs: Vec<LinkArc>,
    /// Node indices of each connected component, in order of first node.
    pub components: Vec<Vec<usize>>,
}

/// Breadth-first spanning forest of the 1-skeleton.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    /// Edge and sign used to reach each vertex (sign +1 means we walked from `from` to `to`).
    pub parent: Vec<Option<(usize, i8)>>,
    pub in_tree: Vec<bool>,
    pub reached: Vec<bool>,
    pub order: Vec<usize>,
}

/// A split of the vertex set into two non-empty parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexBipartition {
    pub part_e: Vec<usize>,
    pub part_estar: Vec<usize>,
}

impl Slot {
    pub fn start(&self, y: &Complex2) -> usize {
        let e = &y.edges[self.edge];
        if self.sign > 0 {
            e.from
        } else {
            e.to
        }
    }
    pub fn end(&self, y: &Complex2) -> usize {
        let e = &y.edges[self.edge];
        if self.sign > 0 {
            e.to
        } else {
            e.from
        }
    }
    /// Edge end at which the slot starts.
    pub fn start_end(&self) -> End {
        if self.sign > 0 {
            End::From
        } else {
            End::To
        }
    }
    pub fn finish_end(&self) -> End {
        if self.sign > 0 {
            End::To
        } else {
            End::From
        }
    }
}

impl End {
    pub fn flip(self) -> End {
        match self {
            End::From => End::To,
            End::To => End::From,
        }
    }
}

impl VertexBipartition {
    pub fn new(y: &Complex2, part_e: &[usize]) -> Result<Self> {
        let mut in_e = vec![false; y.vertices.len()];
        for &v in part_e {
            if v >= in_e.len() {
                return Err(Error::Precondition(format!("vertex index {v} out of range")));
            }
            in_e[v] = true;
        }
        let part_e: Vec<usize> = (0..in_e.len()).filter(|&v| in_e[v]).collect();
        let part_estar: Vec<usize> = (0..in_e.len()).filter(|&v| !in_e[v]).collect();
        if part_e.is_empty() || part_estar.is_empty() {
            return Err(Error::Precondition("both parts of a bipartition must be non-empty".into()));
        }
        Ok(VertexBipartition { part_e, part_estar })
    }

    pub fn contains_e(&self, v: usize) -> bool {
        self.part_e.binary_search(&v).is_ok()
    }
}

fn check_triangle(edges: &[Edge], slots: &[Slot; 3]) -> std::result::Result<(), String> {
    let ids = [slots[0].edge, slots[1].edge, slots[2].edge];
    if ids[0] == ids[1] || ids[1] == ids[2] || ids[0] == ids[2] {
        return Err("the three slots must use distinct edges".into());
    }
    let endpoint = |s: &Slot, start: bool| {
        let e = &edges[s.edge];
        if (s.sign > 0) == start {
            e.from
        } else {
            e.to
        }
    };
    for k in 0..3 {
        let a = endpoint(&slots[k], false);
        let b = endpoint(&slots[(k + 1) % 3], true);
        if a != b {
            return Err(format!("slot {} ends where slot {} does not start", k, (k + 1) % 3));
        }
    }
    Ok(())
}

impl Complex2 {
    pub fn from_parts(p: ComplexParts) -> Result<Complex2> {
        let nv = p.vertices.len();
        let ne = p.edges.len();
        if nv == 0 {
            return Err(Error::Complex("no vertices".into()));
        }
        if p.base >= nv {
            return Err(Error::Complex("base vertex out of range".into()));
        }
        let mut vertex_ids = HashMap::new();
        for (i, v) in p.vertices.iter().enumerate() {
            if vertex_ids.insert(v.clone(), i).is_some() {
                return Err(Error::Complex(format!("duplicate vertex `{v}`")));
            }
        }
        let mut edge_ids = HashMap::new();
        for (i, e) in p.edges.iter().enumerate() {
            if e.from >= nv || e.to >= nv {
                return Err(Error::Complex(format!("edge `{}` has an endpoint out of range", e.name)));
            }
            if edge_ids.insert(e.name.clone(), i).is_some() {
                return Err(Error::Complex(format!("duplicate edge `{}`", e.name)));
            }
        }
        let mut tri_ids = HashMap::new();
        let mut incidence = vec![Vec::new(); ne];
        for (t, tri) in p.triangles.iter().enumerate() {
            if tri.slots.iter().any(|s| s.edge >= ne || (s.sign != 1 && s.sign != -1)) {
                return Err(Error::NonSimplicial { tri: tri.name.clone(), msg: "bad slot".into() });
            }
            check_triangle(&p.edges, &tri.slots)
                .map_err(|msg| Error::NonSimplicial { tri: tri.name.clone(), msg })?;
            if tri_ids.insert(tri.name.clone(), t).is_some() {
                return Err(Error::Complex(format!("duplicate triangle `{}`", tri.name)));
            }
            for (k, s) in tri.slots.iter().enumerate() {
                incidence[s.edge].push((t, k));
            }
        }
        let mut frontier_vertex = vec![false; nv];
        let mut frontier_edge = vec![false; ne];
        for &v in &p.frontier_vertices {
            if v >= nv {
                return Err(Error::Complex("frontier vertex out of range".into()));
            }
            frontier_vertex[v] = true;
        }
        for &e in &p.frontier_edges {
            if e >= ne {
                return Err(Error::Complex("frontier edge out of range".into()));
            }
            frontier_edge[e] = true;
        }
        for e in 0..ne {
            if frontier_edge[e] && !(frontier_vertex[p.edges[e].from] && frontier_vertex[p.edges[e].to]) {
                return Err(Error::Complex(format!(
                    "frontier edge `{}` has an endpoint that is not frontier",
                    p.edges[e].name
                )));
            }
        }
        for c in &p.cocycles {
            if c.len() != ne {
                return Err(Error::Cocycle("cocycle must give one value per edge".into()));
            }
        }
        let mut shear = vec![None; ne];
        for &(e, s) in &p.shears {
            if e >= ne {
                return Err(Error::Complex("shear edge out of range".into()));
            }
            if incidence[e].len() < 2 {
                return Err(Error::FreeShear(p.edges[e].name.clone()));
            }
            if !s.is_finite() {
                return Err(Error::Complex(format!("shear on `{}` is not finite", p.edges[e].name)));
            }
            shear[e] = Some(s);
        }
        let y = Complex2 {
            vertices: p.vertices,
            edges: p.edges,
            triangles: p.triangles,
            frontier_vertex,
            frontier_edge,
            base: p.base,
            cocycles: p.cocycles,
            shear,
            incidence,
            vertex_ids,
            edge_ids,
            tri_ids,
        };
        for (r, c) in y.cocycles.iter().enumerate() {
            if let Some(t) = y.cocycle_defect(c) {
                return Err(Error::Cocycle(format!(
                    "rank {} does not vanish on the boundary of triangle `{}`",
                    r, y.triangles[t].name
                )));
            }
        }
        Ok(y)
    }

    pub fn to_parts(&self) -> ComplexParts {
        ComplexParts {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            triangles: self.triangles.clone(),
            frontier_vertices: (0..self.n_vertices()).filter(|&v| self.frontier_vertex[v]).collect(),
            frontier_edges: (0..self.n_edges()).filter(|&e| self.frontier_edge[e]).collect(),
            base: self.base,
            cocycles: self.cocycles.clone(),
            shears: (0..self.n_edges()).filter_map(|e| self.shear[e].map(|s| (e, s))).collect(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }
    pub fn n_cells(&self) -> usize {
        self.n_vertices() + self.n_edges() + self.n_triangles()
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_ids.get(name).copied()
    }
    pub fn edge_id(&self, name: &str) -> Option<usize> {
        self.edge_ids.get(name).copied()
    }
    pub fn triangle_id(&self, name: &str) -> Option<usize> {
        self.tri_ids.get(name).copied()
    }

    /// Triangles containing `e`, as `(triangle, slot)`, sorted.
    pub fn incidence(&self, e: usize) -> &[(usize, usize)] {
        &self.incidence[e]
    }
    pub fn valence(&self, e: usize) -> usize {
        self.incidence[e].len()
    }
    pub fn is_free(&self, e: usize) -> bool {
        self.incidence[e].is_empty()
    }
    pub fn has_frontier(&self) -> bool {
        self.frontier_vertex.iter().any(|&f| f)
    }

    pub fn slot(&self, t: usize, k: usize) -> Slot {
        self.triangles[t].slots[k]
    }
    /// Slot index of edge `e` in triangle `t`.
    pub fn slot_of(&self, t: usize, e: usize) -> Option<usize> {
        self.triangles[t].slots.iter().position(|s| s.edge == e)
    }
    /// Vertex at corner `c` of triangle `t` (the start of slot `c`).
    pub fn corner_vertex(&self, t: usize, c: usize) -> usize {
        self.triangles[t].slots[c].start(self)
    }
    pub fn vertex_of_end(&self, e: usize, end: End) -> usize {
        match end {
            End::From => self.edges[e].from,
            End::To => self.edges[e].to,
        }
    }

    /// Sum of `phi` around each triangle; returns a triangle where it is non-zero.
    pub fn cocycle_defect(&self, phi: &[i64]) -> Option<usize> {
        (0..self.n_triangles()).find(|&t| {
            self.triangles[t].slots.iter().map(|s| s.sign as i64 * phi[s.edge]).sum::<i64>() != 0
        })
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, usize, i8)>> {
        // vertex -> (edge, other vertex, sign of traversal)
        let mut adj = vec![Vec::new(); self.n_vertices()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.from].push((i, e.to, 1));
            adj[e.to].push((i, e.from, -1));
        }
        for a in adj.iter_mut() {
            a.sort();
        }
        adj
    }

    /// BFS spanning tree of the base vertex's component, edges taken in id order.
    pub fn spanning_tree(&self) -> SpanningTree {
        self.spanning_tree_from(self.base)
    }

    pub fn spanning_tree_from(&self, root: usize) -> SpanningTree {
        let adj = self.adjacency();
        let nv = self.n_vertices();
        let mut parent = vec![None; nv];
        let mut reached = vec![false; nv];
        let mut in_tree = vec![false; self.n_edges()];
        let mut order = vec![root];
        reached[root] = true;
        let mut q = VecDeque::from([root]);
        while let Some(u) = q.pop_front() {
            for &(e, w, s) in &adj[u] {
                if !reached[w] {
                    reached[w] = true;
                    parent[w] = Some((e, s));
                    in_tree[e] = true;
                    order.push(w);
                    q.push_back(w);
                }
            }
        }
        SpanningTree { parent, in_tree, reached, order }
    }

    pub fn is_connected(&self) -> bool {
        self.spanning_tree().reached.iter().all(|&r| r)
    }

    /// Edge path from the root of `tree` to `v`, as `(edge, sign)` steps.
    pub fn tree_path(&self, tree: &SpanningTree, v: usize) -> Vec<(usize, i8)> {
        let mut path = Vec::new();
        let mut u = v;
        while let Some((e, s)) = tree.parent[u] {
            path.push((e, s));
            u = if s > 0 { self.edges[e].from } else { self.edges[e].to };
        }
        path.reverse();
        path
    }

    /// Cohomologous cocycle vanishing on the spanning tree.
    pub fn normalize_cocycle(&self, phi: &[i64]) -> Result<Vec<i64>> {
        if phi.len() != self.n_edges() {
            return Err(Error::Cocycle("one value per edge expected".into()));
        }
        if let Some(t) = self.cocycle_defect(phi) {
            return Err(Error::Cocycle(format!("not closed on triangle `{}`", self.triangles[t].name)));
        }
        let tree = self.spanning_tree();
        let mut pot = vec![0i64; self.n_vertices()];
        for &v in tree.order.iter().skip(1) {
            let (e, s) = tree.parent[v].unwrap();
            let prev = if s > 0 { self.edges[e].from } else { self.edges[e].to };
            pot[v] = pot[prev] + s as i64 * phi[e];
        }
        Ok((0..self.n_edges())
            .map(|e| phi[e] - pot[self.edges[e].to] + pot[self.edges[e].from])
            .collect())
    }

    /// Checks that `phi` vanishes on the spanning tree.
    pub fn check_cocycle_on_tree(&self, phi: &[i64]) -> Result<()> {
        let tree = self.spanning_tree();
        for e in 0..self.n_edges() {
            if tree.in_tree[e] && phi[e] != 0 {
                return Err(Error::Cocycle(format!(
                    "non-zero on spanning-tree edge `{}`",
                    self.edges[e].name
                )));
            }
        }
        Ok(())
    }

    pub fn link(&self, v: usize) -> Result<Link> {
        if v >= self.n_vertices() {
            return Err(Error::Precondition(format!("vertex index {v} out of range")));
        }
        let mut nodes = Vec::new();
        let mut node_of: BTreeMap<(usize, End), usize> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            for end in [End::From, End::To] {
                let w = if end == End::From { e.from } else { e.to };
                if w == v {
                    node_of.insert((i, end), nodes.len());
                    nodes.push(LinkNode { edge: i, end });
                }
            }
        }
        let mut arcs = Vec::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for c in 0..3 {
                if self.corner_vertex(t, c) != v {
                    continue;
                }
                let prev = tri.slots[(c + 2) % 3];
                let next = tri.slots[c];
                let a = node_of[&(prev.edge, prev.finish_end())];
                let b = node_of[&(next.edge, next.start_end())];
                arcs.push(LinkArc { tri: t, corner: c, a, b });
            }
        }
        let mut uf = UnionFind::new(nodes.len());
        for a in &arcs {
            uf.union(a.a, a.b);
        }
        let components = uf.groups();
        Ok(Link { vertex: v, nodes, arcs, components })
    }

    /// Serialise in the text format accepted by [`parse_complex`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            s.push_str(&format!("vertex {v}\n"));
        }
        for e in &self.edges {
            s.push_str(&format!("edge {} {} {}\n", e.name, self.vertices[e.from], self.vertices[e.to]));
        }
        for t in &self.triangles {
            s.push_str(&format!("triangle {}", t.name));
            for sl in &t.slots {
                let sign = if sl.sign > 0 { '+' } else { '-' };
                s.push_str(&format!(" {}{}", sign, self.edges[sl.edge].name));
            }
            s.push('\n');
        }
        for v in 0..self.n_vertices() {
            if self.frontier_vertex[v] {
                s.push_str(&format!("frontier vertex {}\n", self.vertices[v]));
            }
        }
        for e in 0..self.n_edges() {
            if self.frontier_edge[e] {
                s.push_str(&format!("frontier edge {}\n", self.edges[e].name));
            }
        }
        if !self.cocycles.is_empty() {
            for e in 0..self.n_edges() {
                s.push_str(&format!("cocycle {}", self.edges[e].name));
                for c in &self.cocycles {
                    s.push_str(&format!(" {}", c[e]));
                }
                s.push('\n');
            }
        }
        for e in 0..self.n_edges() {
            if let Some(sh) = self.shear[e] {
                s.push_str(&format!("shear {} {}\n", self.edges[e].name, sh));
            }
        }
        s.push_str(&format!("base {}\n", self.vertices[self.base]));
        s
    }

    /// Components of the frontier subcomplex, as sorted vertex lists.
    pub fn frontier_regions(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n_vertices());
        for (i, e) in self.edges.iter().enumerate() {
            if self.frontier_edge[i] {
                uf.union(e.from, e.to);
            }
        }
        uf.groups()
            .into_iter()
            .filter(|g| self.frontier_vertex[g[0]])
            .collect()
    }

    /// Euler characteristic.
    pub fn euler(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_triangles() as i64
    }
}

/// Minimal union-find with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    pub fn len(&self) -> usize {
        self.parent.len()
    }
    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
    pub fn push(&mut self) -> usize {
        let n = self.parent.len();
        self.parent.push(n);
        n
    }
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    /// Joins two classes; the smaller root survives.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
    /// Classes as sorted lists, ordered by smallest member.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut idx: HashMap<usize, usize> = HashMap::new();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            let k = *idx.entry(r).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[k].push(x);
        }
        out
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses the complex text format.
///
/// ```text
/// vertex v
/// edge a v v
/// triangle T1 +a +b -c
/// frontier vertex v
/// cocycle a 1
/// shear c 0.7
/// base v
/// ```
pub fn parse_complex(text: &str) -> Result<Complex2> {
    let mut p = ComplexParts::default();
    let mut vids: HashMap<String, usize> = HashMap::new();
    let mut eids: HashMap<String, usize> = HashMap::new();
    let mut base: Option<usize> = None;
    let mut cocycle_rows: Vec<(usize, usize, Vec<i64>)> = Vec::new();
    let mut shear_rows: Vec<(usize, usize, f64)> = Vec::new();
    let mut tri_lines: Vec<usize> = Vec::new();
    for (ln0, raw) in text.lines().enumerate() {
        let line = ln0 + 1;
        let toks: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let syntax = |msg: &str| Error::Syntax { line, msg: msg.to_string() };
        let vertex = |name: &str, vids: &HashMap<String, usize>| {
            vids.get(name).copied().ok_or(Error::Dangling { line, kind: "vertex", name: name.to_string() })
        };
        let edge = |name: &str, eids: &HashMap<String, usize>| {
            eids.get(name).copied().ok_or(Error::Dangling { line, kind: "edge", name: name.to_string() })
        };
        match toks[0] {
            "vertex" => {
                if toks.len() != 2 {
                    return Err(syntax("expected `vertex <id>`"));
                }
                if vids.contains_key(toks[1]) {
                    return Err(syntax(&format!("duplicate vertex `{}`", toks[1])));
                }
                vids.insert(toks[1].to_string(), p.vertices.len());
                p.vertices.push(toks[1].to_string());
            }
            "edge" => {
                if toks.len() != 4 {
                    return Err(syntax("expected `edge <id> <from> <to>`"));
                }
                if eids.contains_key(toks[1]) {
                    return Err(syntax(&format!("duplicate edge `{}`", toks[1])));
                }
                let from = vertex(toks[2], &vids)?;
                let to = vertex(toks[3], &vids)?;
                eids.insert(toks[1].to_string(), p.edges.len());
                p.edges.push(Edge { name: toks[1].to_string(), from, to });
            }
            "triangle" => {
                if toks.len() != 5 {
                    return Err(syntax("expected `triangle <id> <±e1> <±e2> <±e3>`"));
                }
                let mut slots = [Slot { edge: 0, sign: 1 }; 3];
                for k in 0..3 {
                    let t = toks[2 + k];
                    let (sign, name) = match t.as_bytes()[0] {
                        b'+' => (1, &t[1..]),
                        b'-' => (-1, &t[1..]),
                        _ => return Err(syntax("edge slots need an explicit + or - sign")),
                    };
                    slots[k] = Slot { edge: edge(name, &eids)?, sign };
                }
                check_triangle(&p.edges, &slots)
                    .map_err(|msg| Error::Syntax { line, msg: format!("triangle `{}`: {}", toks[1], msg) })?;
                tri_lines.push(line);
                p.triangles.push(Triangle { name: toks[1].to_string(), slots });
            }
            "frontier" => {
                if toks.len() != 3 {
                    return Err(syntax("expected `frontier vertex|edge <id>`"));
                }
                match toks[1] {
                    "vertex" => p.frontier_vertices.push(vertex(toks[2], &vids)?),
                    "edge" => p.frontier_edges.push(edge(toks[2], &eids)?),
                    _ => return Err(syntax("frontier mark must be `vertex` or `edge`")),
                }
            }
            "cocycle" => {
                if toks.len() < 3 {
                    return Err(syntax("expected `cocycle <edge> <int> [int ...]`"));
                }
                let e = edge(toks[1], &eids)?;
                let vals = toks[2..]
                    .iter()
                    .map(|t| t.parse::<i64>().map_err(|_| syntax("cocycle values must be integers")))
                    .collect::<Result<Vec<_>>>()?;
                cocycle_rows.push((line, e, vals));
            }
            "shear" => {
                if toks.len() != 3 {
                    return Err(syntax("expected `shear <edge> <float>`"));
                }
                let e = edge(toks[1], &eids)?;
                let v: f64 = toks[2].parse().map_err(|_| syntax("shear must be a number"))?;
                shear_rows.push((line, e, v));
            }
            "base" => {
                if toks.len() != 2 {
                    return Err(syntax("expected `base <vertex>`"));
                }
                base = Some(vertex(toks[1], &vids)?);
            }
            other => return Err(syntax(&format!("unknown keyword `{other}`"))),
        }
    }
    if p.vertices.is_empty() {
        return Err(Error::Syntax { line: 0, msg: "no vertices".into() });
    }
    p.base = base.unwrap_or(0);
    if !cocycle_rows.is_empty() {
        let rank = cocycle_rows[0].2.len();
        let mut cs = vec![vec![0i64; p.edges.len()]; rank];
        for (line, e, vals) in &cocycle_rows {
            if vals.len() != rank {
                return Err(Error::Syntax { line: *line, msg: "cocycle rows must all have the same rank".into() });
            }
            for r in 0..rank {
                cs[r][*e] = vals[r];
            }
        }
        p.cocycles = cs;
    }
    let mut valence = vec![0usize; p.edges.len()];
    for t in &p.triangles {
        for s in &t.slots {
            valence[s.edge] += 1;
        }
    }
    for (line, e, v) in shear_rows {
        if valence[e] < 2 {
            return Err(Error::Syntax {
                line,
                msg: format!("shear given for edge `{}`, which lies in fewer than two triangles", p.edges[e].name),
            });
        }
        p.shears.push((e, v));
    }
    for e in &p.frontier_edges {
        let ed = &p.edges[*e];
        for v in [ed.from, ed.to] {
            if !p.frontier_vertices.contains(&v) {
                p.frontier_vertices.push(v);
            }
        }
    }
    Complex2::from_parts(p)
}

pub fn read_complex(path: &std::path::Path) -> Result<Complex2> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_complex(&text)
}

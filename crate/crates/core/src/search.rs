//! Normal patterns from edge counts, enumeration by weight, and the search
//! for shortest essential or one-sided patterns.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::Serialize;

use crate::complex::Complex2;
use crate::ends;
use crate::error::Result;
use crate::hypgeom::{self, Complexity, HypStructure, MinimizeConfig};
use crate::intersect;
use crate::pattern::{default_coord, Chord, Pattern, Point};

/// The normal pattern with the given number of points on each edge, if the
/// counts satisfy the parity and triangle conditions in every triangle.
pub fn normal_from_counts(y: &Complex2, counts: &[usize]) -> Option<Pattern> {
    let mut points = Vec::new();
    let mut ids: Vec<Vec<usize>> = Vec::with_capacity(y.n_edges());
    for (e, &k) in counts.iter().enumerate() {
        let list: Vec<usize> = (points.len()..points.len() + k).collect();
        for i in 0..k {
            points.push(Point { edge: e, coord: default_coord(i, k), dir: 0 });
        }
        ids.push(list);
    }
    let mut chords = Vec::new();
    for t in 0..y.n_triangles() {
        // points of each slot in traversal order
        let side: Vec<Vec<usize>> = (0..3)
            .map(|k| {
                let s = y.slot(t, k);
                let mut l = ids[s.edge].clone();
                if s.sign < 0 {
                    l.reverse();
                }
                l
            })
            .collect();
        let n: Vec<i64> = side.iter().map(|l| l.len() as i64).collect();
        let twice: Vec<i64> = (0..3).map(|c| n[(c + 2) % 3] + n[c] - n[(c + 1) % 3]).collect();
        if twice.iter().any(|&x| x < 0 || x % 2 != 0) {
            return None;
        }
        for c in 0..3 {
            let prev = (c + 2) % 3;
            // corner between the end of slot c-1 and the start of slot c
            let x = (twice[c] / 2) as usize;
            let a = &side[prev];
            for i in 0..x {
                chords.push(Chord { tri: t, ends: [a[a.len() - 1 - i], side[c][i]], side: 0 });
            }
        }
    }
    let t = Pattern::new(y, points, chords, vec![0; y.n_triangles()], false).ok()?;
    Some(t)
}

/// Edge order for enumeration: edges as met by a breadth-first walk over
/// triangles, then edges in no triangle.
fn edge_order(y: &Complex2) -> Vec<usize> {
    let mut seen_e = vec![false; y.n_edges()];
    let mut seen_t = vec![false; y.n_triangles()];
    let mut order = Vec::new();
    for r in 0..y.n_triangles() {
        if seen_t[r] {
            continue;
        }
        seen_t[r] = true;
        let mut q = VecDeque::from([r]);
        while let Some(t) = q.pop_front() {
            for k in 0..3 {
                let e = y.slot(t, k).edge;
                if !seen_e[e] {
                    seen_e[e] = true;
                    order.push(e);
                }
                for &(u, _) in y.incidence(e) {
                    if !seen_t[u] {
                        seen_t[u] = true;
                        q.push_back(u);
                    }
                }
            }
        }
    }
    order.extend((0..y.n_edges()).filter(|&e| !seen_e[e]));
    order
}

/// All normal patterns of weight at most `max_weight`, the empty one first,
/// sorted by weight and then by combinatorial key.
pub fn enumerate_normal(y: &Complex2, max_weight: usize, avoid_frontier: bool) -> Vec<Pattern> {
    let order = edge_order(y);
    let mut pos = vec![0usize; y.n_edges()];
    for (i, &e) in order.iter().enumerate() {
        pos[e] = i;
    }
    // triangles checked once their last edge (in order) is assigned
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); y.n_edges()];
    for t in 0..y.n_triangles() {
        let last = (0..3).map(|k| y.slot(t, k).edge).max_by_key(|&e| pos[e]).unwrap();
        closing[last].push(t);
    }
    let mut counts = vec![0usize; y.n_edges()];
    let mut found = Vec::new();
    dfs(y, &order, &closing, avoid_frontier, 0, max_weight, &mut counts, &mut found);
    let mut out: Vec<(usize, Vec<u64>, Pattern)> = found
        .into_iter()
        .filter_map(|c| normal_from_counts(y, &c))
        .map(|t| (t.weight(), t.combinatorial_key(y), t))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    out.into_iter().map(|x| x.2).collect()
}

fn triangle_ok(y: &Complex2, t: usize, counts: &[usize]) -> bool {
    let n: Vec<usize> = (0..3).map(|k| counts[y.slot(t, k).edge]).collect();
    let s = n[0] + n[1] + n[2];
    s % 2 == 0 && (0..3).all(|k| 2 * n[k] <= s)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    y: &Complex2,
    order: &[usize],
    closing: &[Vec<usize>],
    avoid_frontier: bool,
    i: usize,
    budget: usize,
    counts: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    if i == order.len() {
        found.push(counts.clone());
        return;
    }
    let e = order[i];
    let max = if avoid_frontier && y.frontier_edge[e] { 0 } else { budget };
    for k in 0..=max {
        counts[e] = k;
        if closing[e].iter().all(|&t| triangle_ok(y, t, counts)) {
            dfs(y, order, closing, avoid_frontier, i + 1, budget - k, counts, found);
        }
    }
    counts[e] = 0;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SearchMode {
    /// Two-sided, separating the frontier, elementary and essential.
    Essential,
    /// Connected and one-sided.
    OneSided,
}

#[derive(Clone, Debug, Serialize)]
pub struct Shortest {
    pub pattern: Pattern,
    pub complexity: Complexity,
    pub converged: bool,
    /// Qualifying normal patterns of the minimal weight.
    pub candidates: usize,
    /// Candidates whose length is within the tie tolerance of the winner.
    pub ties: usize,
    pub checks: ResultChecks,
}

/// Properties every shortest essential pattern should have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResultChecks {
    pub normal: bool,
    pub connected: bool,
    pub two_sided: bool,
}

impl ResultChecks {
    pub fn of(y: &Complex2, t: &Pattern) -> ResultChecks {
        ResultChecks { normal: t.is_normal(y), connected: t.components().len() == 1, two_sided: t.is_two_sided(y) }
    }

    pub fn all(&self) -> bool {
        self.normal && self.connected && self.two_sided
    }
}

pub const TIE_TOL: f64 = 1e-9;

/// Whether a normal pattern qualifies; returns the oriented pattern to measure.
pub fn qualifies(y: &Complex2, t: &Pattern, mode: SearchMode, basis: &[intersect::CurvePath]) -> Option<Pattern> {
    match mode {
        SearchMode::OneSided => {
            let comps = t.components();
            (comps.len() == 1 && !t.is_two_sided(y)).then(|| t.clone())
        }
        SearchMode::Essential => {
            if t.touches_frontier(y) || !t.is_two_sided(y) || !ends::splits(y, t).ok()? {
                return None;
            }
            let e = ends::extract_elementary(y, t).ok()?;
            if e.weight() != t.weight() {
                return None;
            }
            ends::is_essential(y, &e, basis).ok()?.map(|_| e)
        }
    }
}

/// The lexicographically least `(weight, length)` pattern of the given kind
/// among normal patterns of weight at most `max_weight`, after minimising
/// length.  Near ties go to the smaller combinatorial key, or the larger one
/// with `reversed_tiebreak`.
pub fn shortest_pattern(
    y: &Complex2,
    h: &HypStructure,
    mode: SearchMode,
    max_weight: usize,
    cfg: &MinimizeConfig,
    reversed_tiebreak: bool,
) -> Result<Option<Shortest>> {
    let basis = intersect::basis(y);
    let all = enumerate_normal(y, max_weight, true);
    let mut i = 0;
    while i < all.len() {
        let w = all[i].weight();
        let mut j = i;
        let mut cands = Vec::new();
        while j < all.len() && all[j].weight() == w {
            if let Some(t) = qualifies(y, &all[j], mode, &basis) {
                cands.push(t);
            }
            j += 1;
        }
        if !cands.is_empty() {
            let mut measured = Vec::with_capacity(cands.len());
            for t in &cands {
                let r = hypgeom::minimize_length(y, h, t, cfg)?;
                measured.push((t.combinatorial_key(y), r));
            }
            let best_len = measured.iter().map(|m| m.1.complexity.length).fold(f64::INFINITY, f64::min);
            let tied: Vec<&(Vec<u64>, hypgeom::MinimizeReport)> =
                measured.iter().filter(|m| m.1.complexity.length <= best_len + TIE_TOL).collect();
            let pick = tied
                .iter()
                .copied()
                .min_by(|a, b| {
                    let o = a.0.cmp(&b.0);
                    if reversed_tiebreak {
                        o.reverse()
                    } else {
                        o
                    }
                })
                .unwrap();
            return Ok(Some(Shortest {
                checks: ResultChecks::of(y, &pick.1.pattern),
                pattern: pick.1.pattern.clone(),
                complexity: pick.1.complexity,
                converged: pick.1.converged,
                candidates: cands.len(),
                ties: tied.len(),
            }));
        }
        i = j;
    }
    Ok(None)
}

/// Orders complexities with the tie tolerance used by the search.
pub fn cmp_complexity(a: &Complexity, b: &Complexity) -> Ordering {
    a.cmp_tol(b, TIE_TOL)
}

//! Random embedded patterns for property tests.
//!
//! Edge counts are built from vertex coboundaries and pairs of extra points,
//! which keeps the number of boundary points of every triangle even; each
//! triangle then gets a uniformly chosen non-crossing matching, so returning
//! arcs and nested arcs appear freely.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::Complex2;
use crate::pattern::{default_coord, Chord, Pattern, Point};

/// Point counts per edge with an even total on every triangle boundary.
pub fn random_counts<R: Rng>(y: &Complex2, rng: &mut R, max_weight: usize, avoid_frontier: bool) -> Vec<usize> {
    let ne = y.n_edges();
    let mut n = vec![0usize; ne];
    let allowed: Vec<usize> = (0..ne).filter(|&e| !(avoid_frontier && y.frontier_edge[e])).collect();
    if allowed.is_empty() || max_weight == 0 {
        return n;
    }
    let target = rng.gen_range(0..=max_weight);
    let mut total = 0usize;
    for _ in 0..4 * max_weight + 8 {
        if total >= target {
            break;
        }
        match rng.gen_range(0..3) {
            0 if y.n_vertices() > 1 => {
                let inside: Vec<bool> = (0..y.n_vertices()).map(|_| rng.gen_bool(0.5)).collect();
                let mixed: Vec<usize> = (0..ne)
                    .filter(|&e| inside[y.edges[e].from] != inside[y.edges[e].to])
                    .collect();
                let ok = !mixed.is_empty()
                    && total + mixed.len() <= max_weight
                    && mixed.iter().all(|e| allowed.binary_search(e).is_ok());
                if ok {
                    for e in mixed {
                        n[e] += 1;
                    }
                    total = n.iter().sum();
                }
            }
            1 => {
                let e = *allowed.choose(rng).unwrap();
                let add = if y.is_free(e) { 1 } else { 2 };
                if total + add <= max_weight {
                    n[e] += add;
                    total += add;
                }
            }
            _ => {
                // a normal arc system around a random vertex link keeps parity too
                let v = rng.gen_range(0..y.n_vertices());
                let mut add = vec![0usize; ne];
                for (e, ed) in y.edges.iter().enumerate() {
                    add[e] = usize::from(ed.from == v) + usize::from(ed.to == v);
                }
                let w: usize = add.iter().sum();
                let ok = w > 0
                    && total + w <= max_weight
                    && (0..ne).all(|e| add[e] == 0 || allowed.binary_search(&e).is_ok());
                if ok {
                    for e in 0..ne {
                        n[e] += add[e];
                    }
                    total += w;
                }
            }
        }
    }
    n
}

/// A uniformly random non-crossing perfect matching of `0..m` (m even).
fn random_matching<R: Rng>(rng: &mut R, items: &[usize], out: &mut Vec<(usize, usize)>) {
    if items.is_empty() {
        return;
    }
    let m = items.len();
    // partner of items[0] sits at an odd offset so both sides are even
    let choices: Vec<usize> = (1..m).step_by(2).collect();
    let j = *choices.choose(rng).unwrap();
    out.push((items[0], items[j]));
    random_matching(rng, &items[1..j], out);
    random_matching(rng, &items[j + 1..], out);
}

/// An embedded pattern with the given edge counts and random chord
/// diagrams, plus up to `max_circles` trivial circles.
pub fn pattern_from_counts<R: Rng>(y: &Complex2, rng: &mut R, counts: &[usize], max_circles: u32) -> Pattern {
    let mut points = Vec::new();
    let mut ids: Vec<Vec<usize>> = Vec::with_capacity(y.n_edges());
    for (e, &k) in counts.iter().enumerate() {
        let mut list = Vec::with_capacity(k);
        for i in 0..k {
            list.push(points.len());
            points.push(Point { edge: e, coord: default_coord(i, k), dir: if rng.gen_bool(0.5) { 1 } else { -1 } });
        }
        ids.push(list);
    }
    let mut chords = Vec::new();
    for t in 0..y.n_triangles() {
        let mut boundary = Vec::new();
        for k in 0..3 {
            let s = y.slot(t, k);
            let list = &ids[s.edge];
            if s.sign > 0 {
                boundary.extend(list.iter().copied());
            } else {
                boundary.extend(list.iter().rev().copied());
            }
        }
        let mut pairs = Vec::new();
        random_matching(rng, &boundary, &mut pairs);
        for (a, b) in pairs {
            chords.push(Chord { tri: t, ends: [a, b], side: 0 });
        }
    }
    let mut circles = vec![0u32; y.n_triangles()];
    if max_circles > 0 && y.n_triangles() > 0 {
        for _ in 0..rng.gen_range(0..=max_circles) {
            circles[rng.gen_range(0..y.n_triangles())] += 1;
        }
    }
    let mut t = Pattern::new(y, points, chords, circles, false).expect("random pattern is embedded");
    let signs: Vec<i8> = (0..t.components().len()).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    t.orient_components(y, &signs);
    t
}

/// A random embedded pattern of weight at most `max_weight`.
pub fn random_pattern<R: Rng>(y: &Complex2, rng: &mut R, max_weight: usize, max_circles: u32) -> Pattern {
    let counts = random_counts(y, rng, max_weight, false);
    pattern_from_counts(y, rng, &counts, max_circles)
}

/// A random normal pattern: the normal arc system determined by random counts
/// that satisfy the triangle inequalities.
pub fn random_normal<R: Rng>(y: &Complex2, rng: &mut R, max_weight: usize, avoid_frontier: bool) -> Pattern {
    for _ in 0..200 {
        let counts = random_counts(y, rng, max_weight, avoid_frontier);
        if let Some(t) = crate::search::normal_from_counts(y, &counts) {
            let mut t = t;
            let signs: Vec<i8> = (0..t.components().len()).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
            t.orient_components(y, &signs);
            return t;
        }
    }
    Pattern::empty(y)
}

/// Replaces every coordinate by a sorted sample from `[-spread, spread]`.
pub fn jitter_coords<R: Rng>(t: &Pattern, rng: &mut R, spread: f64) -> Pattern {
    let mut coords = vec![0.0; t.points.len()];
    for list in &t.on_edge {
        let mut xs: Vec<f64> = (0..list.len()).map(|_| rng.gen_range(-spread..spread)).collect();
        xs.sort_by(f64::total_cmp);
        for (&p, x) in list.iter().zip(xs) {
            coords[p] = x;
        }
    }
    t.with_coords(&coords)
}

/// Coordinates for two patterns drawn jointly, so points of the two never
/// coincide on a shared edge.
pub fn joint_coords<R: Rng>(a: &Pattern, b: &Pattern, rng: &mut R, spread: f64) -> (Pattern, Pattern) {
    let mut ca = vec![0.0; a.points.len()];
    let mut cb = vec![0.0; b.points.len()];
    for e in 0..a.on_edge.len() {
        let (la, lb) = (&a.on_edge[e], &b.on_edge[e]);
        let n = la.len() + lb.len();
        let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-spread..spread)).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        if xs.len() < n {
            return joint_coords(a, b, rng, spread);
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(rng);
        let (ia, ib) = idx.split_at(la.len());
        let mut ia = ia.to_vec();
        let mut ib = ib.to_vec();
        ia.sort();
        ib.sort();
        for (&p, &i) in la.iter().zip(&ia) {
            ca[p] = xs[i];
        }
        for (&p, &i) in lb.iter().zip(&ib) {
            cb[p] = xs[i];
        }
    }
    (a.with_coords(&ca), b.with_coords(&cb))
}

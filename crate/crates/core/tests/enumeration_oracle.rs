//! Normal-pattern enumeration against brute force over chord diagrams: for
//! every edge-count vector, each triangle's boundary points are matched in
//! all possible non-crossing ways with no chord returning to its own side.

use std::collections::BTreeSet;

use trackcalc::complex::Complex2;
use trackcalc::fixtures;
use trackcalc::search::enumerate_normal;

/// All non-crossing perfect matchings of `sides` (boundary order) with no
/// pair on one side.
fn matchings(sides: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn go(idx: &[usize], sides: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if idx.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for j in (1..idx.len()).step_by(2) {
            if sides[idx[0]] == sides[idx[j]] {
                continue;
            }
            for inner in go(&idx[1..j], sides) {
                for outer in go(&idx[j + 1..], sides) {
                    let mut m = vec![(idx[0], idx[j])];
                    m.extend(inner.iter().copied());
                    m.extend(outer.iter().copied());
                    out.push(m);
                }
            }
        }
        out
    }
    let idx: Vec<usize> = (0..sides.len()).collect();
    go(&idx, sides)
}

/// Diagrams per triangle for the given counts, or `None` if some triangle has
/// no valid diagram.
fn diagrams(y: &Complex2, counts: &[usize]) -> Option<Vec<Vec<(usize, usize)>>> {
    let mut all = Vec::new();
    for t in 0..y.n_triangles() {
        let sides: Vec<usize> = (0..3).flat_map(|k| std::iter::repeat(k).take(counts[y.slot(t, k).edge])).collect();
        let m = matchings(&sides);
        assert!(m.len() <= 1, "normal diagrams are unique");
        all.push(m.into_iter().next()?);
    }
    Some(all)
}

fn count_vectors(y: &Complex2, max_weight: usize) -> Vec<Vec<usize>> {
    fn go(y: &Complex2, e: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if e == y.n_edges() {
            out.push(cur.clone());
            return;
        }
        let max = if y.frontier_edge[e] { 0 } else { left };
        for k in 0..=max {
            cur[e] = k;
            go(y, e + 1, left - k, cur, out);
        }
        cur[e] = 0;
    }
    let mut out = Vec::new();
    go(y, 0, max_weight, &mut vec![0; y.n_edges()], &mut out);
    out
}

fn check(name: &str, max_weight: usize) {
    let y = fixtures::load(name);
    assert!(y.n_triangles() <= 12, "{name}");
    let mut expected: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut expected_diagrams = Vec::new();
    for c in count_vectors(&y, max_weight) {
        if let Some(d) = diagrams(&y, &c) {
            expected.insert(c.clone());
            expected_diagrams.push((c, d));
        }
    }
    let found = enumerate_normal(&y, max_weight, true);
    let got: BTreeSet<Vec<usize>> = found.iter().map(|t| t.on_edge.iter().map(Vec::len).collect()).collect();
    assert_eq!(got.len(), found.len(), "{name}: duplicates");
    assert_eq!(got, expected, "{name}");
    // the chords realise the same diagram
    for t in &found {
        let counts: Vec<usize> = t.on_edge.iter().map(Vec::len).collect();
        let (_, d) = expected_diagrams.iter().find(|(c, _)| *c == counts).unwrap();
        for tri in 0..y.n_triangles() {
            let mut order: Vec<(u64, usize)> = Vec::new();
            for k in 0..3 {
                for &p in &t.on_edge[y.slot(tri, k).edge] {
                    order.push((t.bpos(&y, tri, p), p));
                }
            }
            order.sort();
            let rank = |p: usize| order.iter().position(|x| x.1 == p).unwrap();
            let mut mine: Vec<(usize, usize)> = t
                .chords
                .iter()
                .filter(|c| c.tri == tri)
                .map(|c| {
                    let (a, b) = (rank(c.ends[0]), rank(c.ends[1]));
                    (a.min(b), b.max(a))
                })
                .collect();
            let mut theirs: Vec<(usize, usize)> = d[tri].iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
            mine.sort();
            theirs.sort();
            assert_eq!(mine, theirs, "{name} triangle {tri}");
        }
    }
}

#[test]
fn torus_up_to_weight_four() {
    check("torus", 4);
}

#[test]
fn mobius_up_to_weight_four() {
    check("mobius", 4);
}

#[test]
fn wedge_up_to_weight_four() {
    check("wedge", 4);
}

#[test]
fn annulus_up_to_weight_four() {
    check("annulus4", 4);
}

#[test]
fn genus2_up_to_weight_four() {
    check("genus2", 4);
}

#[test]
fn multiband_up_to_weight_four() {
    check("multiband", 4);
}

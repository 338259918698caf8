use trackcalc::cover::{build_cover, CoverMode, CoverSpec};
use trackcalc::pattern::{parse_pattern, Pattern};
use trackcalc::{ends, fixtures, intersect, Complex2, Error};

fn pat(y: &Complex2, text: &str) -> Pattern {
    parse_pattern(y, text).unwrap().pattern
}

fn oriented_core(y: &Complex2) -> Pattern {
    pat(y, "point p a 0\npoint q c 0\nchord T1 p q\nchord T2 q p\norient 0 +1\norient 1 +1\n")
}

#[test]
fn two_torus_slopes_meet_once() {
    let y = fixtures::load("torus");
    let a = pat(&y, include_str!("../data/torus_core.pat"));
    let b = pat(&y, include_str!("../data/torus_slope.pat"));
    assert_eq!(intersect::intersection_points(&y, &a, &b).unwrap().len(), 1);
    assert!(intersect::intersection_points(&y, &a, &a).is_err());
    assert!(intersect::coincide(&y, &a, &a));
    assert!(!intersect::coincide(&y, &a, &b));
}

#[test]
fn merging_needs_distinct_edge_points() {
    let y = fixtures::load("torus");
    let a = pat(&y, include_str!("../data/torus_core.pat"));
    assert!(matches!(intersect::merge(&y, &a, &a), Err(Error::NotTransverse(_))));
}

#[test]
fn reversing_the_orientation_negates_basis_numbers() {
    let y = fixtures::load("torus");
    let t = oriented_core(&y);
    let bs = intersect::basis(&y);
    let n = intersect::basis_numbers(&y, &bs, &t).unwrap();
    let r = intersect::basis_numbers(&y, &bs, &t.reversed()).unwrap();
    assert!(n.iter().any(|&x| x != 0));
    assert_eq!(r, n.iter().map(|x| -x).collect::<Vec<_>>());
}

#[test]
fn unoriented_patterns_have_no_intersection_numbers() {
    let y = fixtures::load("torus");
    let t = pat(&y, include_str!("../data/torus_core.pat"));
    let bs = intersect::basis(&y);
    assert!(matches!(intersect::basis_numbers(&y, &bs, &t), Err(Error::Unoriented)));
}

#[test]
fn the_core_separates_the_annulus_cover() {
    let b = fixtures::load("torus");
    let c = build_cover(&b, &CoverSpec::Cocycle(vec![b.cocycles[0].clone()]), CoverMode::Truncated(3)).unwrap();
    let y = &c.complex;
    let lift = c.lift_pattern(&b, &pat(&b, include_str!("../data/torus_core.pat")));
    let one = &lift.component_split(y)[0];
    let comp = ends::complement_components(y, one).unwrap();
    assert_eq!(comp.n_infinite(), 2);
    assert!(comp.splits());
}

#[test]
fn a_trivial_circle_bounds_a_disk() {
    let y = fixtures::load("torus");
    let t = pat(&y, include_str!("../data/trivial_circle.pat"));
    let comp = ends::complement_components(&y, &t).unwrap();
    assert_eq!(comp.components.iter().filter(|c| c.disk.is_some()).count(), 1);
    assert!(!comp.splits());
}

#[test]
fn crossing_patterns_have_no_plain_complement() {
    let y = fixtures::load("torus");
    let a = pat(&y, include_str!("../data/torus_core.pat"));
    let b = pat(&y, include_str!("../data/torus_slope.pat"));
    let m = intersect::merge(&y, &a, &b).unwrap().pattern;
    assert!(matches!(ends::complement_components(&y, &m), Err(Error::Precondition(_))));
    assert!(!ends::complement_components_relaxed(&y, &m).components.is_empty());
}

#[test]
fn finite_covers_multiply_cells() {
    for (name, d) in [("torus", 2u32), ("torus", 5), ("mobius", 2), ("genus2", 3)] {
        let b = fixtures::load(name);
        let c = build_cover(&b, &CoverSpec::Cocycle(vec![b.cocycles[0].clone()]), CoverMode::Finite(d)).unwrap();
        let y = &c.complex;
        assert_eq!(y.n_triangles(), d as usize * b.n_triangles(), "{name}");
        assert_eq!(y.n_edges(), d as usize * b.n_edges(), "{name}");
        assert_eq!(y.euler(), d as i64 * b.euler(), "{name}");
        assert_eq!(y.has_frontier(), b.has_frontier(), "{name}");
    }
}

#[test]
fn truncations_nest() {
    let b = fixtures::load("genus2");
    let spec = CoverSpec::Subgroup { words: vec![], coset_bound: 20_000 };
    let small = build_cover(&b, &spec, CoverMode::Truncated(2)).unwrap();
    let large = build_cover(&b, &spec, CoverMode::Truncated(3)).unwrap();
    assert!(small.complex.n_cells() < large.complex.n_cells());
    assert!(small.agrees_inside(&large));
}

#[test]
fn translating_there_and_back_is_the_identity() {
    let b = fixtures::load("torus");
    let c = build_cover(&b, &CoverSpec::Cocycle(vec![b.cocycles[0].clone()]), CoverMode::Finite(4)).unwrap();
    let y = &c.complex;
    // the slope that closes up on each sheet
    let t = [include_str!("../data/torus_core.pat"), include_str!("../data/torus_slope.pat")]
        .into_iter()
        .map(|s| c.lift_pattern(&b, &pat(&b, s)))
        .find(|t| t.components().len() == 4)
        .unwrap();
    let one = &t.component_split(y)[0];
    let moved = c.translate(one, &[1]).unwrap();
    assert!(!intersect::coincide(y, one, &moved));
    let back = c.translate(&moved, &[-1]).unwrap();
    assert_eq!(back.combinatorial_key(y), one.combinatorial_key(y));
    let around = c.translate(one, &[4]).unwrap();
    assert_eq!(around.combinatorial_key(y), one.combinatorial_key(y));
}

#[test]
fn tree_like_covers_split_at_a_vertex() {
    let spec = CoverSpec::Subgroup { words: vec![], coset_bound: 2000 };
    let w = fixtures::load("wedge");
    let c = build_cover(&w, &spec, CoverMode::Truncated(2)).unwrap();
    let v = (0..c.complex.n_vertices()).find(|&v| !c.complex.frontier_vertex[v]).unwrap();
    assert!(ends::is_splitting_vertex(&c.complex, v).unwrap());
    let t = fixtures::load("torus");
    let c = build_cover(&t, &CoverSpec::Cocycle(t.cocycles.clone()), CoverMode::Truncated(2)).unwrap();
    let v = (0..c.complex.n_vertices()).find(|&v| !c.complex.frontier_vertex[v]).unwrap();
    assert!(!ends::is_splitting_vertex(&c.complex, v).unwrap());
}

use trackcalc::axes::{self, AxisData, CrossType, Interval, Side, TranslateEntry, Verdict};
use trackcalc::complex::Complex2;
use trackcalc::cover::{build_cover, Cover, CoverMode, CoverSpec};
use trackcalc::hypgeom::{HypStructure, MinimizeConfig};
use trackcalc::pattern::{parse_pattern, Pattern};
use trackcalc::{fixtures, search, Error};

fn trivial(base: &Complex2, k: u32) -> Cover {
    build_cover(base, &CoverSpec::Subgroup { words: vec![], coset_bound: 20_000 }, CoverMode::Truncated(k)).unwrap()
}

fn pat(y: &Complex2, text: &str) -> Pattern {
    parse_pattern(y, text).unwrap().pattern
}

fn nearest_lift(c: &Cover, base: &Complex2, t: &Pattern, label: &str) -> AxisData {
    let l = axes::lift_to_cover(c, base, t, label).unwrap();
    l[axes::nearest_to_base(&c.complex, &l).unwrap()].clone()
}

struct Genus2 {
    base: Complex2,
    cover: Cover,
    a: AxisData,
    b: AxisData,
    d: AxisData,
}

fn genus2(k: u32) -> Genus2 {
    let base = fixtures::load("genus2");
    let cover = trivial(&base, k);
    let a = nearest_lift(&cover, &base, &pat(&base, include_str!("../data/genus2_a.pat")), "a");
    let b = nearest_lift(&cover, &base, &pat(&base, include_str!("../data/genus2_b.pat")), "b");
    let d = nearest_lift(&cover, &base, &pat(&base, include_str!("../data/genus2_d.pat")), "d");
    Genus2 { base, cover, a, b, d }
}

#[test]
fn finite_lifts_have_one_component_per_closed_preimage() {
    let torus = fixtures::load("torus");
    let core = pat(&torus, include_str!("../data/torus_core.pat"));
    let slope = pat(&torus, include_str!("../data/torus_slope.pat"));
    let c2 = build_cover(&torus, &CoverSpec::Cocycle(vec![torus.cocycles[0].clone()]), CoverMode::Finite(2)).unwrap();
    // one slope is unwrapped by the cover, the other closes up on each sheet
    let n_core = c2.lift_pattern(&torus, &core).components().len();
    let n_slope = c2.lift_pattern(&torus, &slope).components().len();
    assert_eq!(n_core + n_slope, 3);
}

#[test]
fn truncated_lifts_are_labelled_components() {
    let g = fixtures::load("genus2");
    let c = trivial(&g, 3);
    let t = pat(&g, include_str!("../data/genus2_b.pat"));
    let lifts = axes::lift_to_cover(&c, &g, &t, "b").unwrap();
    let whole = c.lift_pattern(&g, &t);
    assert_eq!(lifts.len(), whole.components().len());
    assert_eq!(lifts.iter().map(|l| l.pattern.weight()).sum::<usize>(), whole.weight());
    assert!(lifts.iter().enumerate().all(|(i, l)| l.label == format!("b.{i}")));
    assert!(axes::lift_to_cover(&c, &g, &Pattern::empty(&g), "e").unwrap().is_empty());
}

#[test]
fn axis_ends_split_the_frontier() {
    let g = genus2(3);
    let y = &g.cover.complex;
    for ax in [&g.a, &g.b, &g.d] {
        assert!(ax.is_axis_like(), "{}", ax.label);
        let m = ax.side_map(y);
        assert!(m.iter().any(|x| x.1 == Side::L) && m.iter().any(|x| x.1 == Side::R));
        // sides of the two ends' edges differ across the axis
        assert_eq!(ax.end_pair().unwrap().len(), 2);
    }
}

#[test]
fn multiband_axis_sides() {
    let base = fixtures::load("multiband");
    let c = trivial(&base, 4);
    let a = nearest_lift(&c, &base, &pat(&base, include_str!("../data/multiband_a.pat")), "A");
    let m = a.side_map(&c.complex);
    let l = m.iter().filter(|x| x.1 == Side::L).count();
    let r = m.iter().filter(|x| x.1 == Side::R).count();
    assert_eq!((l, r), (52, 41));
}

#[test]
fn genus2_pair_crosses_preserving_orientation() {
    let g = genus2(4);
    let y = &g.cover.complex;
    let r = axes::crosses_with_type(y, &g.b, &g.d).unwrap();
    assert_eq!(r.verdict, Verdict::Crosses(CrossType::OrientationPreserving));
    assert_eq!(r.b_crosses_a, Some(true));
    assert_eq!(r.a_crosses_b, Some(true));
    let back = axes::crosses_with_type(y, &g.d, &g.b).unwrap();
    assert_eq!((back.b_crosses_a, back.a_crosses_b), (Some(true), Some(true)));
    let f = axes::four_regions(y, &g.b, &g.d).unwrap();
    let sizes: Vec<usize> = Interval::ALL.iter().map(|&i| f.get(i).len()).collect();
    assert_eq!(sizes, vec![8, 19, 8, 13]);
    let u = axes::union_complement(y, &g.b, &g.d).unwrap();
    assert_eq!(u.frontier_pieces.len(), 4);
    assert_eq!(u.aligned, Some(true));
}

#[test]
fn disjoint_ends_are_reported() {
    let g = genus2(3);
    let y = &g.cover.complex;
    assert_eq!(axes::crosses_with_type(y, &g.b, &g.a).unwrap().verdict, Verdict::DisjointEnds);
    assert_eq!(axes::crosses(y, &g.b, &g.a).unwrap(), Some(false));
    // a disjoint pair has no four regions
    assert!(axes::four_regions(y, &g.b, &g.a).is_err());
}

#[test]
fn an_axis_coincides_with_itself() {
    let g = genus2(3);
    let y = &g.cover.complex;
    assert_eq!(axes::crosses_with_type(y, &g.b, &g.b).unwrap().verdict, Verdict::Coincide);
}

#[test]
fn sharp_sums_are_bounded_by_their_parts() {
    let g = genus2(4);
    let y = &g.cover.complex;
    let h = HypStructure::lift(&HypStructure::assign(&g.base), &g.cover);
    for i in Interval::ALL {
        let s = axes::sharp_sum(y, &h, &g.b, &g.d, i).unwrap();
        assert!(s.bounded, "{i:?}");
        assert!(!s.region.is_empty());
        assert!(s.pattern.first_crossing(y).is_none());
        assert!(s.pattern.is_two_sided(y));
    }
    let s1 = axes::sharp_sum(y, &h, &g.b, &g.d, Interval::I1).unwrap();
    assert_eq!((s1.complexity.weight, s1.parts.weight), (12, 12));
    assert!((s1.complexity.length - 9.709344961996212).abs() < 1e-9);
    assert!((s1.parts.length - 9.775317966981508).abs() < 1e-9);
}

#[test]
fn canonical_triple_needs_a_family() {
    let g = genus2(3);
    assert!(matches!(axes::canonical_triple(&g.cover.complex, &g.b, &[]), Err(Error::Axis(_))));
}

#[test]
fn canonical_triple_picks_the_crossing_translate() {
    let g = genus2(3);
    let y = &g.cover.complex;
    let family = vec![
        TranslateEntry { label: "disjoint".into(), once: g.a.clone(), twice: None },
        TranslateEntry { label: "crossing".into(), once: g.d.clone(), twice: Some(g.a.clone()) },
    ];
    let t = axes::canonical_triple(y, &g.b, &family).unwrap().unwrap();
    assert_eq!(t.label, "crossing");
    assert_eq!(t.candidates, 1);
    assert_eq!(t.good, Some(true));
    let none = axes::canonical_triple(y, &g.b, &family[..1]).unwrap();
    assert!(none.is_none());
}

#[test]
fn splitting_conditions_hold_for_annulus_translates() {
    let b = fixtures::load("torus");
    let c = build_cover(&b, &CoverSpec::Cocycle(vec![b.cocycles[0].clone()]), CoverMode::Truncated(3)).unwrap();
    let y = &c.complex;
    let h = HypStructure::lift(&HypStructure::assign(&b), &c);
    let s = search::shortest_pattern(y, &h, search::SearchMode::Essential, 4, &MinimizeConfig::default(), false).unwrap().unwrap();
    let a = AxisData::new(y, s.pattern.clone(), "core", None).unwrap();
    let mut tr = Vec::new();
    for d in [-2i64, -1, 1, 2] {
        if let Some(p) = c.translate(&a.pattern, &[d]) {
            tr.push(a.translated(y, p, &format!("{d}")).unwrap());
        }
    }
    assert!(!tr.is_empty());
    let r = axes::check_splitting_conditions(y, &a, &tr).unwrap();
    assert!(r.all(), "{:?}", r.failures);
    assert_eq!(r.infinite_components, 2);
}

#[test]
fn a_crossing_translate_fails_condition_c() {
    let g = genus2(3);
    let y = &g.cover.complex;
    let r = axes::check_splitting_conditions(y, &g.b, &[g.d.clone()]).unwrap();
    assert!(!r.c);
    assert!(r.failures.iter().any(|f| f.starts_with("(c)") && f.contains("`d.")), "{:?}", r.failures);
}

#[test]
fn a_one_sided_quotient_fails_condition_e() {
    let m = fixtures::load("mobius");
    let hm = HypStructure::assign(&m);
    let one = search::shortest_pattern(&m, &hm, search::SearchMode::OneSided, 8, &MinimizeConfig::default(), false).unwrap().unwrap();
    let c2 = build_cover(&m, &CoverSpec::Cocycle(vec![m.cocycles[0].clone()]), CoverMode::Finite(2)).unwrap();
    let y2 = &c2.complex;
    let a = AxisData::new(y2, c2.lift_pattern(&m, &one.pattern), "t", None).unwrap();
    let g = a.translated(y2, c2.translate(&a.pattern, &[1]).unwrap(), "deck").unwrap();
    let r = axes::check_splitting_conditions(y2, &a, &[g]).unwrap();
    assert!(!r.e);
    assert!(r.remedy.is_some());
}

#[test]
fn an_empty_translate_set_is_an_error() {
    let g = genus2(3);
    assert!(matches!(axes::check_splitting_conditions(&g.cover.complex, &g.b, &[]), Err(Error::Axis(_))));
}

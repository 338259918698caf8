//! Randomised invariants.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use trackcalc::axes::{self, AxisData};
use trackcalc::cover::{build_cover, CoverMode, CoverSpec};
use trackcalc::hypgeom::{self, HypStructure, MinimizeConfig};
use trackcalc::intersect;
use trackcalc::normalize::normalize;
use trackcalc::pattern::parse_pattern;
use trackcalc::random;
use trackcalc::{fixtures, parse_complex};

const FIXTURES: [&str; 6] = ["torus", "genus2", "annulus6", "multiband", "mobius", "wedge"];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn normalizing_twice_changes_nothing(seed in any::<u64>(), f in 0..FIXTURES.len()) {
        let y = fixtures::load(FIXTURES[f]);
        let t = random::random_pattern(&y, &mut rng(seed), 20, 2);
        let (n, log) = normalize(&y, &t).unwrap();
        prop_assert!(n.is_normal(&y));
        prop_assert!(n.weight() <= t.weight());
        prop_assert_eq!(log.measure.len(), log.moves.len() + 1);
        let (n2, log2) = normalize(&y, &n).unwrap();
        prop_assert!(log2.moves.is_empty());
        prop_assert_eq!(n2.combinatorial_key(&y), n.combinatorial_key(&y));
    }

    #[test]
    fn pattern_text_round_trips(seed in any::<u64>(), f in 0..FIXTURES.len()) {
        let y = fixtures::load(FIXTURES[f]);
        let t = random::random_pattern(&y, &mut rng(seed), 16, 2);
        let back = parse_pattern(&y, &t.to_text(&y)).unwrap().pattern;
        prop_assert_eq!(back.combinatorial_key(&y), t.combinatorial_key(&y));
        prop_assert_eq!(back.n_circles(), t.n_circles());
        for (a, b) in back.points.iter().zip(&t.points) {
            prop_assert_eq!(a.coord, b.coord);
        }
    }

    #[test]
    fn minimising_never_lengthens(seed in any::<u64>(), f in 0..4usize) {
        let y = fixtures::load(FIXTURES[f]);
        let h = HypStructure::assign(&y);
        let mut r = rng(seed);
        let t = random::random_normal(&y, &mut r, 10, false);
        let t = random::jitter_coords(&t, &mut r, 2.0);
        let cfg = MinimizeConfig { tol: 1e-10, max_iter: 300 };
        let m = hypgeom::minimize_length(&y, &h, &t, &cfg).unwrap();
        prop_assert!(m.history.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        prop_assert!(m.complexity.length <= hypgeom::pattern_length(&y, &h, &t) + 1e-12);
        prop_assert_eq!(m.pattern.combinatorial_key(&y), t.combinatorial_key(&y));
    }

    #[test]
    fn chord_lengths_are_symmetric_and_positive(
        f in 0..4usize,
        tri in 0..6usize,
        kp in 0..3usize,
        shift in 1..3usize,
        sp in -5.0..5.0f64,
        sq in -5.0..5.0f64,
    ) {
        let y = fixtures::load(FIXTURES[f]);
        let h = HypStructure::assign(&y);
        let tri = tri % y.n_triangles();
        let kq = (kp + shift) % 3;
        let a = hypgeom::chord_length(&y, &h, tri, (kp, sp), (kq, sq));
        let b = hypgeom::chord_length(&y, &h, tri, (kq, sq), (kp, sp));
        prop_assert!((a - b).abs() < 1e-12 * (1.0 + a));
        prop_assert!(a > 0.0);
    }

    #[test]
    fn finite_lifts_multiply_weight_and_length(seed in any::<u64>(), d in 2u32..4) {
        let base = fixtures::load("torus");
        let h = HypStructure::assign(&base);
        let c = build_cover(&base, &CoverSpec::Cocycle(vec![base.cocycles[0].clone()]), CoverMode::Finite(d)).unwrap();
        let hc = HypStructure::lift(&h, &c);
        let mut r = rng(seed);
        let t = random::random_normal(&base, &mut r, 10, false);
        let t = random::jitter_coords(&t, &mut r, 1.0);
        let lift = c.lift_pattern(&base, &t);
        prop_assert_eq!(lift.weight(), d as usize * t.weight());
        let (l0, l1) = (hypgeom::pattern_length(&base, &h, &t), hypgeom::pattern_length(&c.complex, &hc, &lift));
        prop_assert!((l1 - d as f64 * l0).abs() < 1e-9 * (1.0 + l1));
        let down = c.project_pattern(&base, &lift);
        prop_assert_eq!(down.weight(), lift.weight());
    }

    #[test]
    fn surgery_keeps_weight_and_orientation_numbers(seed in any::<u64>(), f in 0..4usize) {
        let y = fixtures::load(FIXTURES[f]);
        let h = HypStructure::assign(&y);
        let mut r = rng(seed);
        let a = random::random_normal(&y, &mut r, 8, false);
        let b = random::random_normal(&y, &mut r, 8, false);
        prop_assume!(!a.is_empty() && !b.is_empty());
        let (a, b) = random::joint_coords(&a, &b, &mut r, 3.0);
        let cfg = MinimizeConfig { tol: 1e-8, max_iter: 50 };
        let rep = intersect::cut_and_paste(&y, &h, &a, &b, &intersect::Policy::Oriented, &cfg).unwrap();
        prop_assert_eq!(rep.after.weight as usize, a.weight() + b.weight());
        prop_assert!(rep.resolution.pattern.first_crossing(&y).is_none());
        let bs = intersect::basis(&y);
        let na = intersect::basis_numbers(&y, &bs, &a).unwrap();
        let nb = intersect::basis_numbers(&y, &bs, &b).unwrap();
        let nr = intersect::basis_numbers(&y, &bs, &rep.resolution.pattern).unwrap();
        let sum: Vec<i64> = na.iter().zip(&nb).map(|(x, z)| x + z).collect();
        prop_assert_eq!(nr, sum);
        if !rep.resolution.crossings.is_empty() {
            prop_assert!(rep.after.length < rep.before.length);
        }
    }

    #[test]
    fn crossing_depends_only_on_ends(shift in 0.01..0.4f64) {
        // moving B's points along their edges keeps its ends and its verdict
        let b = fixtures::load("genus2");
        let c = build_cover(&b, &CoverSpec::Subgroup { words: vec![], coset_bound: 2000 }, CoverMode::Truncated(3)).unwrap();
        let y = &c.complex;
        let load = |s: &str| parse_pattern(&b, s).unwrap().pattern;
        let pb = load(include_str!("../data/genus2_b.pat"));
        let pd = load(include_str!("../data/genus2_d.pat"));
        let la = axes::lift_to_cover(&c, &b, &pb, "a").unwrap();
        let lb = axes::lift_to_cover(&c, &b, &pd, "b").unwrap();
        let a = &la[axes::nearest_to_base(y, &la).unwrap()];
        let bb = &lb[axes::nearest_to_base(y, &lb).unwrap()];
        let coords: Vec<f64> = bb.pattern.points.iter().map(|p| p.coord + shift).collect();
        let moved: AxisData = bb.translated(y, bb.pattern.with_coords(&coords), "moved").unwrap();
        let r0 = axes::crosses_with_type(y, a, bb).unwrap();
        let r1 = axes::crosses_with_type(y, a, &moved).unwrap();
        prop_assert_eq!(r0.verdict, r1.verdict);
        prop_assert_eq!(r0.b_crosses_a, r1.b_crosses_a);
    }
}

#[test]
fn complex_text_round_trips() {
    for name in ["torus", "torus_universal", "wedge", "mobius", "genus2", "multiband", "annulus6"] {
        let y = fixtures::load(name);
        let back = parse_complex(&y.to_text()).unwrap();
        assert_eq!(back.to_text(), y.to_text(), "{name}");
        assert_eq!(back.euler(), y.euler());
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion.  Runs as a plain
//! binary so the lines always appear in the `cargo test` output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trackcalc::axes::{self, AxisData};
use trackcalc::complex::Complex2;
use trackcalc::cover::{build_cover, parse_edge_word, Cover, CoverMode, CoverSpec};
use trackcalc::ends;
use trackcalc::fixtures;
use trackcalc::hypgeom::{self, HypStructure, MinimizeConfig};
use trackcalc::intersect::{self, Policy};
use trackcalc::normalize::normalize;
use trackcalc::pattern::{read_pattern, Pattern};
use trackcalc::random;
use trackcalc::search::{self, SearchMode};

// tolerances
const LENGTH_DROP: f64 = 1e-9;
const LIFT_REL: f64 = 1e-6;
const MOBIUS_SLACK: f64 = 1e-9;
const GEODESIC_TOL: f64 = 1e-9;
const GRADIENT_REL: f64 = 1e-6;
const CONVEXITY_SLACK: f64 = 1e-12;
const HISTORY_SLACK: f64 = 1e-12;

// sizes and seeds
const NORMALIZE_SEED: u64 = 11;
const NORMALIZE_PER_FIXTURE: usize = 500;
const SURGERY_SEED: u64 = 7;
const SURGERY_PAIRS: usize = 200;
const GEOMETRY_SEED: u64 = 3;
const CONVEXITY_TRIALS: usize = 1000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn cfg() -> MinimizeConfig {
    MinimizeConfig::default()
}

fn cocycle_cover(base: &Complex2, phi: Vec<i64>, mode: CoverMode) -> (Cover, HypStructure) {
    let c = build_cover(base, &CoverSpec::Cocycle(vec![phi]), mode).unwrap();
    let h = HypStructure::lift(&HypStructure::assign(base), &c);
    (c, h)
}

fn trivial_cover(base: &Complex2, k: u32) -> Cover {
    build_cover(base, &CoverSpec::Subgroup { words: vec![], coset_bound: 20_000 }, CoverMode::Truncated(k)).unwrap()
}

fn normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(NORMALIZE_SEED);
    let (mut total, mut bad, mut compared, mut moves) = (0, Vec::new(), 0, 0);
    for name in ["torus", "genus2", "annulus6", "multiband", "mobius", "wedge"] {
        let y = fixtures::load(name);
        let bs = intersect::basis(&y);
        for i in 0..NORMALIZE_PER_FIXTURE {
            let t = random::random_pattern(&y, &mut rng, 30, 3);
            total += 1;
            let (out, log) = match normalize(&y, &t) {
                Ok(x) => x,
                Err(e) => {
                    bad.push(format!("{name}#{i}: {e}"));
                    continue;
                }
            };
            moves += log.moves.len();
            let descending = log.measure.windows(2).all(|w| w[1] < w[0]) && log.measure.len() == log.moves.len() + 1;
            if !descending || !out.is_normal(&y) {
                bad.push(format!("{name}#{i}: descending {descending} normal {}", out.is_normal(&y)));
            }
            // intersection numbers need a transverse orientation
            if t.is_two_sided(&y) {
                compared += 1;
                let a = intersect::basis_numbers(&y, &bs, &t);
                let b = intersect::basis_numbers(&y, &bs, &out);
                if a.is_err() || a != b {
                    bad.push(format!("{name}#{i}: basis numbers {a:?} -> {b:?}"));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{total} patterns, {moves} moves, {compared} two-sided with basis numbers compared, {} violations {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()),
    )
}

fn annulus_type_covers() -> Vec<(String, Complex2, HypStructure)> {
    let mut v = Vec::new();
    for n in [4, 6, 8] {
        let y = fixtures::load(&format!("annulus{n}"));
        let h = HypStructure::assign(&y);
        v.push((format!("annulus{n}"), y, h));
    }
    let torus = fixtures::load("torus");
    for phi in [vec![1i64, 0, 1], vec![0, 1, 1]] {
        let phi = torus.normalize_cocycle(&phi).unwrap();
        for k in [2, 3] {
            let (c, h) = cocycle_cover(&torus, phi.clone(), CoverMode::Truncated(k));
            v.push((format!("torus {phi:?} k={k}"), c.complex, h));
        }
    }
    v
}

fn weight_minimal_structure() -> Outcome {
    let mut lines = Vec::new();
    let mut violations = 0;
    let mut found = 0;
    for (name, y, _) in annulus_type_covers() {
        let basis = intersect::basis(&y);
        let all = search::enumerate_normal(&y, 8, true);
        let w = all.iter().filter(|t| search::qualifies(&y, t, SearchMode::Essential, &basis).is_some()).map(|t| t.weight()).min();
        let Some(w) = w else {
            violations += 1;
            lines.push(format!("{name}: none"));
            continue;
        };
        found += 1;
        let minimal: Vec<&Pattern> = all.iter().filter(|t| t.weight() == w && search::qualifies(&y, t, SearchMode::Essential, &basis).is_some()).collect();
        for t in &minimal {
            let mut per_tri = vec![0usize; y.n_triangles()];
            for ch in &t.chords {
                per_tri[ch.tri] += 1;
            }
            if !t.is_normal(&y) || per_tri.iter().any(|&n| n > 1) {
                violations += 1;
            }
        }
        lines.push(format!("{name}: w={w} x{}", minimal.len()));
    }
    outcome(violations == 0 && found > 0, format!("{violations} violations; {}", lines.join(", ")))
}

fn surgery_on(name: &str, seed: u64) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = MinimizeConfig { tol: 1e-10, max_iter: 200 };
    let y = fixtures::load(name);
    let h = HypStructure::assign(&y);
    let bs = intersect::basis(&y);
    let (mut n, mut crossing, mut fail, mut margin) = (0, 0, 0, f64::INFINITY);
    while n < SURGERY_PAIRS {
        let a = random::random_normal(&y, &mut rng, 12, false);
        let b = random::random_normal(&y, &mut rng, 12, false);
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let (a, b) = random::joint_coords(&a, &b, &mut rng, 3.0);
        n += 1;
        let r = match intersect::cut_and_paste(&y, &h, &a, &b, &Policy::Oriented, &cfg) {
            Ok(r) => r,
            Err(_) => {
                fail += 1;
                continue;
            }
        };
        if r.after.weight != r.before.weight || r.after.weight != (a.weight() + b.weight()) as u64 {
            fail += 1;
        }
        let sum: Vec<i64> = intersect::basis_numbers(&y, &bs, &a)
            .unwrap()
            .iter()
            .zip(intersect::basis_numbers(&y, &bs, &b).unwrap())
            .map(|(x, z)| x + z)
            .collect();
        if intersect::basis_numbers(&y, &bs, &r.resolution.pattern).ok() != Some(sum) {
            fail += 1;
        }
        if r.resolution.crossings.is_empty() {
            continue;
        }
        crossing += 1;
        let m = (r.before.length - r.after.length).min(r.before.length - r.after_minimized.length);
        margin = margin.min(m);
        if m <= LENGTH_DROP {
            fail += 1;
        }
    }
    (fail == 0 && crossing > 0, format!("{name}: {crossing}/{n} crossing, min drop {margin:.3e}, {fail} failures"))
}

fn surgery_subadditivity() -> Outcome {
    let names = ["torus", "genus2", "annulus6", "multiband"];
    let res: Vec<(bool, String)> = std::thread::scope(|s| {
        let hs: Vec<_> = names.iter().enumerate().map(|(i, &n)| s.spawn(move || surgery_on(n, SURGERY_SEED + i as u64))).collect();
        hs.into_iter().map(|h| h.join().unwrap()).collect()
    });
    outcome(res.iter().all(|r| r.0), res.into_iter().map(|r| r.1).collect::<Vec<_>>().join("; "))
}

fn fixture_covers() -> Vec<(String, Complex2, HypStructure)> {
    let mut cases = Vec::new();
    let torus = fixtures::load("torus");
    for (phi, ks) in [(vec![1i64, 0, 1], vec![2u32, 3]), (vec![0, 1, 1], vec![2, 3]), (vec![1, 1, 2], vec![2])] {
        let phi = torus.normalize_cocycle(&phi).unwrap();
        for k in ks {
            let (c, h) = cocycle_cover(&torus, phi.clone(), CoverMode::Truncated(k));
            cases.push((format!("torus {phi:?} k={k}"), c.complex, h));
        }
    }
    for n in [4, 6, 8] {
        let y = fixtures::load(&format!("annulus{n}"));
        let h = HypStructure::assign(&y);
        cases.push((format!("annulus{n}"), y, h));
    }
    let m = fixtures::load("mobius");
    let (c, h) = cocycle_cover(&m, m.cocycles[0].clone(), CoverMode::Finite(2));
    cases.push(("mobius double".into(), c.complex, h));
    let g = fixtures::load("genus2");
    let (c, h) = cocycle_cover(&g, g.cocycles[0].clone(), CoverMode::Truncated(1));
    cases.push(("genus2 first cocycle k=1".into(), c.complex, h));
    cases
}

fn shortest_disjointness() -> Outcome {
    let mut lines = Vec::new();
    let (mut compared, mut bad) = (0, 0);
    for (name, y, h) in fixture_covers() {
        let a = search::shortest_pattern(&y, &h, SearchMode::Essential, 12, &cfg(), false).unwrap();
        let b = search::shortest_pattern(&y, &h, SearchMode::Essential, 12, &cfg(), true).unwrap();
        match (a, b) {
            (Some(a), Some(b)) => {
                compared += 1;
                let same = intersect::coincide(&y, &a.pattern, &b.pattern);
                let xs = intersect::intersection_points(&y, &a.pattern, &b.pattern).map(|v| v.len());
                if !same && xs != Ok(0) {
                    bad += 1;
                }
                lines.push(format!("{name}: {}", if same { "coincide".to_string() } else { format!("{} crossings", xs.unwrap_or(usize::MAX)) }));
            }
            _ => lines.push(format!("{name}: no pattern")),
        }
    }
    outcome(bad == 0 && compared >= 10, format!("{compared} covers, {bad} with crossings; {}", lines.join(", ")))
}

fn lift_invariance() -> Outcome {
    let base = fixtures::load("torus");
    let (xh, h) = cocycle_cover(&base, base.cocycles[0].clone(), CoverMode::Truncated(3));
    let y = &xh.complex;
    // the finite covers unwrap the other slope
    let psi = y.normalize_cocycle(&xh.pull_back(&[0, 1, 1])).unwrap();
    let s = search::shortest_pattern(y, &h, SearchMode::Essential, 8, &cfg(), false).unwrap().unwrap();
    let (w, l) = (s.complexity.weight, s.complexity.length);
    let mut ok = true;
    let mut lines = vec![format!("base (w {w}, L {l:.12})")];
    for d in [2u32, 3] {
        let xk = build_cover(y, &CoverSpec::Cocycle(vec![psi.clone()]), CoverMode::Finite(d)).unwrap();
        let hk = HypStructure::lift(&h, &xk);
        let lift = xk.lift_pattern(y, &s.pattern);
        let c = hypgeom::pattern_complexity(&xk.complex, &hk, &lift).unwrap();
        let own = search::shortest_pattern(&xk.complex, &hk, SearchMode::Essential, 8 * d as usize, &cfg(), false).unwrap().unwrap();
        let want = d as f64 * l;
        let rel = |x: f64| (x - want).abs() / want;
        let good = c.weight == d as u64 * w && own.complexity.weight == d as u64 * w && rel(c.length) < LIFT_REL && rel(own.complexity.length) < LIFT_REL;
        ok &= good;
        lines.push(format!("d={d}: lift ({}, {:.12}) search ({}, {:.12})", c.weight, c.length, own.complexity.weight, own.complexity.length));
    }
    outcome(ok, lines.join("; "))
}

fn mobius_inequality() -> Outcome {
    let m = fixtures::load("mobius");
    let hm = HypStructure::assign(&m);
    let one = search::shortest_pattern(&m, &hm, SearchMode::OneSided, 12, &cfg(), false).unwrap().unwrap();
    let (c, h) = cocycle_cover(&m, m.cocycles[0].clone(), CoverMode::Finite(2));
    let two = search::shortest_pattern(&c.complex, &h, SearchMode::Essential, 12, &cfg(), false).unwrap().unwrap();
    let (g, g2) = (one.complexity, two.complexity);
    let ok = 2 * g.weight > g2.weight || (2 * g.weight == g2.weight && 2.0 * g.length >= g2.length - MOBIUS_SLACK);
    outcome(
        ok,
        format!("c(g) = ({}, {:.12}), c(g^2) = ({}, {:.12}), 2L - L' = {:.3e}", g.weight, g.length, g2.weight, g2.length, 2.0 * g.length - g2.length),
    )
}

fn ends_detection() -> Outcome {
    let torus = fixtures::load("torus");
    let annulus = ends::end_count_estimate(&torus, &CoverSpec::Cocycle(vec![torus.cocycles[0].clone()]), 2).unwrap();
    let uni = fixtures::load("torus_universal");
    let universal = ends::end_count_estimate(&uni, &CoverSpec::Cocycle(uni.cocycles.clone()), 2).unwrap();
    let mb = fixtures::load("multiband");
    let a = parse_edge_word(&mb, "a").unwrap();
    let multiband = ends::end_count_estimate(&mb, &CoverSpec::Subgroup { words: vec![a], coset_bound: 2000 }, 2).unwrap();
    let ok = annulus.counts == (2, 2)
        && annulus.stable
        && universal.counts == (1, 1)
        && universal.stable
        && multiband.counts.0 >= 3
        && multiband.counts.1 >= 3;
    outcome(
        ok,
        format!(
            "annulus-type {:?} stable {}, torus universal {:?} stable {}, multiband <a> {:?} stable {}",
            annulus.counts, annulus.stable, universal.counts, universal.stable, multiband.counts, multiband.stable
        ),
    )
}

fn crossing_symmetry() -> Outcome {
    // genus2: lifts of the short two-sided tracks to the trivial-subgroup cover
    let b = fixtures::load("genus2");
    let c = trivial_cover(&b, 4);
    let y = &c.complex;
    let mut axs: Vec<AxisData> = Vec::new();
    for (i, t) in search::enumerate_normal(&b, 4, true).iter().enumerate() {
        if t.is_empty() || t.components().len() != 1 || !t.is_two_sided(&b) {
            continue;
        }
        let l = axes::lift_to_cover(&c, &b, t, &format!("t{i}")).unwrap();
        let a = &l[axes::nearest_to_base(y, &l).unwrap()];
        if a.is_axis_like() {
            axs.push(a.clone());
        }
    }
    let (mut pairs, mut asym, mut crossing, mut four) = (0, 0, 0, 0);
    for i in 0..axs.len() {
        for j in 0..axs.len() {
            if i == j {
                continue;
            }
            pairs += 1;
            let r = axes::crosses_with_type(y, &axs[i], &axs[j]).unwrap();
            if r.b_crosses_a != r.a_crosses_b {
                asym += 1;
            }
            if r.b_crosses_a == Some(true) && r.a_crosses_b == Some(true) {
                crossing += 1;
                if let Ok(u) = axes::union_complement(y, &axs[i], &axs[j]) {
                    if u.frontier_pieces.len() == 4 && u.aligned == Some(true) {
                        four += 1;
                    }
                }
            }
        }
    }
    // multiband: the axis parallel to `a` against every supplied axis
    let mb = fixtures::load("multiband");
    let mc = trivial_cover(&mb, 4);
    let my = &mc.complex;
    let load = |f: &str| read_pattern(&mb, &data(f)).unwrap().pattern;
    let lifts = axes::lift_to_cover(&mc, &mb, &load("multiband_a.pat"), "A").unwrap();
    let a = lifts[axes::nearest_to_base(my, &lifts).unwrap()].clone();
    let mut others: Vec<AxisData> = lifts.iter().filter(|x| x.is_axis_like()).cloned().collect();
    others.extend(axes::lift_to_cover(&mc, &mb, &load("multiband_a2.pat"), "A2").unwrap().into_iter().filter(|x| x.is_axis_like()));
    for g in 1..=5i32 {
        for s in [1, -1] {
            let mut words = vec![vec![s * g]];
            for h in 1..=5i32 {
                words.push(vec![s * g, h]);
                words.push(vec![s * g, -h]);
            }
            for w in words {
                if let Some(p) = mc.translate_word(&a.pattern, &w) {
                    if let Ok(t) = a.translated(my, p, &format!("{w:?}")) {
                        others.push(t);
                    }
                }
            }
        }
    }
    let mut crossed = 0;
    for o in &others {
        if axes::crosses(my, o, &a).unwrap() == Some(true) || axes::crosses(my, &a, o).unwrap() == Some(true) {
            crossed += 1;
        }
    }
    let ok = asym == 0 && crossing > 0 && four == crossing && crossed == 0;
    outcome(
        ok,
        format!(
            "genus2 k=4: {} axes, {pairs} ordered pairs, {asym} asymmetric, {crossing} crossing with {four} four-piece complements; multiband k=4: {} supplied axes, {crossed} crossed",
            axs.len(),
            others.len()
        ),
    )
}

/// Hyperbolic length of the geodesic from `z` to `w` by adaptive Simpson
/// quadrature of `|dz| / Im z` along it.
fn geodesic_integral(z: Complex64, w: Complex64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let integrate = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| {
        let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        simpson(&f, a, b, fa, fm, fb, whole, 1e-13, 50).abs()
    };
    if (z.re - w.re).abs() < 1e-12 {
        // vertical geodesic, in log height
        return integrate(&|_| 1.0, z.im.ln(), w.im.ln());
    }
    let c = (w.norm_sqr() - z.norm_sqr()) / (2.0 * (w.re - z.re));
    let angle = |p: Complex64| (p.im).atan2(p.re - c);
    // on a circle centred on the real axis |dz| / Im z = dθ / sin θ
    integrate(&|th: f64| 1.0 / th.sin(), angle(z), angle(w))
}

fn geometry_kernel() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(GEOMETRY_SEED);
    let y = fixtures::load("genus2");
    let h = HypStructure::assign(&y);
    // chord lengths against quadrature
    let mut worst_geo = 0.0f64;
    for _ in 0..200 {
        let tri = rng.gen_range(0..y.n_triangles());
        let kp = rng.gen_range(0..3);
        let kq = (kp + rng.gen_range(1..3)) % 3;
        let (sp, sq) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let l = hypgeom::chord_length(&y, &h, tri, (kp, sp), (kq, sq));
        let q = geodesic_integral(hypgeom::realize(&y, &h, tri, kp, sp), hypgeom::realize(&y, &h, tri, kq, sq));
        worst_geo = worst_geo.max((l - q).abs());
    }
    // gradient against central differences
    let mut worst_grad = 0.0f64;
    for name in ["torus", "genus2", "annulus6"] {
        let y = fixtures::load(name);
        let h = HypStructure::assign(&y);
        for _ in 0..20 {
            let t = random::random_normal(&y, &mut rng, 10, false);
            if t.is_empty() {
                continue;
            }
            let t = random::jitter_coords(&t, &mut rng, 1.0);
            let g = hypgeom::length_gradient(&y, &h, &t);
            let step = 1e-6;
            for p in 0..t.points.len() {
                let mut plus = t.clone();
                plus.points[p].coord += step;
                let mut minus = t.clone();
                minus.points[p].coord -= step;
                let fd = (hypgeom::pattern_length(&y, &h, &plus) - hypgeom::pattern_length(&y, &h, &minus)) / (2.0 * step);
                worst_grad = worst_grad.max((g[p] - fd).abs() / g[p].abs().max(1.0));
            }
        }
    }
    // midpoint convexity of the length in the edge coordinates
    let mut convexity_failures = 0;
    for _ in 0..CONVEXITY_TRIALS {
        let t = random::random_normal(&y, &mut rng, 10, false);
        if t.is_empty() {
            continue;
        }
        let a = random::jitter_coords(&t, &mut rng, 2.0);
        let b = random::jitter_coords(&t, &mut rng, 2.0);
        let mid: Vec<f64> = a.points.iter().zip(&b.points).map(|(p, q)| 0.5 * (p.coord + q.coord)).collect();
        let la = hypgeom::pattern_length(&y, &h, &a);
        let lb = hypgeom::pattern_length(&y, &h, &b);
        let mut m = t.clone();
        for (p, &c) in m.points.iter_mut().zip(&mid) {
            p.coord = c;
        }
        let lm = hypgeom::pattern_length(&y, &h, &m);
        if lm > 0.5 * (la + lb) + CONVEXITY_SLACK * (1.0 + la + lb) {
            convexity_failures += 1;
        }
    }
    // minimisation never increases the length
    let mut nonmonotone = 0;
    let mut runs = 0;
    for _ in 0..30 {
        let t = random::random_normal(&y, &mut rng, 10, false);
        if t.is_empty() {
            continue;
        }
        let t = random::jitter_coords(&t, &mut rng, 3.0);
        let r = hypgeom::minimize_length(&y, &h, &t, &cfg()).unwrap();
        runs += 1;
        if r.history.windows(2).any(|w| w[1] > w[0] + HISTORY_SLACK) {
            nonmonotone += 1;
        }
    }
    let ok = worst_geo < GEODESIC_TOL && worst_grad < GRADIENT_REL && convexity_failures == 0 && nonmonotone == 0;
    outcome(
        ok,
        format!(
            "chord vs quadrature {worst_geo:.2e}, gradient rel {worst_grad:.2e}, {convexity_failures}/{CONVEXITY_TRIALS} convexity failures, {nonmonotone}/{runs} non-monotone minimisations"
        ),
    )
}

fn stallings_demo() -> Outcome {
    let b = fixtures::load("wedge");
    let mut ok = true;
    let mut lines = Vec::new();
    for k in 1..=3 {
        let c = trivial_cover(&b, k);
        let y = &c.complex;
        let h = HypStructure::lift(&HypStructure::assign(&b), &c);
        let s = search::shortest_pattern(y, &h, SearchMode::Essential, 3, &cfg(), false).unwrap();
        let Some(s) = s else {
            ok = false;
            lines.push(format!("k={k}: none"));
            continue;
        };
        let inf = ends::complement_components(y, &s.pattern).unwrap().n_infinite();
        // every component of every normal pattern separates
        let mut patterns = 0;
        let mut nonseparating = 0;
        for t in search::enumerate_normal(y, 3, true) {
            for comp in t.component_split(y) {
                patterns += 1;
                match ends::complement_components(y, &comp) {
                    Ok(cc) if cc.components.len() >= 2 => {}
                    _ => nonseparating += 1,
                }
            }
        }
        let good = s.complexity.weight == 1 && s.pattern.components().len() == 1 && inf == 2 && nonseparating == 0;
        ok &= good;
        lines.push(format!("k={k}: w={} infinite sides {inf}, {patterns} components checked, {nonseparating} non-separating", s.complexity.weight));
    }
    outcome(ok, lines.join("; "))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut v = vec!["trackcalc".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    trackcalc::cli::run(&v)
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("trackcalc-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let d = |f: &str| data(f).display().to_string();
    let out = |f: &str| dir.join(f).display().to_string();
    let runs: Vec<(Vec<String>, Vec<String>)> = vec![
        (vec!["validate".into(), "fixture:torus".into(), d("torus_core.pat")], vec![]),
        (vec!["cover".into(), "fixture:torus".into(), "--radius".into(), "2".into(), "--out".into(), out("cover.cx")], vec![out("cover.cx")]),
        (vec!["normalize".into(), "fixture:torus".into(), d("trivial_circle.pat"), "--out".into(), out("n.pat")], vec![out("n.pat")]),
        (vec!["shortest".into(), "fixture:torus".into(), "--radius".into(), "3".into(), "--weight-bound".into(), "6".into()], vec![]),
        (vec!["ends".into(), "fixture:torus".into(), "--radius".into(), "2".into()], vec![]),
        (vec!["cross".into(), "fixture:genus2".into(), d("genus2_b.pat"), d("genus2_d.pat"), "--subgroup".into(), "".into(), "--radius".into(), "3".into(), "--end".into(), "I1".into()], vec![]),
        (vec!["triple".into(), "fixture:genus2".into(), d("genus2_b.pat"), d("genus2_crossing.fam"), "--subgroup".into(), "".into(), "--radius".into(), "3".into()], vec![]),
        (vec!["check51".into(), "fixture:torus".into(), d("torus_core.pat"), d("torus_shifts.fam"), "--cocycle".into(), "0".into(), "--radius".into(), "3".into()], vec![]),
        (vec!["render".into(), "fixture:torus".into(), d("torus_core.pat"), d("torus_slope.pat"), "--out".into(), out("pair.svg")], vec![out("pair.svg")]),
        (vec!["render".into(), "fixture:torus".into(), d("trivial_circle.pat"), "--replay".into(), "--out".into(), out("replay.svg")], vec![out("replay-000.svg"), out("replay-001.svg")]),
    ];
    let mut bad = Vec::new();
    let mut codes = Vec::new();
    for (args, files) in &runs {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run_cli(&a);
        let first_files: Vec<Option<Vec<u8>>> = files.iter().map(|f| std::fs::read(f).ok()).collect();
        let second = run_cli(&a);
        let second_files: Vec<Option<Vec<u8>>> = files.iter().map(|f| std::fs::read(f).ok()).collect();
        codes.push(format!("{}={}", args[0], first.0));
        if first != second || first_files != second_files || first_files.iter().any(Option::is_none) || first.0 == 1 {
            bad.push(args[0].clone());
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(bad.is_empty(), format!("{} commands run twice, exit codes [{}], differing or failing: {bad:?}", runs.len(), codes.join(" ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("normalization terminates, is normal and preserves basis numbers", normalization),
        ("weight-minimal essential patterns meet each triangle in at most one arc", weight_minimal_structure),
        ("cut-and-paste adds weights and strictly shortens", surgery_subadditivity),
        ("opposite tie-breaks give coinciding or disjoint shortest patterns", shortest_disjointness),
        ("lifts of the shortest track to finite covers scale complexity", lift_invariance),
        ("one-sided track against its double-cover essential track", mobius_inequality),
        ("end counts of annulus-type, universal and multiband covers", ends_detection),
        ("crossing symmetry, four complement pieces, multiband rigidity", crossing_symmetry),
        ("chord length, gradient, convexity and monotone minimisation", geometry_kernel),
        ("tree-like cover: weight-one shortest track, every track separates", stallings_demo),
        ("CLI reports and figures are byte-reproducible", determinism),
    ];
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f)| {
                s.spawn(move || {
                    let t = Instant::now();
                    let o = f();
                    (o, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| (outcome(false, "panicked".into()), 0.0))).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (o, secs))) in criteria.iter().zip(&results).enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("{tag} {:>2} {name}: {} [{secs:.1}s]", i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

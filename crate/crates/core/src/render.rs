//! SVG figures: triangles unfolded into the plane along a breadth-first tree
//! of the dual graph, chords as segments, transverse orientations as ticks
//! towards the `R` side, crossings circled.

use std::collections::VecDeque;
use std::fmt::Write;

use crate::complex::Complex2;
use crate::pattern::Pattern;

type P2 = (f64, f64);

const SCALE: f64 = 160.0;
const COLORS: [&str; 6] = ["#1f5fbf", "#c0392b", "#1e8449", "#8e44ad", "#d68910", "#17202a"];

/// Corner positions per triangle; corner `k` is the start of slot `k`.
#[derive(Clone, Debug)]
pub struct Layout {
    pub corners: Vec<[P2; 3]>,
}

fn sub(a: P2, b: P2) -> P2 {
    (a.0 - b.0, a.1 - b.1)
}
fn lerp(a: P2, b: P2, s: f64) -> P2 {
    (a.0 + (b.0 - a.0) * s, a.1 + (b.1 - a.1) * s)
}
fn cross(a: P2, b: P2) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// Apex of the equilateral triangle on `p q`, on the side away from `away`.
fn apex(p: P2, q: P2, away: Option<P2>) -> P2 {
    let m = lerp(p, q, 0.5);
    let d = sub(q, p);
    let n = (-d.1 * 0.75f64.sqrt(), d.0 * 0.75f64.sqrt());
    let a = (m.0 + n.0, m.1 + n.1);
    let b = (m.0 - n.0, m.1 - n.1);
    match away {
        Some(w) if cross(d, sub(a, p)).signum() == cross(d, sub(w, p)).signum() => b,
        _ => a,
    }
}

pub fn layout(y: &Complex2) -> Layout {
    let nt = y.n_triangles();
    let mut corners: Vec<Option<[P2; 3]>> = vec![None; nt];
    let mut x_off = 0.0;
    for root in 0..nt {
        if corners[root].is_some() {
            continue;
        }
        let p = (x_off, 0.0);
        let q = (x_off + 1.0, 0.0);
        corners[root] = Some([p, q, apex(p, q, None)]);
        let mut placed = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(t) = queue.pop_front() {
            let c = corners[t].unwrap();
            for k in 0..3 {
                let s = y.slot(t, k);
                // positions of the edge's from and to vertices in t
                let (pf, pt) = if s.sign > 0 { (c[k], c[(k + 1) % 3]) } else { (c[(k + 1) % 3], c[k]) };
                for &(u, j) in y.incidence(s.edge) {
                    if corners[u].is_some() {
                        continue;
                    }
                    let su = y.slot(u, j);
                    let (a, b) = if su.sign > 0 { (pf, pt) } else { (pt, pf) };
                    let mut cu = [(0.0, 0.0); 3];
                    cu[j] = a;
                    cu[(j + 1) % 3] = b;
                    cu[(j + 2) % 3] = apex(a, b, Some(c[(k + 2) % 3]));
                    corners[u] = Some(cu);
                    placed.push(u);
                    queue.push_back(u);
                }
            }
        }
        let max_x = placed.iter().flat_map(|&t| corners[t].unwrap()).map(|p| p.0).fold(f64::MIN, f64::max);
        x_off = max_x + 1.0;
    }
    Layout { corners: corners.into_iter().map(Option::unwrap).collect() }
}

/// Fraction along an edge (from `from` to `to`) for a coordinate.
fn frac(coord: f64) -> f64 {
    1.0 / (1.0 + (-coord).exp())
}

fn point_pos(y: &Complex2, lay: &Layout, t: &Pattern, tri: usize, p: usize) -> P2 {
    let k = t.slot_in(y, tri, p);
    let c = lay.corners[tri];
    let s = y.slot(tri, k);
    let (pf, pt) = if s.sign > 0 { (c[k], c[(k + 1) % 3]) } else { (c[(k + 1) % 3], c[k]) };
    lerp(pf, pt, frac(t.points[p].coord))
}

fn seg_meet(a: (P2, P2), b: (P2, P2)) -> Option<P2> {
    let r = sub(a.1, a.0);
    let s = sub(b.1, b.0);
    let den = cross(r, s);
    if den.abs() < 1e-15 {
        return None;
    }
    let w = sub(b.0, a.0);
    let u = cross(w, s) / den;
    let v = cross(w, r) / den;
    (u > 1e-9 && u < 1.0 - 1e-9 && v > 1e-9 && v < 1.0 - 1e-9).then(|| lerp(a.0, a.1, u))
}

fn f(x: f64) -> String {
    let s = format!("{:.2}", x);
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

/// SVG of the complex with the given patterns drawn over it.
pub fn render_svg(y: &Complex2, patterns: &[(&str, &Pattern)]) -> String {
    let lay = layout(y);
    let all: Vec<P2> = lay.corners.iter().flatten().copied().collect();
    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 1.0f64, 1.0f64);
    if !all.is_empty() {
        x0 = all.iter().map(|p| p.0).fold(f64::MAX, f64::min);
        x1 = all.iter().map(|p| p.0).fold(f64::MIN, f64::max);
        y0 = all.iter().map(|p| p.1).fold(f64::MAX, f64::min);
        y1 = all.iter().map(|p| p.1).fold(f64::MIN, f64::max);
    }
    let pad = 0.3;
    // flip y so the first triangle points up
    let tx = |p: P2| ((p.0 - x0 + pad) * SCALE, (y1 - p.1 + pad) * SCALE);
    let w = (x1 - x0 + 2.0 * pad) * SCALE;
    let h = (y1 - y0 + 2.0 * pad) * SCALE;
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#, f(w), f(h), f(w), f(h)).unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (t, c) in lay.corners.iter().enumerate() {
        let pts: Vec<String> = c.iter().map(|&p| tx(p)).map(|(a, b)| format!("{},{}", f(a), f(b))).collect();
        writeln!(s, r##"<polygon points="{}" fill="#f4f6f7" stroke="#7b7d7d" stroke-width="1"/>"##, pts.join(" ")).unwrap();
        let centre = ((c[0].0 + c[1].0 + c[2].0) / 3.0, (c[0].1 + c[1].1 + c[2].1) / 3.0);
        let (cx, cy) = tx(centre);
        writeln!(s, r##"<text x="{}" y="{}" font-size="11" fill="#566573" text-anchor="middle">{}</text>"##, f(cx), f(cy), y.triangles[t].name).unwrap();
        for k in 0..3 {
            let e = y.slot(t, k).edge;
            let m = lerp(lerp(c[k], c[(k + 1) % 3], 0.5), centre, 0.18);
            let (mx, my) = tx(m);
            let colour = if y.frontier_edge[e] { "#b03a2e" } else { "#7b7d7d" };
            writeln!(s, r#"<text x="{}" y="{}" font-size="9" fill="{}" text-anchor="middle">{}</text>"#, f(mx), f(my), colour, y.edges[e].name).unwrap();
        }
    }
    let mut segments: Vec<(usize, (P2, P2))> = Vec::new();
    for (i, (label, t)) in patterns.iter().enumerate() {
        let colour = COLORS[i % COLORS.len()];
        writeln!(s, r#"<g class="pattern" data-label="{}" stroke="{}" fill="{}">"#, label, colour, colour).unwrap();
        let dirs = t.point_dirs(y).ok();
        for ch in &t.chords {
            let a = point_pos(y, &lay, t, ch.tri, ch.ends[0]);
            let b = point_pos(y, &lay, t, ch.tri, ch.ends[1]);
            segments.push((i, (a, b)));
            let (ax, ay) = tx(a);
            let (bx, by) = tx(b);
            writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke-width="2"/>"#, f(ax), f(ay), f(bx), f(by)).unwrap();
            // tick towards the side the orientation points into
            if let Some(d) = dirs.as_ref().map(|d| d[ch.ends[0]]).filter(|&d| d != 0 && ch.side != 0) {
                let p = ch.ends[0];
                let e = t.points[p].edge;
                let k = y.slot_of(ch.tri, e).unwrap();
                let cs = lay.corners[ch.tri];
                let sl = y.slot(ch.tri, k);
                let (pf, pt) = if sl.sign > 0 { (cs[k], cs[(k + 1) % 3]) } else { (cs[(k + 1) % 3], cs[k]) };
                let along = sub(pt, pf);
                let v = (along.0 * d as f64, along.1 * d as f64);
                let chord = sub(b, a);
                let mut n = (-chord.1, chord.0);
                if n.0 * v.0 + n.1 * v.1 < 0.0 {
                    n = (-n.0, -n.1);
                }
                let len = (n.0 * n.0 + n.1 * n.1).sqrt().max(1e-12);
                let m = lerp(a, b, 0.5);
                let tip = (m.0 + n.0 / len * 0.06, m.1 + n.1 / len * 0.06);
                let (mx, my) = tx(m);
                let (ux, uy) = tx(tip);
                writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke-width="1.5"/><circle cx="{}" cy="{}" r="2"/>"#, f(mx), f(my), f(ux), f(uy), f(ux), f(uy)).unwrap();
            }
        }
        for (p, pt) in t.points.iter().enumerate() {
            if let Some(&(tri, _)) = y.incidence(pt.edge).first() {
                let (px, py) = tx(point_pos(y, &lay, t, tri, p));
                writeln!(s, r#"<circle cx="{}" cy="{}" r="2.5"/>"#, f(px), f(py)).unwrap();
            }
        }
        writeln!(s, "</g>").unwrap();
    }
    for i in 0..segments.len() {
        for j in i + 1..segments.len() {
            if let Some(x) = seg_meet(segments[i].1, segments[j].1) {
                let (cx, cy) = tx(x);
                writeln!(s, r##"<circle class="crossing" cx="{}" cy="{}" r="5" fill="none" stroke="#e67e22" stroke-width="2"/>"##, f(cx), f(cy)).unwrap();
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Number of crossing markers in a rendered figure.
pub fn crossing_markers(svg: &str) -> usize {
    svg.matches(r#"class="crossing""#).count()
}

//! Ideal-triangle charts, chord lengths, complexity and length minimisation.
//!
//! Each triangle is the ideal triangle with corners `0, ∞, 1` (corner `k` is
//! the start of slot `k`).  An edge coordinate `s` is signed arclength from
//! the tangency point of the inscribed circle, increasing from `from` to `to`.
//! In triangle `σ`, slot `k` uses the local parameter `t = ε(s − δ)` where
//! `ε` is the slot sign and `δ` the gluing offset of that side.

use std::cmp::Ordering;
use std::ops::Add;

use num_complex::Complex64;
use serde::Serialize;

use crate::complex::Complex2;
use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::pattern::Pattern;

/// Side length of the triangle formed by the three tangency points.
pub fn tangency_side() -> f64 {
    1.5f64.acosh()
}

/// Coordinates are kept within this distance of the tangency point; a point
/// pushed there is escaping into a cusp.
pub const CUSP_CLAMP: f64 = 40.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypStructure {
    /// `offset[t][k]`: gluing offset `δ` of slot `k` of triangle `t`.
    pub offset: Vec<[f64; 3]>,
}

impl HypStructure {
    /// Charts from the complex's own shears: the first triangle on each edge
    /// is the reference side, the others are offset by the edge's shear.
    pub fn assign(y: &Complex2) -> HypStructure {
        let mut offset = vec![[0.0; 3]; y.n_triangles()];
        for e in 0..y.n_edges() {
            let shear = y.shear[e].unwrap_or(0.0);
            for (i, &(t, k)) in y.incidence(e).iter().enumerate() {
                offset[t][k] = if i == 0 { 0.0 } else { shear };
            }
        }
        HypStructure { offset }
    }

    /// Like [`HypStructure::assign`] with explicit shears (`None` = 0).
    pub fn with_shears(y: &Complex2, shears: &[Option<f64>]) -> Result<HypStructure> {
        for (e, s) in shears.iter().enumerate() {
            if s.is_some() && y.valence(e) < 2 {
                return Err(Error::FreeShear(y.edges[e].name.clone()));
            }
        }
        let mut z = y.clone();
        z.shear = shears.to_vec();
        Ok(HypStructure::assign(&z))
    }

    /// The structure a cover inherits from its base.
    pub fn lift(base: &HypStructure, cover: &Cover) -> HypStructure {
        HypStructure { offset: cover.tri_label.iter().map(|l| base.offset[l.base]).collect() }
    }

    /// Number of gluings with a non-zero offset.
    pub fn sheared_sides(&self) -> usize {
        self.offset.iter().flatten().filter(|&&d| d != 0.0).count()
    }
}

/// Point of ideal edge `k` at local parameter `t`, with its derivative in `t`.
pub fn edge_point(k: usize, t: f64) -> (Complex64, Complex64) {
    match k {
        0 => {
            let u = t.exp();
            (Complex64::new(0.0, u), Complex64::new(0.0, u))
        }
        1 => {
            let u = (-t).exp();
            (Complex64::new(1.0, u), Complex64::new(0.0, -u))
        }
        _ => {
            // the semicircle from 1 to 0, as the image of the imaginary axis
            let (u, d) = if t > 0.0 {
                // in terms of v = 1/u, which stays bounded
                let v = (-t).exp();
                let den = 1.0 + v * v;
                let z = Complex64::new(v * v / den, v / den);
                let dz = Complex64::new(-2.0 * v * v / (den * den), v * (v * v - 1.0) / (den * den));
                (z, dz)
            } else {
                let u = t.exp();
                let den = 1.0 + u * u;
                let z = Complex64::new(1.0 / den, u / den);
                let dz = Complex64::new(-2.0 * u * u / (den * den), u * (1.0 - u * u) / (den * den));
                (z, dz)
            };
            (u, d)
        }
    }
}

/// Hyperbolic distance in the upper half-plane.
pub fn distance(z: Complex64, w: Complex64) -> f64 {
    2.0 * ((z - w).norm() / (2.0 * (z.im * w.im).sqrt())).asinh()
}

/// Local parameter of edge coordinate `s` on slot `k` of triangle `tri`.
pub fn local_param(y: &Complex2, h: &HypStructure, tri: usize, k: usize, s: f64) -> f64 {
    y.slot(tri, k).sign as f64 * (s - h.offset[tri][k])
}

/// Chart position of edge coordinate `s` on slot `k` of triangle `tri`.
pub fn realize(y: &Complex2, h: &HypStructure, tri: usize, k: usize, s: f64) -> Complex64 {
    edge_point(k, local_param(y, h, tri, k, s)).0
}

/// Length of the geodesic chord joining two boundary points of a triangle.
pub fn chord_length(y: &Complex2, h: &HypStructure, tri: usize, p: (usize, f64), q: (usize, f64)) -> f64 {
    let (kp, kq) = (p.0, q.0);
    let tp = local_param(y, h, tri, kp, p.1);
    let tq = local_param(y, h, tri, kq, q.1);
    if kp == kq {
        return (tp - tq).abs();
    }
    distance(edge_point(kp, tp).0, edge_point(kq, tq).0)
}

/// Derivative of the chord length in the local parameter of endpoint `p`.
pub fn chord_length_dt(kp: usize, tp: f64, kq: usize, tq: f64) -> f64 {
    if kp == kq {
        return (tp - tq).signum() * if tp == tq { 0.0 } else { 1.0 };
    }
    let (z, dz) = edge_point(kp, tp);
    let (w, _) = edge_point(kq, tq);
    let diff = z - w;
    let yy = z.im * w.im;
    let big_d = diff.norm_sqr() / yy;
    if big_d == 0.0 {
        return 0.0;
    }
    let d_big_d = 2.0 * (diff * dz.conj()).re / yy - big_d * dz.im / z.im;
    (d_big_d / 2.0) / (big_d + big_d * big_d / 4.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Complexity {
    pub weight: u64,
    pub length: f64,
}

impl Complexity {
    pub fn zero() -> Complexity {
        Complexity { weight: 0, length: 0.0 }
    }
    /// Lexicographic comparison with a length tolerance.
    pub fn cmp_tol(&self, other: &Complexity, tol: f64) -> Ordering {
        match self.weight.cmp(&other.weight) {
            Ordering::Equal => {
                if (self.length - other.length).abs() <= tol {
                    Ordering::Equal
                } else {
                    self.length.total_cmp(&other.length)
                }
            }
            o => o,
        }
    }
}

impl PartialOrd for Complexity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.weight.cmp(&other.weight).then(self.length.total_cmp(&other.length)))
    }
}

impl Add for Complexity {
    type Output = Complexity;
    fn add(self, o: Complexity) -> Complexity {
        Complexity { weight: self.weight + o.weight, length: self.length + o.length }
    }
}

/// Length of one chord of `t`.
pub fn pattern_chord_length(y: &Complex2, h: &HypStructure, t: &Pattern, c: usize) -> f64 {
    let ch = &t.chords[c];
    let p = ch.ends[0];
    let q = ch.ends[1];
    chord_length(
        y,
        h,
        ch.tri,
        (t.slot_in(y, ch.tri, p), t.points[p].coord),
        (t.slot_in(y, ch.tri, q), t.points[q].coord),
    )
}

pub fn pattern_length(y: &Complex2, h: &HypStructure, t: &Pattern) -> f64 {
    (0..t.chords.len()).map(|c| pattern_chord_length(y, h, t, c)).fold(0.0, |a, b| a + b)
}

/// `(w(t), L(t))`; trivial circles must be deleted first.
pub fn pattern_complexity(y: &Complex2, h: &HypStructure, t: &Pattern) -> Result<Complexity> {
    if t.n_circles() > 0 {
        return Err(Error::Precondition("delete trivial circles before measuring".into()));
    }
    Ok(Complexity { weight: t.weight() as u64, length: pattern_length(y, h, t) })
}

/// Gradient of the length in the edge coordinates of every point.
pub fn length_gradient(y: &Complex2, h: &HypStructure, t: &Pattern) -> Vec<f64> {
    let mut g = vec![0.0; t.points.len()];
    for ch in &t.chords {
        let [p, q] = ch.ends;
        let kp = t.slot_in(y, ch.tri, p);
        let kq = t.slot_in(y, ch.tri, q);
        let tp = local_param(y, h, ch.tri, kp, t.points[p].coord);
        let tq = local_param(y, h, ch.tri, kq, t.points[q].coord);
        g[p] += y.slot(ch.tri, kp).sign as f64 * chord_length_dt(kp, tp, kq, tq);
        g[q] += y.slot(ch.tri, kq).sign as f64 * chord_length_dt(kq, tq, kp, tp);
    }
    g
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimizeConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        MinimizeConfig { tol: 1e-10, max_iter: 20_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimizeReport {
    pub pattern: Pattern,
    pub complexity: Complexity,
    pub sweeps: usize,
    pub converged: bool,
    /// Length after each sweep, starting with the initial length.
    pub history: Vec<f64>,
    /// Norm of the gradient projected onto the feasible directions.
    pub grad_norm: f64,
    /// Adjacent points of one edge that met.
    pub coincident: Vec<(usize, usize)>,
    /// Points pushed to the cusp clamp.
    pub escaped: Vec<usize>,
}

impl MinimizeReport {
    pub fn transverse(&self) -> bool {
        self.coincident.is_empty() && self.escaped.is_empty()
    }
}

fn local_derivative(y: &Complex2, h: &HypStructure, t: &Pattern, p: usize, s: f64) -> f64 {
    let mut g = 0.0;
    for &c in t.chords_at(p) {
        let ch = &t.chords[c];
        let q = if ch.ends[0] == p { ch.ends[1] } else { ch.ends[0] };
        let kp = t.slot_in(y, ch.tri, p);
        let kq = t.slot_in(y, ch.tri, q);
        let tp = local_param(y, h, ch.tri, kp, s);
        let tq = local_param(y, h, ch.tri, kq, t.points[q].coord);
        g += y.slot(ch.tri, kp).sign as f64 * chord_length_dt(kp, tp, kq, tq);
    }
    g
}

fn local_length(y: &Complex2, h: &HypStructure, t: &Pattern, p: usize, s: f64) -> f64 {
    let mut l = 0.0;
    for &c in t.chords_at(p) {
        let ch = &t.chords[c];
        let q = if ch.ends[0] == p { ch.ends[1] } else { ch.ends[0] };
        l += chord_length(
            y,
            h,
            ch.tri,
            (t.slot_in(y, ch.tri, p), s),
            (t.slot_in(y, ch.tri, q), t.points[q].coord),
        );
    }
    l
}

/// Bounds for point `p` keeping the order on its edge (weakly).
fn bounds(t: &Pattern, p: usize) -> (f64, f64) {
    let e = t.points[p].edge;
    let r = t.rank(p);
    let list = &t.on_edge[e];
    let lo = if r > 0 { t.points[list[r - 1]].coord } else { -CUSP_CLAMP };
    let hi = if r + 1 < list.len() { t.points[list[r + 1]].coord } else { CUSP_CLAMP };
    (lo.max(-CUSP_CLAMP), hi.min(CUSP_CLAMP))
}

/// Cyclic coordinate descent with an exact line search per point, in
/// `(edge, index)` order.  The chord combinatorics never change.
pub fn minimize_length(y: &Complex2, h: &HypStructure, t: &Pattern, cfg: &MinimizeConfig) -> Result<MinimizeReport> {
    if t.n_circles() > 0 {
        return Err(Error::Precondition("delete trivial circles before measuring".into()));
    }
    let mut cur = t.clone();
    let order: Vec<usize> = cur.on_edge.iter().flatten().copied().collect();
    let mut len = pattern_length(y, h, &cur);
    let mut history = vec![len];
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < cfg.max_iter {
        sweeps += 1;
        let mut moved = 0.0f64;
        for &p in &order {
            if cur.chords_at(p).is_empty() {
                continue;
            }
            let (lo, hi) = bounds(&cur, p);
            let s0 = cur.points[p].coord;
            let s = line_minimum(|s| local_derivative(y, h, &cur, p, s), lo, hi);
            // accept only if not worse (guards against flat rounding noise)
            if local_length(y, h, &cur, p, s) <= local_length(y, h, &cur, p, s0) {
                moved = moved.max((s - s0).abs());
                cur.points[p].coord = s;
            }
        }
        let new_len = pattern_length(y, h, &cur);
        history.push(new_len);
        let drop = len - new_len;
        len = new_len;
        if drop <= cfg.tol * (1.0 + len) && moved <= cfg.tol.sqrt() {
            converged = true;
            break;
        }
    }
    let grad = length_gradient(y, h, &cur);
    let mut gn = 0.0f64;
    for p in 0..cur.points.len() {
        let (lo, hi) = bounds(&cur, p);
        let s = cur.points[p].coord;
        let g = grad[p];
        let blocked = (s <= lo && g > 0.0) || (s >= hi && g < 0.0);
        if !blocked {
            gn += g * g;
        }
    }
    let mut coincident = Vec::new();
    for list in &cur.on_edge {
        for w in list.windows(2) {
            if (cur.points[w[1]].coord - cur.points[w[0]].coord).abs() < 1e-9 {
                coincident.push((w[0], w[1]));
            }
        }
    }
    let escaped: Vec<usize> = (0..cur.points.len())
        .filter(|&p| !cur.chords_at(p).is_empty() && cur.points[p].coord.abs() >= CUSP_CLAMP - 1e-9)
        .collect();
    let complexity = Complexity { weight: cur.weight() as u64, length: len };
    Ok(MinimizeReport { pattern: cur, complexity, sweeps, converged, history, grad_norm: gn.sqrt(), coincident, escaped })
}

/// Minimiser of a convex function on `[lo, hi]` from its derivative.
fn line_minimum(df: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    if lo >= hi {
        return lo;
    }
    if df(lo) >= 0.0 {
        return lo;
    }
    if df(hi) <= 0.0 {
        return hi;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if df(m) > 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

//! Partial coset enumeration (HLT row filling with a FIFO coincidence queue).
//!
//! Letters are non-zero `i32`: `g + 1` for generator `g`, `-(g + 1)` for its
//! inverse.  Column `2g` holds `g`, column `2g + 1` holds `g⁻¹`.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetTable {
    pub n_gens: usize,
    /// One row per coset, `2 * n_gens` columns.
    pub rows: Vec<Vec<Option<usize>>>,
    /// Shortest word from coset 0 to each coset, in BFS order over columns.
    pub rep_words: Vec<Vec<i32>>,
    /// Set when the bound stopped the enumeration early.
    pub exhausted: bool,
}

pub fn col(letter: i32) -> usize {
    let g = (letter.unsigned_abs() - 1) as usize;
    2 * g + usize::from(letter < 0)
}

fn inv_col(c: usize) -> usize {
    c ^ 1
}

pub fn col_letter(c: usize) -> i32 {
    let g = (c / 2) as i32 + 1;
    if c % 2 == 0 {
        g
    } else {
        -g
    }
}

/// Cancels adjacent inverse pairs.
pub fn free_reduce(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn invert(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|&x| -x).collect()
}

struct Enumerator {
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    ncols: usize,
    bound: usize,
    dead: usize,
    exhausted: bool,
}

impl Enumerator {
    fn rep(&mut self, mut k: usize) -> usize {
        while self.parent[k] != k {
            self.parent[k] = self.parent[self.parent[k]];
            k = self.parent[k];
        }
        k
    }

    fn live(&self, k: usize) -> bool {
        self.parent[k] == k
    }

    fn define(&mut self, c: usize, x: usize) -> bool {
        let n = self.table.len();
        if n - self.dead >= self.bound {
            self.exhausted = true;
            return false;
        }
        self.table.push(vec![None; self.ncols]);
        self.parent.push(n);
        self.table[c][x] = Some(n);
        self.table[n][inv_col(x)] = Some(c);
        true
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
            self.dead += 1;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.ncols {
                if let Some(d) = self.table[g][x] {
                    self.table[d][inv_col(x)] = None;
                    let mu = self.rep(g);
                    let nu = self.rep(d);
                    if let Some(t) = self.table[mu][x] {
                        self.merge(nu, t, &mut queue);
                    } else if let Some(t) = self.table[nu][inv_col(x)] {
                        self.merge(mu, t, &mut queue);
                    } else {
                        self.table[mu][x] = Some(nu);
                        self.table[nu][inv_col(x)] = Some(mu);
                    }
                }
            }
        }
    }

    /// Scans `w` at coset `c`, defining cosets to complete it.
    fn scan_and_fill(&mut self, c: usize, w: &[i32]) {
        if w.is_empty() {
            return;
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j {
                match self.table[f][col(w[i])] {
                    Some(n) => {
                        f = n;
                        i += 1;
                    }
                    None => break,
                }
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j >= i as isize {
                match self.table[b][inv_col(col(w[j as usize]))] {
                    Some(n) => {
                        b = n;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i as isize {
                self.coincidence(f, b);
                return;
            } else if j == i as isize {
                let x = col(w[i]);
                self.table[f][x] = Some(b);
                self.table[b][inv_col(x)] = Some(f);
                return;
            } else if !self.define(f, col(w[i])) {
                return;
            }
        }
    }
}

/// Enumerates cosets of the subgroup generated by `subgroup` in the group
/// `⟨n_gens | relators⟩`, stopping once `bound` live cosets exist.
pub fn enumerate(n_gens: usize, relators: &[Vec<i32>], subgroup: &[Vec<i32>], bound: usize) -> CosetTable {
    let ncols = 2 * n_gens;
    let mut en = Enumerator { table: vec![vec![None; ncols]], parent: vec![0], ncols, bound: bound.max(1), dead: 0, exhausted: false };
    for w in subgroup {
        en.scan_and_fill(0, w);
    }
    let mut c = 0;
    while c < en.table.len() && !en.exhausted {
        if en.live(c) {
            for r in relators {
                en.scan_and_fill(c, r);
                if !en.live(c) || en.exhausted {
                    break;
                }
            }
            if en.live(c) && !en.exhausted {
                for x in 0..ncols {
                    if en.table[c][x].is_none() && !en.define(c, x) {
                        break;
                    }
                }
            }
        }
        c += 1;
    }
    // compact: renumber live cosets in BFS order from coset 0
    let n = en.table.len();
    let mut new_id: Vec<Option<usize>> = vec![None; n];
    let mut order = vec![0usize];
    let mut rep_words: Vec<Vec<i32>> = vec![Vec::new()];
    new_id[0] = Some(0);
    let mut head = 0;
    while head < order.len() {
        let k = order[head];
        head += 1;
        for x in 0..ncols {
            if let Some(d) = en.table[k][x] {
                let d = en.rep(d);
                if new_id[d].is_none() {
                    new_id[d] = Some(order.len());
                    order.push(d);
                    let mut w = rep_words[new_id[k].unwrap()].clone();
                    w.push(col_letter(x));
                    rep_words.push(w);
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(order.len());
    for &k in &order {
        let row: Vec<Option<usize>> = (0..ncols)
            .map(|x| en.table[k][x].map(|d| {
                let r = en.rep(d);
                new_id[r].expect("reachable coset")
            }))
            .collect();
        rows.push(row);
    }
    CosetTable { n_gens, rows, rep_words, exhausted: en.exhausted }
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
    pub fn act(&self, c: usize, letter: i32) -> Option<usize> {
        self.rows[c][col(letter)]
    }
    /// Coset reached by reading `w` from `c`.
    pub fn trace(&self, c: usize, w: &[i32]) -> Option<usize> {
        w.iter().try_fold(c, |k, &x| self.act(k, x))
    }
    pub fn row_complete(&self, c: usize) -> bool {
        self.rows[c].iter().all(|x| x.is_some())
    }
    pub fn is_complete(&self) -> bool {
        (0..self.len()).all(|c| self.row_complete(c))
    }
}

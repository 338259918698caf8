//! Built-in complexes used by the tests and the CLI.

use crate::complex::{parse_complex, Complex2};

pub const TORUS: &str = include_str!("../fixtures/torus.cx");
pub const TORUS_UNIVERSAL: &str = include_str!("../fixtures/torus_universal.cx");
pub const WEDGE: &str = include_str!("../fixtures/wedge.cx");
pub const MOBIUS: &str = include_str!("../fixtures/mobius.cx");
pub const GENUS2: &str = include_str!("../fixtures/genus2.cx");
pub const MULTIBAND: &str = include_str!("../fixtures/multiband.cx");

/// A triangulated annulus with `n / 2` vertices on each of four rings.
/// Rings 0 and 3 are frontier; the cocycle counts crossings of the seam
/// between the last and first column.
pub fn annulus(n: usize) -> String {
    assert!(n >= 4 && n % 2 == 0, "annulus needs an even n >= 4");
    let m = n / 2;
    let mut s = format!("# annulus with {m} columns and 4 rings\n");
    for r in 0..4 {
        for i in 0..m {
            s.push_str(&format!("vertex u{r}_{i}\n"));
        }
    }
    for r in 0..4 {
        for i in 0..m {
            s.push_str(&format!("edge h{r}_{i} u{r}_{i} u{r}_{}\n", (i + 1) % m));
        }
    }
    for r in 0..3 {
        for i in 0..m {
            s.push_str(&format!("edge v{r}_{i} u{r}_{i} u{}_{i}\n", r + 1));
            s.push_str(&format!("edge d{r}_{i} u{r}_{i} u{}_{}\n", r + 1, (i + 1) % m));
        }
    }
    for r in 0..3 {
        for i in 0..m {
            let j = (i + 1) % m;
            s.push_str(&format!("triangle A{r}_{i} +h{r}_{i} +v{r}_{j} -d{r}_{i}\n"));
            s.push_str(&format!("triangle B{r}_{i} +d{r}_{i} -h{}_{i} -v{r}_{i}\n", r + 1));
        }
    }
    for r in [0, 3] {
        for i in 0..m {
            s.push_str(&format!("frontier edge h{r}_{i}\n"));
        }
    }
    s.push_str("base u1_0\n");
    // seam cocycle, then moved off the spanning tree
    let y = parse_complex(&s).expect("annulus parses");
    let mut seam = vec![0i64; y.n_edges()];
    for r in 0..4 {
        seam[y.edge_id(&format!("h{r}_{}", m - 1)).unwrap()] = 1;
    }
    for r in 0..3 {
        seam[y.edge_id(&format!("d{r}_{}", m - 1)).unwrap()] = 1;
    }
    let phi = y.normalize_cocycle(&seam).expect("seam cocycle is closed");
    for (e, v) in phi.iter().enumerate() {
        s.push_str(&format!("cocycle {} {}\n", y.edges[e].name, v));
    }
    s
}

/// Two triangulated strips of `len` squares, glued at the middle vertex of
/// their bottom sides.  The end rungs of each strip are frontier.
pub fn wedge_of_strips(len: usize) -> String {
    assert!(len >= 2, "strips need at least two squares");
    let mid = len / 2;
    let mut s = String::from("# two strips sharing one vertex\nvertex w\n");
    let name = |x: &str, kind: char, i: usize| -> String {
        if kind == 'p' && i == mid {
            "w".to_string()
        } else {
            format!("{x}{kind}{i}")
        }
    };
    for x in ["X", "Y"] {
        for i in 0..=len {
            if i != mid {
                s.push_str(&format!("vertex {}\n", name(x, 'p', i)));
            }
            s.push_str(&format!("vertex {}\n", name(x, 'q', i)));
        }
    }
    for x in ["X", "Y"] {
        for i in 0..len {
            s.push_str(&format!("edge {x}s{i} {} {}\n", name(x, 'p', i), name(x, 'p', i + 1)));
            s.push_str(&format!("edge {x}u{i} {} {}\n", name(x, 'q', i), name(x, 'q', i + 1)));
            s.push_str(&format!("edge {x}d{i} {} {}\n", name(x, 'p', i), name(x, 'q', i + 1)));
        }
        for i in 0..=len {
            s.push_str(&format!("edge {x}r{i} {} {}\n", name(x, 'p', i), name(x, 'q', i)));
        }
        for i in 0..len {
            s.push_str(&format!("triangle {x}A{i} +{x}s{i} +{x}r{} -{x}d{i}\n", i + 1));
            s.push_str(&format!("triangle {x}B{i} +{x}d{i} -{x}u{i} -{x}r{i}\n"));
        }
        s.push_str(&format!("frontier edge {x}r0\nfrontier edge {x}r{len}\n"));
    }
    s.push_str("base w\n");
    s
}

/// Fixture text by name: `torus`, `torus_universal`, `wedge`, `mobius`,
/// `genus2`, `multiband`, `annulus<n>`, `strips<len>`.
pub fn by_name(name: &str) -> Option<String> {
    match name {
        "torus" => Some(TORUS.to_string()),
        "torus_universal" => Some(TORUS_UNIVERSAL.to_string()),
        "wedge" => Some(WEDGE.to_string()),
        "mobius" => Some(MOBIUS.to_string()),
        "genus2" => Some(GENUS2.to_string()),
        "multiband" => Some(MULTIBAND.to_string()),
        _ => {
            if let Some(n) = name.strip_prefix("annulus").and_then(|x| x.parse::<usize>().ok()) {
                (n >= 4 && n % 2 == 0).then(|| annulus(n))
            } else if let Some(n) = name.strip_prefix("strips").and_then(|x| x.parse::<usize>().ok()) {
                (n >= 2).then(|| wedge_of_strips(n))
            } else {
                None
            }
        }
    }
}

/// Parses a fixture that is known to be valid.
pub fn load(name: &str) -> Complex2 {
    let text = by_name(name).unwrap_or_else(|| panic!("no fixture `{name}`"));
    parse_complex(&text).unwrap_or_else(|e| panic!("fixture `{name}`: {e}"))
}

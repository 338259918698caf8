use trackcalc::{fixtures, parse_complex, parse_pattern, Error};

const TORUS: &str = "vertex v\nedge a v v\nedge b v v\nedge c v v\ntriangle T1 +a +b -c\ntriangle T2 +c -a -b\nbase v\n";

#[test]
fn a_minimal_torus_parses() {
    let y = parse_complex(TORUS).unwrap();
    assert_eq!((y.n_vertices(), y.n_edges(), y.n_triangles()), (1, 3, 2));
    assert_eq!(y.euler(), 0);
    assert!(!y.has_frontier());
}

#[test]
fn complex_errors_carry_line_numbers() {
    let dup = "vertex v\nvertex v\n";
    assert!(matches!(parse_complex(dup), Err(Error::Syntax { line: 2, .. })));
    let dangling = "vertex v\nedge a v w\n";
    assert!(matches!(parse_complex(dangling), Err(Error::Dangling { line: 2, kind: "vertex", .. })));
    let unknown = "vertex v\nwibble\n";
    assert!(matches!(parse_complex(unknown), Err(Error::Syntax { line: 2, .. })));
}

#[test]
fn triangles_must_close_up() {
    let open = "vertex u\nvertex v\nedge a u v\nedge b u v\nedge c u v\ntriangle T +a +b +c\nbase u\n";
    match parse_complex(open) {
        Err(Error::Syntax { line: 6, msg }) => assert!(msg.contains("does not start"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn shears_need_two_triangles() {
    let text = "vertex u\nvertex v\nvertex w\nedge a u v\nedge b v w\nedge c u w\ntriangle T +a +b -c\nshear a 0.5\nbase u\n";
    match parse_complex(text) {
        Err(Error::Syntax { line: 8, msg }) => assert!(msg.contains("fewer than two triangles"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn pattern_indices_must_be_contiguous() {
    let y = fixtures::load("torus");
    let gap = "point p a 0\npoint q a 2\n";
    assert!(matches!(parse_pattern(&y, gap), Err(Error::Syntax { line: 2, .. })));
}

#[test]
fn explicit_coordinates_must_increase() {
    let y = fixtures::load("torus");
    let text = "point p a 0 0.5\npoint q a 1 0.1\n";
    assert!(matches!(parse_pattern(&y, text), Err(Error::Syntax { line: 2, .. })));
}

#[test]
fn chords_name_known_points() {
    let y = fixtures::load("torus");
    let text = "point p a 0\nchord T1 p nowhere\n";
    assert!(matches!(parse_pattern(&y, text), Err(Error::Dangling { line: 2, kind: "point", .. })));
}

#[test]
fn ends_and_orientations_are_read() {
    let y = fixtures::load("torus");
    let text = "point p a 0\npoint q c 0\nchord T1 p q\nchord T2 q p\norient 0 +1\norient 1 +1\nends p q\n";
    let parsed = parse_pattern(&y, text).unwrap();
    assert_eq!(parsed.ends, Some((0, 1)));
    assert!(parsed.pattern.is_oriented(&y));
    assert_eq!(parsed.point_names, vec!["p", "q"]);
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let text = format!("# a comment\n\n{TORUS}");
    assert!(parse_complex(&text).is_ok());
}

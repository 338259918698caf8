use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let mut v = vec!["trackcalc".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    trackcalc::cli::run(&v)
}

fn data(f: &str) -> String {
    format!("{}/data/{f}", env!("CARGO_MANIFEST_DIR"))
}

fn report(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(args);
    assert_ne!(code, 1, "{out}");
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn shortest_on_the_annulus_cover_of_the_torus() {
    let (code, r) = report(&["shortest", "fixture:torus", "--mode", "essential", "--weight-bound", "6", "--radius", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], "trackcalc.report/1");
    assert_eq!(r["command"], "shortest");
    assert_eq!(r["stable"], true);
    let first = &r["result"]["runs"][0];
    assert_eq!(first["weight"], 2);
    assert!((first["length"].as_f64().unwrap() - 1.9248473002384139).abs() < 1e-9);
    assert_eq!(first["checks"]["connected"], true);
}

#[test]
fn normalizing_a_trivial_circle_deletes_it() {
    let (code, r) = report(&["normalize", "fixture:torus", &data("trivial_circle.pat")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["after"]["empty"], true);
    assert_eq!(r["result"]["log"]["moves"].as_array().unwrap().len(), 1);
    assert_eq!(r["inputs"][1]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn check51_details_a_crossing_translate() {
    let (code, r) = report(&["check51", "fixture:genus2", &data("genus2_b.pat"), &data("genus2_crossing.fam"), "--subgroup", "", "--radius", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["all"], false);
    let failures = r["result"]["report"]["failures"].as_array().unwrap();
    assert!(failures.iter().any(|f| f.as_str().unwrap().starts_with("(c) fails for `g`")));
}

#[test]
fn check51_passes_for_annulus_shifts() {
    let (code, r) = report(&["check51", "fixture:torus", &data("torus_core.pat"), &data("torus_shifts.fam"), "--cocycle", "0", "--radius", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["all"], true);
}

#[test]
fn unstable_end_counts_are_inconclusive() {
    let (code, r) = report(&["ends", "fixture:multiband", "--subgroup", "a", "--radius", "2"]);
    assert_eq!(code, 2);
    assert_eq!(r["stable"], false);
    assert!(r["result"]["at_least"].as_u64().unwrap() >= 3);
    let (code, r) = report(&["ends", "fixture:torus", "--cocycle", "0", "--radius", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["counts"], serde_json::json!([2, 2]));
}

#[test]
fn cross_reports_a_symmetric_stable_verdict() {
    let (code, r) = report(&["cross", "fixture:genus2", &data("genus2_b.pat"), &data("genus2_d.pat"), "--subgroup", "", "--radius", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["stable"], true);
    for run in r["result"]["runs"].as_array().unwrap() {
        assert_eq!(run["symmetric"], true);
        assert_eq!(run["frontier_pieces"], 4);
    }
}

#[test]
fn render_marks_the_crossing_of_two_slopes() {
    let out = std::env::temp_dir().join(format!("trackcalc-cli-{}.svg", std::process::id()));
    let (code, r) = report(&["render", "fixture:torus", &data("torus_core.pat"), &data("torus_slope.pat"), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["figures"][0]["crossings"], 1);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    let _ = std::fs::remove_file(out);
}

#[test]
fn input_errors_exit_with_one() {
    let bad = std::env::temp_dir().join(format!("trackcalc-bad-{}.pat", std::process::id()));
    std::fs::write(&bad, "point p a 0\nbogus\n").unwrap();
    let (code, out) = run(&["validate", "fixture:torus", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("line 2"), "{out}");
    let _ = std::fs::remove_file(bad);
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["shortest", "fixture:nowhere"]).0, 1);
    // axes need a cover
    assert_eq!(run(&["cross", "fixture:genus2", &data("genus2_b.pat"), &data("genus2_d.pat")]).0, 1);
}

#[test]
fn reports_are_identical_across_runs() {
    let args = ["ends", "fixture:torus", "--radius", "2", "--seed", "5"];
    assert_eq!(run(&args), run(&args));
    let (_, r) = report(&args);
    assert_eq!(r["seed"], 5);
}

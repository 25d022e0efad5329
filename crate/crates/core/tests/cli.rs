use std::fs;
use std::path::{Path, PathBuf};

use ctop::cli::run_command;
use ctop::constructors::{std_space, StandardSpaceKind as K};
use ctop::io::{parse_complex, read_complex, serialize_complex};
use tempfile::TempDir;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String) {
    run_command(args.iter().copied())
}

fn out(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

#[test]
fn interval_table() {
    let (code, text) = run(&["pi1", &data("cI.ctop"), "--bound", "2"]);
    assert_eq!(code, 0);
    assert_eq!(
        text,
        "objects: 0,1\narrows: 3\npreorder: yes\ntruncated: no (bound 2)\n\
         hom 0 -> 0: id [1]\nhom 0 -> 1: e [1]\nhom 1 -> 1: id [1]\n"
    );
}

#[test]
fn machine_records_one_class_per_line() {
    let (code, text) = run(&["pi1", &data("cJ.ctop"), "--bound", "4", "--format", "machine"]);
    assert_eq!(code, 0);
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|v| v["truncated"] == false && v["size"] == 1));
    assert!(lines.iter().any(|v| v["representative"] == serde_json::json!(["e1", "e2"])));
}

#[test]
fn reports_are_deterministic() {
    for file in ["cI_x_cJ.ctop", "circle3.ctop", "middle_delay.ctop"] {
        let a = run(&["report", &data(file)]);
        let b = run(&["report", &data(file)]);
        assert_eq!(a, b);
    }
}

#[test]
fn border_failure_exits_one_with_witness() {
    let (code, text) = run(&["check", &data("c_minus_I.ctop"), "border-flexible", "--bound", "4"]);
    assert_eq!(code, 1);
    assert!(text.contains("border-flexible: no"));
    assert!(text.contains("witness: (0,[e],{})"));
    assert!(text.contains("exact: yes"));
}

#[test]
fn bounded_confirmation_prints_bound() {
    let (code, text) = run(&["check", &data("line3.ctop"), "preflexible", "--bound", "5"]);
    assert_eq!(code, 0);
    assert!(text.contains("preflexible: yes"));
    assert!(text.contains("bound: 5"));
}

#[test]
fn diagonal_square_is_not_preflexible() {
    let (code, text) = run(&["check", &data("diagonal_square.ctop"), "preflexible"]);
    assert_eq!(code, 1);
    assert!(text.contains("witness: (00,[a1,b2],{})"));
    let (code, _) = run(&["check", &data("diagonal_square.ctop"), "total-support"]);
    assert_eq!(code, 1);
}

#[test]
fn circle_monoid_is_additive() {
    let (code, text) = run(&["monoid", &data("circle1.ctop"), "x0", "--bound", "5"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("monoid at x0: 6 class(es)\ntruncated: yes (bound 5)\n"));
    assert!(text.contains("  2 3 4 5 - -\n"));
}

#[test]
fn hom_between_window_points() {
    let (code, text) = run(&["hom", &data("line3.ctop"), "-2", "1", "--bound", "6"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("hom -2 -> 1: 1 class(es)"));
    let (_, text) = run(&["hom", &data("line3.ctop"), "1", "-2", "--bound", "6"]);
    assert!(text.starts_with("hom 1 -> -2: 0 class(es)"));
}

#[test]
fn new_writes_standard_spaces() {
    let dir = TempDir::new().unwrap();
    let path = out(&dir, "c.ctop");
    assert_eq!(run(&["new", "circle", "3", "-o", &path]).0, 0);
    let x = read_complex(&path).unwrap();
    assert_eq!(serialize_complex(&x), serialize_complex(&std_space(K::CircleNStop(3)).unwrap()));
    let (code, text) = run(&["new", "line-segment", "-2", "2"]);
    assert_eq!(code, 0);
    assert!(parse_complex(&text).unwrap().graph().vertex("-2").is_some());
    assert_eq!(run(&["new", "interval", "3"]).0, 2);
    assert_eq!(run(&["new", "sphere"]).0, 2);
}

#[test]
fn shipped_interval_is_the_standard_one() {
    let x = read_complex(data("cI.ctop")).unwrap();
    assert_eq!(serialize_complex(&x), serialize_complex(&std_space(K::IntervalC).unwrap()));
}

#[test]
fn corpus_round_trips() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path: PathBuf = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("ctop") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        let x = parse_complex(&text).unwrap();
        let again = serialize_complex(&x);
        assert_eq!(again.trim_end(), text.trim_end(), "{}", path.display());
        assert_eq!(serialize_complex(&parse_complex(&again).unwrap()), again);
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn malformed_documents_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = out(&dir, "bad.ctop");
    let text = fs::read_to_string(data("cI.ctop")).unwrap().replace("\"dwells\": []", "\"dwells\": [7]");
    fs::write(&bad, text).unwrap();
    let (code, msg) = run(&["pi1", &bad]);
    assert_eq!(code, 2);
    assert!(msg.contains("generators[0].dwells"), "{msg}");
    assert_eq!(run(&["pi1", &out(&dir, "missing.ctop")]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn product_recipe_counts() {
    let (code, text) = run(&["pi1", &data("cI_x_cJ.ctop"), "--bound", "3"]);
    assert_eq!(code, 0);
    assert!(text.contains("arrows: 18\n"));
    assert!(text.starts_with("objects: (0,0),(0,m),(0,1),(1,0),(1,m),(1,1)\n"));
}

#[test]
fn combinators_chain_through_files() {
    let dir = TempDir::new().unwrap();
    let (p, s, o, r, y) = (out(&dir, "p"), out(&dir, "s"), out(&dir, "o"), out(&dir, "r"), out(&dir, "y"));
    assert_eq!(run(&["product", &data("cI.ctop"), &data("cI.ctop"), "-o", &p]).0, 0);
    let (_, text) = run(&["hom", &p, "(0,0)", "(1,1)", "--bound", "2"]);
    assert!(text.starts_with("hom (0,0) -> (1,1): 1 class(es)"));
    assert!(text.contains("[2]"));
    assert_eq!(run(&["sum", &data("cI.ctop"), &data("circle1.ctop"), "-o", &s]).0, 0);
    assert!(run(&["pi1", &s, "--bound", "2"]).1.contains("arrows: 6\n"));
    assert_eq!(run(&["op", &data("cJ.ctop"), "-o", &o]).0, 0);
    assert!(run(&["hom", &o, "1", "0"]).1.starts_with("hom 1 -> 0: 1 class(es)"));
    assert_eq!(run(&["restrict", &data("cJ.ctop"), "--keep", "0,1", "-o", &r]).0, 0);
    assert!(run(&["pi1", &r]).1.contains("arrows: 3\n"));
    assert_eq!(run(&["symmetrize", &data("cI.ctop"), "-o", &y]).0, 0);
    let (_, text) = run(&["hom", &y, "0", "0", "--bound", "4"]);
    assert!(text.starts_with("hom 0 -> 0: 1 class(es)"), "{text}");
}

#[test]
fn reflections_repair_delayed_interval() {
    let dir = TempDir::new().unwrap();
    for r in ["pf", "bf"] {
        let path = out(&dir, r);
        assert_eq!(run(&["reflect", &data("c_minus_I.ctop"), r, "-o", &path]).0, 0);
        assert_eq!(run(&["check", &path, "border-flexible"]).0, 0);
        assert!(run(&["hom", &path, "0", "1"]).1.starts_with("hom 0 -> 1: 1 class(es)"));
    }
    let path = out(&dir, "fl");
    assert_eq!(run(&["reflect", &data("middle_delay.ctop"), "fl", "-o", &path]).0, 0);
    assert!(run(&["pi1", &path]).1.starts_with("objects: 0,1\narrows: 2\n"));
}

#[test]
fn quotient_spec_file() {
    let dir = TempDir::new().unwrap();
    let spec = out(&dir, "spec.json");
    fs::write(&spec, r#"{"blocks": [["0"], ["1", "2"]], "collapse": ["e2"]}"#).unwrap();
    let q = out(&dir, "q.ctop");
    assert_eq!(run(&["quotient", &data("one_jump2.ctop"), "--spec", &spec, "-o", &q]).0, 0);
    let x = read_complex(&q).unwrap();
    assert!(x.is_controlled(&x.route("0", &["e1"], &[1]).unwrap()));
    assert!(!x.is_controlled(&x.route("0", &["e1"], &[]).unwrap()));
    fs::write(&spec, r#"{"blocks": [["0"], ["0", "2"]], "collapse": []}"#).unwrap();
    assert_eq!(run(&["quotient", &data("one_jump2.ctop"), "--spec", &spec]).0, 2);
}

fn window_cover_args(dir: &TempDir) -> Vec<String> {
    let total = out(dir, "line.ctop");
    assert_eq!(run(&["new", "line", "4", "-o", &total]).0, 0);
    let vmap: Vec<String> = (-4..=4).map(|k: i64| format!("{k}=x{}", k.rem_euclid(3))).collect();
    let emap: Vec<String> = (-4..4).map(|k: i64| format!("e{k}=a{}", k.rem_euclid(3))).collect();
    vec![
        total,
        data("circle3.ctop"),
        "--vmap".into(),
        vmap.join(","),
        "--emap".into(),
        emap.join(","),
        "--boundary".into(),
        "-4,4".into(),
    ]
}

#[test]
fn covering_commands() {
    let dir = TempDir::new().unwrap();
    let cover = window_cover_args(&dir);
    let with = |head: &str, tail: &[&str]| -> (i32, String) {
        let mut args = vec![head.to_string()];
        args.extend(cover.iter().cloned());
        args.extend(tail.iter().map(|s| s.to_string()));
        run_command(args)
    };
    let (code, text) = with("cover-validate", &["--bound", "4"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("excluded from star check: -4,4"));
    let (code, text) = with("cover-lift", &["--start", "x2", "--edges", "a2,a0", "--dwells", "1", "--from", "-1"]);
    assert_eq!(code, 0, "{text}");
    assert_eq!(text, "lift: (-1,[e-1,e0],{1})\ncontrolled: yes\n");
    let (code, text) = with("cover-bijection", &["--from", "0", "--to", "x1", "--bound", "9"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("effective bound: 4\n"));
    assert!(text.contains("base classes: 2\n"));
    let (code, _) = with("cover-lift", &["--start", "x0", "--edges", "a0", "--from", "-2"]);
    assert_eq!(code, 2);
}

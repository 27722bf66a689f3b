use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use revcgd::document::{canonical_document, parse_document};
use revcgd::{anonymize, canonicalize};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn revcgd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revcgd"))
        .args(args)
        .output()
        .expect("spawn revcgd")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn anonymous_text(text: &str) -> String {
    let doc = parse_document(text).unwrap();
    let x = canonicalize(&doc.graph, &doc.origin()).unwrap();
    canonical_document(anonymize(&x).unwrap().representative())
}

#[test]
fn zero_steps_is_the_canonical_form() {
    let input = fixture("cycle8.graph");
    let o = revcgd(&[
        "run",
        input.to_str().unwrap(),
        "--formalism",
        "anonymous",
        "--steps",
        "0",
    ]);
    assert!(o.status.success());
    let expected = anonymous_text(&std::fs::read_to_string(&input).unwrap());
    assert_eq!(stdout(&o), expected);
}

#[test]
fn one_step_splits_the_converging_pair() {
    let dir = tempfile::tempdir().unwrap();
    let stats = dir.path().join("stats.csv");
    let o = revcgd(&[
        "run",
        fixture("cycle8.graph").to_str().unwrap(),
        "--steps",
        "1",
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let doc = parse_document(&stdout(&o)).unwrap();
    assert_eq!(doc.graph.vertex_count(), 9);
    let mut rows = csv::Reader::from_path(&stats).unwrap();
    let header: Vec<String> = rows.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["step", "vertices", "particles", "splits", "merges"]
    );
    let records: Vec<Vec<String>> = rows
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    assert_eq!(records[1], ["1", "9", "2", "1", "0"]);
}

#[test]
fn forward_then_inverse_returns_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("cycle8.graph");
    let original = std::fs::read_to_string(&input).unwrap();
    for formalism in ["named", "anonymous", "invisible"] {
        let mid = dir.path().join(format!("{formalism}-mid.graph"));
        let back = dir.path().join(format!("{formalism}-back.graph"));
        let common = [
            "--formalism",
            formalism,
            "--steps",
            "100",
            "--matter-depth",
            "2",
        ];
        let o = revcgd(
            &[
                &["run", input.to_str().unwrap()][..],
                &common,
                &["-o", mid.to_str().unwrap()],
            ]
            .concat(),
        );
        assert!(
            o.status.success(),
            "{formalism}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let o = revcgd(
            &[
                &["run", mid.to_str().unwrap()][..],
                &common,
                &["--inverse", "-o", back.to_str().unwrap()],
            ]
            .concat(),
        );
        assert!(
            o.status.success(),
            "{formalism}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let result = std::fs::read_to_string(&back).unwrap();
        if formalism == "anonymous" {
            assert_eq!(result, anonymous_text(&original));
        } else {
            let a = parse_document(&result).unwrap();
            let b = parse_document(&original).unwrap();
            assert_eq!(a.graph, b.graph, "{formalism}");
            assert_eq!(a.pointer, b.pointer, "{formalism}");
        }
    }
}

#[test]
fn convert_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("cycle8.graph");
    let im = dir.path().join("im.graph");
    let o = revcgd(&[
        "convert",
        input.to_str().unwrap(),
        "--from",
        "named",
        "--to",
        "invisible",
        "--matter-depth",
        "3",
        "-o",
        im.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&im).unwrap();
    assert!(text.starts_with("ports a b m l r;"));
    assert!(text.contains(" frontier;"));

    let o = revcgd(&[
        "convert",
        im.to_str().unwrap(),
        "--from",
        "invisible",
        "--to",
        "named",
    ]);
    assert!(o.status.success());
    let back = parse_document(&stdout(&o)).unwrap();
    let orig = parse_document(&std::fs::read_to_string(&input).unwrap()).unwrap();
    assert_eq!(back.graph, orig.graph);
    assert_eq!(back.pointer, orig.pointer);

    let o = revcgd(&[
        "convert",
        input.to_str().unwrap(),
        "--from",
        "named",
        "--to",
        "anonymous",
    ]);
    let anon = dir.path().join("anon.graph");
    std::fs::write(&anon, stdout(&o)).unwrap();
    let o = revcgd(&[
        "convert",
        anon.to_str().unwrap(),
        "--from",
        "anonymous",
        "--to",
        "named",
    ]);
    let named = dir.path().join("named.graph");
    std::fs::write(&named, stdout(&o)).unwrap();
    let o = revcgd(&[
        "convert",
        named.to_str().unwrap(),
        "--from",
        "named",
        "--to",
        "anonymous",
    ]);
    assert_eq!(stdout(&o), std::fs::read_to_string(&anon).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "ports a b;\nvertex x;\nedge x:a -- y:b;\n").unwrap();
    assert_eq!(
        revcgd(&["run", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        revcgd(&["run", "/nonexistent/graph"]).status.code(),
        Some(2)
    );
    assert_eq!(revcgd(&["check", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(revcgd(&["frobnicate"]).status.code(), Some(2));

    let rules = dir.path().join("bad.rules");
    std::fs::write(&rules, "successor a b, a a;\n").unwrap();
    let o = revcgd(&[
        "run",
        fixture("cycle8.graph").to_str().unwrap(),
        "--rules",
        rules.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = revcgd(&["check", "eta"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS eta"));
}

#[test]
fn json_reports_parse() {
    let o = revcgd(&["check", "bounded", "--json", "--max-size", "4"]);
    assert!(o.status.success());
    let line = stdout(&o);
    assert!(line.trim_start().starts_with('{'));
    assert!(line.contains("\"passed\":true"));
}

fn mutant(suite: &str, rules: &str, property: &str) {
    let o = revcgd(&["check", suite, "--rules", fixture(rules).to_str().unwrap()]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{rules}: {text}");
    let line = text
        .lines()
        .find(|l| l.starts_with("FAIL"))
        .unwrap_or_else(|| panic!("{rules}: no failure in {text}"));
    assert!(line.contains(property), "{rules}: {line}");
    assert!(text.contains("witness:"), "{rules}: no witness");
    assert!(text.contains("ports "), "{rules}: witness graph missing");
}

#[test]
fn shifted_successor_breaks_shift_invariance() {
    mutant("shift", "shifted-successor.rules", "shift-invariance");
}

#[test]
fn nonlocal_rule_breaks_continuity() {
    mutant("continuity", "nonlocal.rules", "continuity");
}

#[test]
fn teleport_breaks_boundedness_and_scattering() {
    mutant("bounded", "teleport.rules", "boundedness");
    mutant("scatter", "teleport.rules", "bounded-scattering");
}

#[test]
fn forgetting_matter_breaks_vertex_preservation() {
    mutant("preserve", "forget-matter.rules", "vertex-preservation");
}

#[test]
fn mirrored_matter_breaks_quiescence() {
    mutant("quiesce", "mirrored-matter.rules", "quiescence");
}

#[test]
fn wrong_inverses_are_caught() {
    mutant("invert", "forward-inverse.rules", "invertibility");
    mutant("invert", "split-only.rules", "invertibility");
}

#[test]
fn swapped_relocation_breaks_named_squares() {
    let o = revcgd(&[
        "check",
        "commute-all",
        "--rules",
        fixture("swapped.rules").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let failed: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("FAIL"))
        .map(|l| l.split_whitespace().nth(1).unwrap())
        .collect();
    assert_eq!(failed, ["commute-IM->N", "commute-N->IM"]);
}

#[test]
fn explicit_exchange_successor_matches_the_default() {
    let o = revcgd(&[
        "check",
        "shift",
        "--rules",
        fixture("exchange.rules").to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
}

use std::io::Write;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_splitcompat"))
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn temp_input(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn code(args: &[&str]) -> i32 {
    bin().args(args).output().unwrap().status.code().unwrap()
}

#[test]
fn valid_inputs() {
    let fig1 = fixture("fig1.txt");
    let bad = fixture("pairwise-counterexample.txt");
    let cases: &[(&[&str], i32)] = &[
        (&["check", &fig1], 0),
        (&["check", &bad], 1),
        (&["represent", &fig1], 0),
        (&["represent", &bad], 1),
        (&["census", &fig1], 0),
        (&["census", &bad], 0),
        (&["analyze", &bad], 0),
        (&["graph", &bad], 0),
        (&["oracle", &bad], 1),
        (&["oracle", &fixture("fig3.txt")], 0),
        (&["scan", "--max-delta", "1", "--max-size", "4", "--max-splits", "2"], 0),
        (&["--help"], 0),
    ];
    for (args, expected) in cases {
        assert_eq!(code(args), *expected, "{args:?}");
    }
}

#[test]
fn invalid_inputs() {
    let mismatch = temp_input("multiset: a b c\nsplit: a | b\n");
    let unknown = temp_input("multiset: a b c\nsplit: a q | b c\n");
    let duplicate = temp_input("multiset: a b\nmultiset: a b\n");
    let fig1 = fixture("fig1.txt");
    let cases: Vec<Vec<&str>> = vec![
        vec!["check", mismatch.path().to_str().unwrap()],
        vec!["analyze", unknown.path().to_str().unwrap()],
        vec!["census", duplicate.path().to_str().unwrap()],
        vec!["check", "/nonexistent/input.txt"],
        vec!["check"],
        vec!["frobnicate", &fig1],
        vec!["check", "--bogus", &fig1],
        vec!["check", "--format", "dot", &fig1],
        vec!["scan", "--max-delta", "1"],
        vec!["scan", "--max-delta", "1", "--max-size", "4", "--max-splits", "2", "--jobs", "0"],
    ];
    for args in cases {
        assert_eq!(code(&args), 2, "{args:?}");
    }
}

#[test]
fn parse_errors_name_the_line() {
    let mismatch = temp_input("multiset: a b c\n# comment\nsplit: a | b\n");
    let out = bin().args(["check", mismatch.path().to_str().unwrap()]).output().unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 3"), "{stderr}");
}

#[test]
fn budget_overrides() {
    let fig1 = fixture("fig1.txt");
    let out = bin()
        .args(["oracle", &fig1])
        .env("SPLITCOMPAT_ORACLE_MAX_SPLITS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = bin()
        .args(["analyze", &fig1])
        .env("SPLITCOMPAT_SUBSET_MAX_SPLITS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = bin()
        .args(["census", &fig1])
        .env("SPLITCOMPAT_CENSUS_LIMIT", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

use std::fs;
use std::path::{Path, PathBuf};

use splitcompat::MTree;
use splitcompat_cli::{parse_document, print_document, run};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn inputs() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(fixtures())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| {
            let name = p.file_name().unwrap().to_string_lossy();
            name.ends_with(".txt") && !name.ends_with(".expected.txt")
        })
        .collect();
    v.sort();
    v
}

fn fixture(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

#[test]
fn analyze_matches_committed_reports() {
    let all = inputs();
    assert!(all.len() >= 9);
    for input in all {
        let expected_path = input.with_extension("expected.txt");
        let expected = fs::read_to_string(&expected_path)
            .unwrap_or_else(|_| panic!("missing {}", expected_path.display()));
        let out = run(["splitcompat", "analyze", input.to_str().unwrap()]);
        assert_eq!(out.code, 0, "{}: {}", input.display(), out.stderr);
        assert_eq!(out.stdout, expected, "{}", input.display());
    }
}

#[test]
fn fixtures_round_trip_through_the_printer() {
    for input in inputs() {
        let doc = parse_document(&fs::read_to_string(&input).unwrap()).unwrap();
        let printed = print_document(&doc);
        assert_eq!(parse_document(&printed).unwrap(), doc, "{}", input.display());
    }
}

#[test]
fn check_prints_the_fig1_tree() {
    let out = run(["splitcompat", "check", &fixture("fig1.txt")]);
    assert_eq!(out.code, 0);
    let line = out.stdout.lines().find_map(|l| l.strip_prefix("representation: ")).unwrap();
    let ground = "a^2 b^2 c^2 x y".parse().unwrap();
    let printed = MTree::parse(line, &ground).unwrap();
    let fig1 = MTree::parse("({}:({a,b}),({c,x}),({b,y}:({a,c})))", &ground).unwrap();
    assert!(printed.is_isomorphic(&fig1));
}

#[test]
fn check_reports_the_minimal_witness() {
    let out = run(["splitcompat", "check", &fixture("pairwise-counterexample.txt")]);
    assert_eq!(out.code, 1);
    assert_eq!(out.stdout, "incompatible; minimal witness: {1,2,3}\n");
}

#[test]
fn census_of_fig3() {
    let out = run(["splitcompat", "census", &fixture("fig3.txt")]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout.lines().next().unwrap(),
        "4 consistent thin subgraphs, 4 non-isomorphic representations, unique: no"
    );
}

#[test]
fn structured_output_is_json() {
    let out = run(["splitcompat", "--format", "structured", "census", &fixture("fig3.txt")]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "census");
    assert_eq!(v["thin_subgraph_count"], 4);
    assert_eq!(v["representation_count"], 4);
    assert_eq!(v["unique"], false);

    let out = run(["splitcompat", "check", "--format", "structured", &fixture("fig1.txt")]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["compatible"], true);
    assert!(v["representation"].is_string());
    assert!(v["witness"]["critical_arcs"].is_array());

    let out = run(["splitcompat", "analyze", "--format", "structured", &fixture("remark-system.txt")]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["delta"], 8);
    assert_eq!(v["terminal"]["superterminal_sets"].as_array().unwrap().len(), 0);
}

#[test]
fn represent_all_lists_every_class() {
    let out = run(["splitcompat", "represent", "--all", &fixture("fig3.txt")]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().count(), 4);
    let out = run(["splitcompat", "represent", "--format", "dot", &fixture("fig1.txt")]);
    assert!(out.stdout.starts_with("graph"));
}

#[test]
fn oracle_agrees_on_fig3() {
    let out = run(["splitcompat", "oracle", &fixture("fig3.txt")]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("compatible; 4 representations"));
}

#[test]
fn graph_is_dot() {
    let out = run(["splitcompat", "graph", &fixture("fig3.txt")]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("digraph"));
    assert_eq!(out.stdout.matches("->").count(), 10);
}

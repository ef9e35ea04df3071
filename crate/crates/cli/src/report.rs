//! Text and structured renderings of each command's result.
//!
//! Structured output is one JSON object with `"schema": 1` and a
//! `"command"` field naming the subcommand; the remaining fields are listed
//! in the README.

use std::fmt::Write as _;

use serde_json::{json, Value};
use splitcompat::analysis::{
    bound_report_from, checks_with, pair_classes, terminal_report_with_graph, SubsetBudget,
    SubsetLattice,
};
use splitcompat::engine::{census_with_graph, check_with_graph};
use splitcompat::oracle::oracle_compatible;
use splitcompat::scan::ScanBudget;
use splitcompat::{ContainmentGraph, Error, Multiset, PairClass, Result};

use crate::{Budgets, Document, Format, Outcome, EXIT_FOUND, EXIT_INPUT, EXIT_OK};

const SCHEMA: u32 = 1;

fn structured(mut value: Value, command: &str) -> String {
    if let Value::Object(map) = &mut value {
        map.insert("schema".into(), json!(SCHEMA));
        map.insert("command".into(), json!(command));
    }
    let mut s = serde_json::to_string_pretty(&value).expect("reports serialize");
    s.push('\n');
    s
}

fn index_set(indices: &[usize]) -> String {
    let body: Vec<String> = indices.iter().map(usize::to_string).collect();
    format!("{{{}}}", body.join(","))
}

fn lattice(doc: &Document, budgets: &Budgets) -> Result<SubsetLattice> {
    SubsetLattice::compute(
        &doc.system,
        SubsetBudget {
            max_splits: budgets.subset_max_splits,
            max_subset_size: usize::MAX,
        },
    )
}

pub fn check(doc: &Document, format: Format, budgets: &Budgets) -> Result<Outcome> {
    let graph = ContainmentGraph::build(&doc.system)?;
    let result = check_with_graph(&graph)?;
    let witness = if result.compatible {
        None
    } else {
        // the smallest inclusion-minimal incompatible subset
        match lattice(doc, budgets) {
            Ok(l) => l.minimal_sets().into_iter().min_by_key(Vec::len),
            Err(Error::BudgetExceeded(_)) => None,
            Err(e) => return Err(e),
        }
    };
    let code = if result.compatible { EXIT_OK } else { EXIT_FOUND };
    let out = match format {
        Format::Structured => structured(
            json!({
                "compatible": result.compatible,
                "representation": result.representation,
                "witness": result.witness,
                "minimal_witness": witness,
            }),
            "check",
        ),
        _ => {
            let mut s = String::new();
            if let (Some(tree), Some(w)) = (&result.representation, &result.witness) {
                let _ = writeln!(s, "compatible");
                let _ = writeln!(s, "representation: {tree}");
                let _ = writeln!(s, "critical arcs:");
                for l in &w.critical_labels {
                    let _ = writeln!(s, "  {l}");
                }
            } else {
                match &witness {
                    Some(w) => {
                        let _ = writeln!(s, "incompatible; minimal witness: {}", index_set(w));
                    }
                    None => {
                        let _ = writeln!(s, "incompatible; minimal witness: not computed");
                    }
                }
            }
            s
        }
    };
    Ok(Outcome::ok(code, out))
}

pub fn represent(doc: &Document, all: bool, format: Format, budgets: &Budgets) -> Result<Outcome> {
    let graph = ContainmentGraph::build(&doc.system)?;
    let (trees, truncated) = if all {
        let census = census_with_graph(&graph, budgets.census_limit)?;
        (
            census.iso_classes.into_iter().map(|c| c.tree).collect::<Vec<_>>(),
            census.truncated,
        )
    } else {
        (check_with_graph(&graph)?.representation.into_iter().collect(), false)
    };
    let code = if trees.is_empty() { EXIT_FOUND } else { EXIT_OK };
    let out = match format {
        Format::Structured => structured(
            json!({
                "compatible": !trees.is_empty(),
                "representations": trees,
                "truncated": truncated,
            }),
            "represent",
        ),
        Format::Dot => trees.iter().map(|t| t.to_dot()).collect(),
        Format::Text => {
            if trees.is_empty() {
                "incompatible\n".to_string()
            } else {
                let mut s: String = trees.iter().map(|t| format!("{t}\n")).collect();
                if truncated {
                    let _ = writeln!(s, "# truncated at {} thin subgraphs", budgets.census_limit);
                }
                s
            }
        }
    };
    Ok(Outcome::ok(code, out))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn census(doc: &Document, format: Format, budgets: &Budgets) -> Result<Outcome> {
    let graph = ContainmentGraph::build(&doc.system)?;
    let census = census_with_graph(&graph, budgets.census_limit)?;
    let code = if census.violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_FOUND
    };
    let out = match format {
        Format::Structured => structured(
            json!({
                "thin_subgraph_count": census.thin_subgraph_count,
                "representation_count": census.iso_classes.len(),
                "unique": census.unique,
                "truncated": census.truncated,
                "classes": census.iso_classes,
                "violations": census.violations,
            }),
            "census",
        ),
        _ => {
            let mut s = format!(
                "{} consistent thin subgraphs, {} non-isomorphic representations, unique: {}\n",
                census.thin_subgraph_count,
                census.iso_classes.len(),
                yes_no(census.unique)
            );
            if census.truncated {
                let _ = writeln!(s, "truncated at {} thin subgraphs; counts are lower bounds", budgets.census_limit);
            }
            for (i, class) in census.iso_classes.iter().enumerate() {
                let _ = writeln!(s, "  {}: {}  (class size {})", i + 1, class.tree, class.members);
            }
            for v in &census.violations {
                let _ = writeln!(s, "violation: {v}");
            }
            s
        }
    };
    Ok(Outcome::ok(code, out))
}

fn class_name(c: PairClass) -> &'static str {
    match c {
        PairClass::NoEdges => "no arcs",
        PairClass::D1 => "D1",
        PairClass::D2 => "D2",
    }
}

fn part_text(m: &Multiset) -> String {
    m.to_string()
}

pub fn analyze(doc: &Document, format: Format, budgets: &Budgets) -> Result<Outcome> {
    let system = &doc.system;
    let graph = ContainmentGraph::build(system)?;
    let lattice = lattice(doc, budgets)?;
    let terminal = terminal_report_with_graph(&graph);
    let bounds = bound_report_from(system, &lattice);
    let checks = checks_with(system, &graph, &lattice, budgets.census_limit)?;
    let pairs = pair_classes(&graph);
    let violated = checks.iter().any(|c| c.violated());
    let code = if violated { EXIT_FOUND } else { EXIT_OK };
    let out = match format {
        Format::Structured => structured(
            json!({
                "ground": doc.ground,
                "delta": doc.ground.delta(),
                "splits": system.splits().iter().map(|s| json!({
                    "small": s.small(),
                    "large": s.large(),
                    "size": s.size(),
                })).collect::<Vec<_>>(),
                "pairs": pairs.iter().map(|(i, j, c)| json!({"i": i, "j": j, "class": c})).collect::<Vec<_>>(),
                "thin": graph.is_thin(),
                "terminal": terminal,
                "bounds": bounds,
                "checks": checks,
            }),
            "analyze",
        ),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "ground: {}", doc.ground);
            let _ = writeln!(s, "delta: {}", doc.ground.delta());
            let _ = writeln!(s, "splits:");
            for (i, sp) in system.splits().iter().enumerate() {
                let _ = writeln!(s, "  S{}: {} | {}  (size {})", i + 1, sp.small(), sp.large(), sp.size());
            }
            let _ = writeln!(s, "pairs:");
            for (i, j, c) in &pairs {
                let _ = writeln!(s, "  S{i} S{j}: {}", class_name(*c));
            }
            let _ = writeln!(s, "thin: {}", yes_no(graph.is_thin()));
            let compat = match bounds.compatible {
                Some(b) => yes_no(b),
                None => "not examined",
            };
            let _ = writeln!(s, "compatible: {compat}");
            let _ = writeln!(s, "terminal sets:");
            for t in &terminal.terminal_sets {
                let _ = writeln!(s, "  {}  (S{})", part_text(&t.part), t.split);
            }
            if terminal.superterminal_sets.is_empty() {
                let _ = writeln!(s, "superterminal sets: none");
            } else {
                let _ = writeln!(s, "superterminal sets:");
                for (k, t) in terminal.superterminal_sets.iter().enumerate() {
                    let _ = writeln!(s, "  {}  (S{})", part_text(&t.part), t.split);
                    for c in terminal.containing_side.iter().filter(|c| c.superterminal == k) {
                        let side = c.part.as_ref().map_or("ambiguous".to_string(), part_text);
                        let _ = writeln!(s, "    S{}: {side}", c.split);
                    }
                }
            }
            if bounds.minimal_incompatible_subsets.is_empty() {
                let _ = writeln!(s, "minimal incompatible subsets: none");
            } else {
                let sets: Vec<String> = bounds.minimal_incompatible_subsets.iter().map(|m| index_set(m)).collect();
                let _ = writeln!(s, "minimal incompatible subsets: {}", sets.join(" "));
            }
            let _ = writeln!(
                s,
                "bounds: delta+2 {}, delta+3 {}, max(2 delta, delta+2) {}",
                holds_text(bounds.star_holds),
                holds_text(bounds.star3_holds),
                holds_text(bounds.ref43_holds)
            );
            let _ = writeln!(s, "checks:");
            let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &checks {
                let status = match (c.applies, c.holds) {
                    (false, _) => "n/a",
                    (true, true) => "holds",
                    (true, false) => "VIOLATED",
                };
                let _ = writeln!(s, "  {:width$}  {status}", c.name);
                if c.violated() && !c.detail.is_empty() {
                    let _ = writeln!(s, "    {}", c.detail);
                }
            }
            s
        }
    };
    Ok(Outcome::ok(code, out))
}

fn holds_text(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

pub fn graph(doc: &Document, format: Format) -> Result<Outcome> {
    let graph = ContainmentGraph::build(&doc.system)?;
    let out = match format {
        Format::Structured => structured(
            json!({
                "vertices": (0..graph.vertex_count()).map(|v| json!({
                    "id": v,
                    "split": v / 2 + 1,
                    "part": graph.part(v),
                })).collect::<Vec<_>>(),
                "arcs": graph.arcs(),
            }),
            "graph",
        ),
        _ => graph.to_dot(),
    };
    Ok(Outcome::ok(EXIT_OK, out))
}

pub fn oracle(doc: &Document, format: Format, budgets: &Budgets) -> Result<Outcome> {
    let verdict = oracle_compatible(&doc.system, budgets.oracle)?;
    let code = if verdict.compatible { EXIT_OK } else { EXIT_FOUND };
    let out = match format {
        Format::Structured => structured(
            json!({
                "compatible": verdict.compatible,
                "representations": verdict.representations,
            }),
            "oracle",
        ),
        _ => {
            if verdict.compatible {
                let mut s = format!("compatible; {} representations\n", verdict.representations.len());
                for t in &verdict.representations {
                    let _ = writeln!(s, "  {t}");
                }
                s
            } else {
                "incompatible\n".to_string()
            }
        }
    };
    Ok(Outcome::ok(code, out))
}

pub fn scan(budget: &ScanBudget, format: Format) -> Result<Outcome> {
    if budget.max_ground_size > 12 {
        return Ok(Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: "error: --max-size is limited to 12\n".into(),
        });
    }
    let report = splitcompat::scan::scan(budget)?;
    let code = if report.violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_FOUND
    };
    let out = match format {
        Format::Structured => structured(json!({"budget": budget, "report": report}), "scan"),
        _ => {
            let mut s = String::new();
            let sizes = budget.sizes.as_ref().map_or("all".to_string(), |z| {
                z.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            });
            let _ = writeln!(
                s,
                "budget: max-delta {}, max-size {}, max-splits {}, sizes {sizes}, equal-size {}, distinct {}",
                budget.max_delta,
                budget.max_ground_size,
                budget.max_splits,
                yes_no(budget.equal_size),
                yes_no(budget.distinct)
            );
            let _ = writeln!(s, "grounds: {}", report.grounds);
            let _ = writeln!(s, "systems: {}", report.systems);
            let _ = writeln!(s, "compatible: {}", report.compatible);
            let _ = writeln!(s, "minimal incompatible: {}", report.minimal_incompatible);
            let _ = writeln!(s, "checks (applied / held):");
            let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &report.checks {
                let _ = writeln!(s, "  {:width$}  {} / {}", c.name, c.applied, c.held);
            }
            if report.open_cases.is_empty() {
                let _ = writeln!(s, "minimal incompatible without superterminal sets: none");
            } else {
                let _ = writeln!(s, "minimal incompatible without superterminal sets (k, delta: count):");
                for o in &report.open_cases {
                    let _ = writeln!(s, "  {}, {}: {}", o.k, o.delta, o.count);
                }
            }
            if report.violations.is_empty() {
                let _ = writeln!(s, "violations: none");
            } else {
                let _ = writeln!(s, "violations:");
                for v in &report.violations {
                    let _ = writeln!(s, "  {} on {}: {}  {}", v.check, v.ground, v.system.join(", "), v.detail);
                }
            }
            let _ = writeln!(s, "elapsed: {} ms", report.elapsed_ms);
            s
        }
    };
    Ok(Outcome::ok(code, out))
}

//! Resolution-tree bookkeeping: divisor tables, exports, and the verifier
//! run over everything the resolvers produce.

mod support;

use std::collections::BTreeMap;

use desing::binomial::{resolve_binomial, resolve_binomial_with, TransformMode};
use desing::curve::{resolve_plane_curve, CurveOptions, CurveRun};
use desing::field::FieldSpec;
use desing::parse::{parse_in_ring, parse_polynomials};
use desing::ring::PolyRing;
use desing::tree::ChartTree;
use desing::verify::verify_tree;

fn curve_run(src: &str, embedded: bool) -> CurveRun {
    let ring = PolyRing::new(FieldSpec::Rational, vec!["x", "y"]).unwrap();
    let f = parse_in_ring(&ring, src).unwrap();
    let options = CurveOptions {
        embedded,
        ..CurveOptions::default()
    };
    resolve_plane_curve(&ring, f, options).unwrap()
}

#[test]
fn divisor_tables_follow_the_chain() {
    // x^2 - y^5 resolves in two chained point blow-ups.
    let run = curve_run("x^2 - y^5", false);
    assert_eq!(run.steps, 2);
    let tree = &run.tree;

    assert_eq!(tree.divisor_table(0).total(), 0);
    assert_eq!(tree.final_ids(), vec![1, 3, 4]);

    let table = |id: usize| -> BTreeMap<u64, Vec<String>> { tree.divisor_table(id).by_birth };

    // chart x of step 1: only the first divisor, on the chart variable
    assert_eq!(table(1), BTreeMap::from([(1, vec!["x".to_string()])]));
    // chart x' of step 2 still sees the first divisor (now on y') plus its own
    assert_eq!(
        table(3),
        BTreeMap::from([(1, vec!["y'".to_string()]), (2, vec!["x'".to_string()])])
    );
    // chart y of step 2 looks along the first divisor: only the new one is visible
    assert_eq!(table(4), BTreeMap::from([(2, vec!["y".to_string()])]));
}

#[test]
fn dot_export_is_structurally_sound() {
    let run = curve_run("x^2 - y^3", false);
    let dot = run.tree.to_dot();
    assert!(dot.starts_with("digraph restree {"));
    assert!(dot.trim_end().ends_with('}'));
    // three nodes, two labelled edges of a point blow-up
    for needle in [
        "n0 [label=",
        "n1 [label=",
        "n2 [label=",
        "n0 -> n1 [label=\"d=0\"];",
        "n0 -> n2 [label=\"d=0\"];",
    ] {
        assert!(dot.contains(needle), "missing {needle:?} in:\n{dot}");
    }
    // finals carry doubled borders, the root does not
    assert_eq!(dot.matches("peripheries=2").count(), 2);
    let root_line = dot.lines().find(|l| l.contains("n0 [label=")).unwrap();
    assert!(!root_line.contains("peripheries"));
}

#[test]
fn json_round_trips_exactly() {
    let trees: Vec<ChartTree> = vec![
        {
            let (ring, polys) =
                parse_polynomials(FieldSpec::Rational, &["x(1)^2 - x(2)*x(3)^2"]).unwrap();
            resolve_binomial(&ring, polys, 100).unwrap().tree
        },
        curve_run("y^2 - x^4 + 2*x^2 - 1", false).tree,
        curve_run("x^2 - y^3", true).tree,
        {
            let (ring, polys) =
                parse_polynomials(FieldSpec::Prime(7), &["x(1)^2 - x(2)*x(3)"]).unwrap();
            resolve_binomial(&ring, polys, 100).unwrap().tree
        },
    ];
    for tree in trees {
        let text = tree.to_json();
        let back = ChartTree::from_json(&text).unwrap();
        assert_eq!(back, tree);
        assert_eq!(back.to_json(), text);
    }
}

/// Every tree either resolver emits must satisfy the independent verifier.
#[test]
fn verifier_accepts_everything_the_resolvers_emit() {
    let binomial_corpus: &[&[&str]] = &[
        &["x(1)^2 - x(2)*x(3)^2"],
        &["x(1)^2 - x(2)^2*x(3)^2"],
        &["x(1)*x(2) - x(3)^2"],
        &["x(1)^2 - x(2)*x(3)", "x(2)^3 - x(3)*x(1)"],
    ];
    for gens in binomial_corpus {
        for mode in [TransformMode::Strict, TransformMode::Weak] {
            let (ring, polys) = parse_polynomials(FieldSpec::Rational, gens).unwrap();
            let run = resolve_binomial_with(&ring, polys, 200, mode).unwrap();
            let report = verify_tree(&run.tree).unwrap();
            assert_eq!(report.nodes, run.tree.len());
            if mode == TransformMode::Strict {
                assert_eq!(report.weak_edges, 0, "{gens:?}");
            }
        }
    }

    for src in ["x*y", "x^2 - y^3", "y^2 - x^4", "x^3 - x*y^2", "x^2 - y^5"] {
        for embedded in [false, true] {
            let run = curve_run(src, embedded);
            let report = verify_tree(&run.tree).unwrap();
            assert_eq!(report.final_charts, run.final_count());
            assert!(report.notes.is_empty(), "{src}: {:?}", report.notes);
        }
    }
}

#[test]
fn budget_runs_leave_honest_leaves() {
    let (ring, polys) =
        parse_polynomials(FieldSpec::Rational, &["x(1)*x(2) - x(3)^2"]).unwrap();
    let run = resolve_binomial(&ring, polys, 1).unwrap();
    assert!(!run.completed);

    let finals = run.tree.final_ids();
    let leaves = run.tree.leaf_ids();
    assert!(finals.iter().all(|id| leaves.contains(id)));

    let stalled: Vec<usize> = leaves
        .iter()
        .copied()
        .filter(|id| !finals.contains(id))
        .collect();
    assert!(!stalled.is_empty());
    for id in stalled {
        assert_eq!(
            run.tree.node(id).note.as_deref(),
            Some("budget exhausted")
        );
    }

    // the verifier flags the unfinished leaves but still checks the edges
    let report = verify_tree(&run.tree).unwrap();
    assert!(!report.notes.is_empty());
}

//! Independent re-checking of resolution trees.
//!
//! [`verify_tree`] takes a chart tree — typically re-read from JSON — and
//! confirms that it is what it claims to be: every edge is re-derived by
//! blowing up the recorded center in the parent chart and comparing the
//! result with the stored child, the chart morphisms are spot-checked by
//! exact evaluation at rational sample points, and every chart marked final
//! is re-examined for terminality. The checks recompute everything from the
//! parent charts, so a tree that has been tampered with (or produced by a
//! buggy writer) is rejected with a description of the first mismatch.

use num_rational::BigRational;
use num_traits::One;

use crate::binomial::InductionState;
use crate::blowup::{
    blow_up, ideal_order_along_center, order_along_center, Center, Chart, TransformPolicy,
};
use crate::curve::{singular_points, PlaneCurve};
use crate::error::{Error, Result};
use crate::poly::Order;
use crate::tree::ChartTree;

/// Statistics of a successful verification. `notes` carries non-fatal
/// observations (unfinished leaves, skipped checks).
#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub nodes: usize,
    pub edges: usize,
    /// Edges that match the controlled (weak) transform instead of the
    /// strict one.
    pub weak_edges: usize,
    pub final_charts: usize,
    /// Pullback identities confirmed by exact evaluation.
    pub samples: usize,
    pub notes: Vec<String>,
}

fn fail(msg: String) -> Error {
    Error::VerifyFailed(msg)
}

fn pow(base: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= base;
    }
    acc
}

/// Deterministic sample points with all coordinates nonzero (so they avoid
/// every coordinate hyperplane, in particular the exceptional divisors).
fn sample_points(dim: usize) -> Vec<Vec<BigRational>> {
    let integral = (0..dim)
        .map(|i| BigRational::from_integer((i as i64 + 2).into()))
        .collect();
    let fractional = (0..dim)
        .map(|i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            BigRational::new((sign * (2 * i as i64 + 3)).into(), 2.into())
        })
        .collect();
    vec![integral, fractional]
}

/// Push a point of a child chart through one blow-up edge: the parent
/// coordinates of the same geometric point, computed directly from the
/// center data rather than through the stored image polynomials.
fn edge_image(center: &Center, chart_var: usize, p: &[BigRational]) -> Vec<BigRational> {
    let mut q = Vec::with_capacity(p.len());
    for i in 0..p.len() {
        let mut v = if i == chart_var {
            p[i].clone()
        } else if center.vars().contains(&i) {
            &p[chart_var] * &p[i]
        } else {
            p[i].clone()
        };
        if let Some(pos) = center.vars().iter().position(|&c| c == i) {
            v += &center.point()[pos];
        }
        q.push(v);
    }
    q
}

/// Re-derive one edge: blow up the parent at the recorded center and demand
/// that the stored child chart equals the recomputed one, under the strict
/// or, failing that, the weak transform. Returns the policy that matched.
fn check_edge(
    parent: &Chart,
    child: &Chart,
    center: &Center,
    chart_var: usize,
    birth: u64,
    id: usize,
) -> Result<TransformPolicy> {
    let pick = |children: Vec<crate::blowup::ChildChart>| {
        children
            .into_iter()
            .find(|c| c.chart_var == chart_var)
            .map(|c| c.chart)
    };
    let strict = pick(blow_up(parent, center, TransformPolicy::Strict, birth)?);
    if strict.as_ref() == Some(child) {
        return Ok(TransformPolicy::Strict);
    }
    if let Order::Finite(c) = ideal_order_along_center(&parent.ideal, center)? {
        let weak = pick(blow_up(parent, center, TransformPolicy::Weak(c), birth)?);
        if weak.as_ref() == Some(child) {
            return Ok(TransformPolicy::Weak(c));
        }
    }
    Err(fail(format!(
        "chart {id} is not the strict or weak transform of its parent at {}",
        center.display(&parent.ring)
    )))
}

/// Exactly evaluate the pullback identity `g(π(P)) = P_j^k · h(P)` for every
/// generator pair `(g, h)` across an edge, at every sample point. This uses
/// evaluation only — no polynomial substitution — so it cross-checks the
/// symbolic path that produced the charts.
fn check_edge_samples(
    parent: &Chart,
    child: &Chart,
    center: &Center,
    chart_var: usize,
    policy: TransformPolicy,
    id: usize,
) -> Result<usize> {
    let mut samples = 0;
    for p in sample_points(child.ring.num_vars()) {
        let q = edge_image(center, chart_var, &p);
        for (g, h) in parent.ideal.iter().zip(&child.ideal) {
            if g.is_zero() {
                continue;
            }
            let k = match policy {
                TransformPolicy::Weak(c) => c,
                TransformPolicy::Strict => match order_along_center(g, center)? {
                    Order::Finite(k) => k,
                    Order::Infinite => unreachable!("nonzero generator has finite order"),
                },
            };
            let lhs = g.eval(&q)?;
            let rhs = pow(&p[chart_var], k) * h.eval(&p)?;
            if lhs != rhs {
                return Err(fail(format!(
                    "chart {id}: pullback identity fails for a generator at a sample point"
                )));
            }
            samples += 1;
        }
    }
    Ok(samples)
}

/// Re-examine a chart marked final. Which terminality notion applies depends
/// on the tree's shape; a final chart passes if any applicable notion
/// confirms it.
fn check_final(
    chart: &Chart,
    id: usize,
    binomial_shaped: bool,
    curve_shaped: bool,
) -> Result<()> {
    let mut reasons = Vec::new();
    if binomial_shaped {
        let state = InductionState::from_chart(chart)?;
        if state.is_terminal() {
            return Ok(());
        }
        reasons.push("an active binomial generator remains".to_string());
    }
    if curve_shaped {
        let f = &chart.ideal[0];
        if f.is_constant() {
            return Ok(());
        }
        match PlaneCurve::new(&chart.ring, f.clone()).and_then(|c| singular_points(&c)) {
            Ok(points) if points.is_empty() => return Ok(()),
            Ok(_) => reasons.push("the curve still has singular points".to_string()),
            Err(e) => reasons.push(format!("smoothness could not be confirmed: {e}")),
        }
    }
    if reasons.is_empty() {
        // Neither notion applies; the caller records a skip note.
        return Ok(());
    }
    Err(fail(format!(
        "chart {id} is marked final but {}",
        reasons.join("; ")
    )))
}

/// Verify a resolution tree bottom to top. Fails with
/// [`Error::VerifyFailed`] on the first provable inconsistency.
pub fn verify_tree(tree: &ChartTree) -> Result<VerifyReport> {
    let mut report = VerifyReport {
        nodes: tree.len(),
        ..VerifyReport::default()
    };

    // Root sanity: identity morphism, no inherited divisors.
    let root = tree.root();
    if root.parent.is_some() {
        return Err(fail("node 0 must be the root".into()));
    }
    let identity: Vec<_> = (0..root.chart.ring.num_vars())
        .map(|i| crate::poly::Polynomial::variable(&root.chart.ring, i))
        .collect();
    if root.chart.images != identity {
        return Err(fail("root chart must carry the identity morphism".into()));
    }
    if !root.chart.exceptional.is_empty() {
        return Err(fail("root chart must have no exceptional divisors".into()));
    }

    // Edges: recompute every blow-up and compare.
    for node in tree.nodes() {
        let Some(link) = &node.parent else { continue };
        let id = node.id;
        if link.node >= id {
            return Err(fail(format!("chart {id}: parent must precede child")));
        }
        if !link.center_vars.contains(&link.chart_var) {
            return Err(fail(format!(
                "chart {id}: chart variable is not a center variable"
            )));
        }
        let parent = &tree.node(link.node).chart;
        let center = Center::at_point(&parent.ring, &link.center_vars, link.point.clone())?;
        if link.center_dim != center.dimension(&parent.ring) {
            return Err(fail(format!("chart {id}: wrong center dimension label")));
        }
        let Some(divisor) = node
            .chart
            .exceptional
            .iter()
            .find(|d| d.var == link.chart_var)
        else {
            return Err(fail(format!(
                "chart {id} lacks the exceptional divisor its blow-up created"
            )));
        };
        let policy = check_edge(parent, &node.chart, &center, link.chart_var, divisor.birth, id)?;
        if matches!(policy, TransformPolicy::Weak(_)) {
            report.weak_edges += 1;
        }
        report.samples +=
            check_edge_samples(parent, &node.chart, &center, link.chart_var, policy, id)?;
        report.edges += 1;
    }

    // Sibling consistency: one blow-up per parent, so all children must
    // record the same center and distinct chart variables.
    for node in tree.nodes() {
        let children = tree.children(node.id);
        let mut seen_vars = std::collections::BTreeSet::new();
        let mut center: Option<(&Vec<usize>, &Vec<BigRational>)> = None;
        for &c in &children {
            let link = tree.node(c).parent.as_ref().expect("child has a parent");
            if !seen_vars.insert(link.chart_var) {
                return Err(fail(format!(
                    "node {}: two children claim the same chart variable",
                    node.id
                )));
            }
            match center {
                None => center = Some((&link.center_vars, &link.point)),
                Some(prev) => {
                    if prev != (&link.center_vars, &link.point) {
                        return Err(fail(format!(
                            "node {}: children disagree about the center",
                            node.id
                        )));
                    }
                }
            }
        }
        if let Some((vars, _)) = center {
            if children.len() < vars.len() {
                report
                    .notes
                    .push(format!("node {}: partial chart coverage", node.id));
            }
        }
        if children.is_empty() && !node.is_final {
            report
                .notes
                .push(format!("node {}: unfinished leaf", node.id));
        }
        if node.is_final && !children.is_empty() {
            return Err(fail(format!(
                "node {}: final charts cannot have children",
                node.id
            )));
        }
    }

    // Final charts: re-check terminality under whichever notions apply.
    let binomial_shaped = tree
        .nodes()
        .iter()
        .all(|n| InductionState::from_chart(&n.chart).is_ok());
    let curve_shaped = root.chart.ring.num_vars() == 2
        && root.chart.ring.field().characteristic() == 0
        && tree.nodes().iter().all(|n| n.chart.ideal.len() == 1);
    if !binomial_shaped && !curve_shaped {
        report
            .notes
            .push("final-chart terminality not re-checked (unrecognized ideal shape)".into());
    }
    for &id in &tree.final_ids() {
        check_final(&tree.node(id).chart, id, binomial_shaped, curve_shaped)?;
        report.final_charts += 1;
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::resolve_binomial;
    use crate::curve::{resolve_plane_curve, CurveOptions};
    use crate::field::FieldSpec;
    use crate::parse::{parse_in_ring, parse_polynomials};
    use crate::ring::PolyRing;
    use crate::tree::ChartTree;

    fn binomial_tree(src: &str) -> ChartTree {
        let (ring, polys) = parse_polynomials(FieldSpec::Rational, &[src]).unwrap();
        resolve_binomial(&ring, polys, 10_000).unwrap().tree
    }

    #[test]
    fn accepts_binomial_runs() {
        for src in ["x(1)^2 - x(2)*x(3)^2", "x(1)^2 - x(2)^2*x(3)^2", "x*y - z^2"] {
            let tree = binomial_tree(src);
            let report = verify_tree(&tree).unwrap();
            assert_eq!(report.nodes, tree.len());
            assert_eq!(report.edges, tree.len() - 1);
            assert_eq!(report.weak_edges, 0);
            assert!(report.samples > 0);
            assert!(report.final_charts > 0, "{src}");
        }
    }

    #[test]
    fn accepts_curve_runs_in_both_modes() {
        let ring = PolyRing::new(FieldSpec::Rational, vec!["x", "y"]).unwrap();
        for embedded in [false, true] {
            let f = parse_in_ring(&ring, "x^2 - y^3").unwrap();
            let run = resolve_plane_curve(
                &ring,
                f,
                CurveOptions {
                    embedded,
                    ..CurveOptions::default()
                },
            )
            .unwrap();
            let report = verify_tree(&run.tree).unwrap();
            assert_eq!(report.edges, 2 * run.steps as usize);
            assert!(report.notes.is_empty(), "{:?}", report.notes);
        }
    }

    #[test]
    fn detects_weak_edges() {
        use crate::binomial::{resolve_binomial_with, TransformMode};
        let (ring, gens) =
            parse_polynomials(FieldSpec::Rational, &["x^2 - y*z^2", "x*y - z^3"]).unwrap();
        let run = resolve_binomial_with(&ring, gens, 10_000, TransformMode::Weak).unwrap();
        let report = verify_tree(&run.tree).unwrap();
        assert!(report.weak_edges > 0);
    }

    #[test]
    fn survives_a_json_round_trip() {
        let tree = binomial_tree("x(1)^2 - x(2)*x(3)^2");
        let reread = ChartTree::from_json(&tree.to_json()).unwrap();
        verify_tree(&reread).unwrap();
    }

    #[test]
    fn rejects_a_tampered_ideal() {
        let tree = binomial_tree("x(1)^2 - x(2)*x(3)^2");
        let mut json = tree.to_json();
        // Corrupt one transformed generator in place.
        let needle = "x(1)'^2 - x(2)";
        assert!(json.contains(needle));
        json = json.replace(needle, "x(1)'^2 - x(2)^2");
        let tampered = ChartTree::from_json(&json).unwrap();
        let err = verify_tree(&tampered).unwrap_err();
        assert!(matches!(err, Error::VerifyFailed(_)), "got {err:?}");
    }

    #[test]
    fn rejects_a_forged_final_mark() {
        let (ring, polys) =
            parse_polynomials(FieldSpec::Rational, &["x(1)^2 - x(2)*x(3)^2"]).unwrap();
        let run = resolve_binomial(&ring, polys, 0).unwrap(); // budget 0: root unfinished
        assert!(!run.completed);
        let mut json = run.tree.to_json();
        assert!(json.contains("\"final\": false"));
        json = json.replace("\"final\": false", "\"final\": true");
        let forged = ChartTree::from_json(&json).unwrap();
        let err = verify_tree(&forged).unwrap_err();
        assert!(matches!(err, Error::VerifyFailed(_)), "got {err:?}");
    }

    #[test]
    fn notes_unfinished_leaves() {
        let (ring, polys) =
            parse_polynomials(FieldSpec::Rational, &["x(1)*x(2)^2*x(3)^3 - x(4)^6"]).unwrap();
        let run = resolve_binomial(&ring, polys, 3).unwrap();
        assert!(!run.completed);
        let report = verify_tree(&run.tree).unwrap();
        assert!(report
            .notes
            .iter()
            .any(|n| n.contains("unfinished leaf")));
    }
}

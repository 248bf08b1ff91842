//! The resolution tree: one node per chart, edges labelled by the blow-up
//! that produced the child, plus divisor bookkeeping and the two export
//! formats (JSON, which round-trips losslessly, and Graphviz DOT, which is
//! one-way for visualization).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::blowup::{Center, Chart, ChildChart, ExceptionalDivisor};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::parse::parse_in_ring;
use crate::poly::fmt_rational;
use crate::ring::PolyRing;

/// How a node was produced from its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentLink {
    /// Id of the parent node.
    pub node: usize,
    /// The chart variable (index in the parent ring).
    pub chart_var: usize,
    /// The center's variable indices in the parent ring, sorted.
    pub center_vars: Vec<usize>,
    /// Coordinates of the blown-up point, aligned with `center_vars`.
    pub point: Vec<BigRational>,
    /// Geometric dimension of the center inside the parent chart.
    pub center_dim: u32,
}

/// A chart together with its position in the resolution tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub id: usize,
    pub chart: Chart,
    pub parent: Option<ParentLink>,
    /// True when the resolution procedure declared this chart terminal.
    pub is_final: bool,
    /// Free-form annotation ("empty variety", "budget exhausted", ...).
    pub note: Option<String>,
}

/// The tree of charts produced by a resolution run. Node ids are dense and
/// parents always precede children, so `nodes` is a valid topological order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartTree {
    nodes: Vec<TreeNode>,
}

impl ChartTree {
    pub fn new(root: Chart) -> ChartTree {
        ChartTree {
            nodes: vec![TreeNode {
                id: 0,
                chart: root,
                parent: None,
                is_final: false,
                note: None,
            }],
        }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Append a chart produced by blowing up `center` in `parent`; returns
    /// the new node's id.
    pub fn insert_child(&mut self, parent: usize, center: &Center, child: ChildChart) -> usize {
        let id = self.nodes.len();
        let parent_ring = self.nodes[parent].chart.ring.clone();
        self.nodes.push(TreeNode {
            id,
            chart: child.chart,
            parent: Some(ParentLink {
                node: parent,
                chart_var: child.chart_var,
                center_vars: center.vars().to_vec(),
                point: center.point().to_vec(),
                center_dim: center.dimension(&parent_ring),
            }),
            is_final: false,
            note: None,
        });
        id
    }

    pub fn set_final(&mut self, id: usize, is_final: bool) {
        self.nodes[id].is_final = is_final;
    }

    pub fn set_note(&mut self, id: usize, note: impl Into<String>) {
        self.nodes[id].note = Some(note.into());
    }

    pub fn children(&self, id: usize) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| n.parent.as_ref().is_some_and(|p| p.node == id))
            .map(|n| n.id)
            .collect()
    }

    pub fn final_ids(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| n.is_final)
            .map(|n| n.id)
            .collect()
    }

    /// The leaves of the tree in id order.
    pub fn leaf_ids(&self) -> Vec<usize> {
        let mut has_child = vec![false; self.nodes.len()];
        for n in &self.nodes {
            if let Some(p) = &n.parent {
                has_child[p.node] = true;
            }
        }
        (0..self.nodes.len()).filter(|&i| !has_child[i]).collect()
    }

    /// Exceptional divisors of a chart grouped by the step that created them.
    pub fn divisor_table(&self, id: usize) -> DivisorTable {
        collect_divisors(&self.nodes[id].chart)
    }

    /// The coefficient-free shape of the tree, used to compare runs over
    /// different ground fields: parent links, centers, finality, divisor
    /// variables, and the monomial supports of all ideal generators.
    pub fn skeleton(&self) -> TreeSkeleton {
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                let ring = &n.chart.ring;
                let parent = n.parent.as_ref().map(|p| {
                    let parent_ring = &self.nodes[p.node].chart.ring;
                    ParentSkeleton {
                        node: p.node,
                        chart_var: parent_ring.name(p.chart_var).to_string(),
                        center_vars: p
                            .center_vars
                            .iter()
                            .map(|&v| parent_ring.name(v).to_string())
                            .collect(),
                    }
                });
                NodeSkeleton {
                    parent,
                    is_final: n.is_final,
                    variables: ring.names().to_vec(),
                    supports: n
                        .chart
                        .ideal
                        .iter()
                        .map(|f| f.terms().map(|(m, _)| m.0.clone()).collect())
                        .collect(),
                    exceptional: n
                        .chart
                        .exceptional
                        .iter()
                        .map(|d| (ring.name(d.var).to_string(), d.birth))
                        .collect(),
                }
            })
            .collect();
        TreeSkeleton { nodes }
    }

    /// Serialize to the canonical JSON form. The output is deterministic
    /// (field order is fixed, node order is id order) and lossless:
    /// [`ChartTree::from_json`] reconstructs an equal tree.
    pub fn to_json(&self) -> String {
        let doc = JsonTree::from_tree(self);
        serde_json::to_string_pretty(&doc).expect("tree serialization cannot fail")
    }

    /// Parse a tree previously written by [`ChartTree::to_json`].
    pub fn from_json(text: &str) -> Result<ChartTree> {
        let doc: JsonTree = serde_json::from_str(text)
            .map_err(|e| Error::MalformedTree(format!("invalid JSON: {e}")))?;
        doc.into_tree()
    }

    /// Graphviz DOT rendering: boxes labelled with the chart ideal, doubled
    /// borders on final charts, edges labelled with the center dimension.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph restree {\n");
        out.push_str("  node [shape=box, fontname=\"monospace\"];\n");
        for n in &self.nodes {
            let ideal = if n.chart.ideal.is_empty() {
                "0".to_string()
            } else {
                n.chart
                    .ideal
                    .iter()
                    .map(|f| f.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            };
            let mut label = format!("{}: {}", n.id, ideal);
            if let Some(note) = &n.note {
                let _ = write!(label, " [{note}]");
            }
            let label = label.replace('"', "\\\"");
            if n.is_final {
                let _ = writeln!(out, "  n{} [label=\"{}\", peripheries=2];", n.id, label);
            } else {
                let _ = writeln!(out, "  n{} [label=\"{}\"];", n.id, label);
            }
        }
        for n in &self.nodes {
            if let Some(p) = &n.parent {
                let _ = writeln!(
                    out,
                    "  n{} -> n{} [label=\"d={}\"];",
                    p.node, n.id, p.center_dim
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Exceptional divisors of one chart, grouped by birth step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorTable {
    pub by_birth: BTreeMap<u64, Vec<String>>,
}

impl DivisorTable {
    pub fn total(&self) -> usize {
        self.by_birth.values().map(Vec::len).sum()
    }
}

/// Group the exceptional divisors visible in `chart` by their birth step.
pub fn collect_divisors(chart: &Chart) -> DivisorTable {
    let mut by_birth: BTreeMap<u64, Vec<String>> = BTreeMap::new();
    for d in &chart.exceptional {
        by_birth
            .entry(d.birth)
            .or_default()
            .push(chart.ring.name(d.var).to_string());
    }
    for names in by_birth.values_mut() {
        names.sort();
    }
    DivisorTable { by_birth }
}

/// Field-independent shape of a resolution tree; equality of skeletons is
/// the statement that two runs performed the same combinatorial blow-ups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSkeleton {
    pub nodes: Vec<NodeSkeleton>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSkeleton {
    pub parent: Option<ParentSkeleton>,
    pub is_final: bool,
    pub variables: Vec<String>,
    /// Monomial supports of the ideal generators, coefficients forgotten.
    pub supports: Vec<BTreeSet<Vec<u32>>>,
    pub exceptional: Vec<(String, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentSkeleton {
    pub node: usize,
    pub chart_var: String,
    pub center_vars: Vec<String>,
}

// ---------------------------------------------------------------------------
// JSON document form. Polynomials and rationals travel as display strings,
// which the parser reads back exactly; variable names per node carry the
// primed coordinates introduced by each blow-up.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct JsonTree {
    characteristic: u64,
    nodes: Vec<JsonNode>,
}

#[derive(Serialize, Deserialize)]
struct JsonNode {
    id: usize,
    variables: Vec<String>,
    ideal: Vec<String>,
    exceptional: Vec<JsonDivisor>,
    images: Vec<String>,
    parent: Option<JsonParent>,
    #[serde(rename = "final")]
    is_final: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    note: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct JsonDivisor {
    var: String,
    birth: u64,
}

#[derive(Serialize, Deserialize)]
struct JsonParent {
    node: usize,
    chart_var: String,
    center: Vec<String>,
    point: Vec<String>,
    center_dim: u32,
}

impl JsonTree {
    fn from_tree(tree: &ChartTree) -> JsonTree {
        let characteristic = tree.root().chart.ring.field().characteristic();
        let nodes = tree
            .nodes
            .iter()
            .map(|n| {
                let ring = &n.chart.ring;
                let parent = n.parent.as_ref().map(|p| {
                    let parent_ring = &tree.nodes[p.node].chart.ring;
                    JsonParent {
                        node: p.node,
                        chart_var: parent_ring.name(p.chart_var).to_string(),
                        center: p
                            .center_vars
                            .iter()
                            .map(|&v| parent_ring.name(v).to_string())
                            .collect(),
                        point: p.point.iter().map(fmt_rational).collect(),
                        center_dim: p.center_dim,
                    }
                });
                JsonNode {
                    id: n.id,
                    variables: ring.names().to_vec(),
                    ideal: n.chart.ideal.iter().map(|f| f.to_string()).collect(),
                    exceptional: n
                        .chart
                        .exceptional
                        .iter()
                        .map(|d| JsonDivisor {
                            var: ring.name(d.var).to_string(),
                            birth: d.birth,
                        })
                        .collect(),
                    images: n.chart.images.iter().map(|f| f.to_string()).collect(),
                    parent,
                    is_final: n.is_final,
                    note: n.note.clone(),
                }
            })
            .collect();
        JsonTree {
            characteristic,
            nodes,
        }
    }

    fn into_tree(self) -> Result<ChartTree> {
        let field = FieldSpec::from_characteristic(self.characteristic)?;
        if self.nodes.is_empty() {
            return Err(Error::MalformedTree("tree has no nodes".into()));
        }
        let bad = |msg: String| Error::MalformedTree(msg);
        let mut rings: Vec<PolyRing> = Vec::with_capacity(self.nodes.len());
        let mut nodes: Vec<TreeNode> = Vec::with_capacity(self.nodes.len());
        for (i, jn) in self.nodes.iter().enumerate() {
            if jn.id != i {
                return Err(bad(format!("node ids must be dense, got {} at {i}", jn.id)));
            }
            let ring = PolyRing::new(field, jn.variables.clone())
                .map_err(|e| bad(format!("node {i}: {e}")))?;
            let parse_all = |sources: &[String]| -> Result<Vec<_>> {
                sources
                    .iter()
                    .map(|src| {
                        parse_in_ring(&ring, src).map_err(|e| bad(format!("node {i}: {e}")))
                    })
                    .collect()
            };
            let ideal = parse_all(&jn.ideal)?;
            let images = parse_all(&jn.images)?;
            let exceptional = jn
                .exceptional
                .iter()
                .map(|d| {
                    ring.var_index(&d.var)
                        .map(|var| ExceptionalDivisor {
                            var,
                            birth: d.birth,
                        })
                        .ok_or_else(|| bad(format!("node {i}: unknown divisor `{}`", d.var)))
                })
                .collect::<Result<Vec<_>>>()?;
            let parent = match &jn.parent {
                None => {
                    if i != 0 {
                        return Err(bad(format!("non-root node {i} has no parent")));
                    }
                    None
                }
                Some(jp) => {
                    if i == 0 {
                        return Err(bad("root node has a parent".into()));
                    }
                    if jp.node >= i {
                        return Err(bad(format!(
                            "node {i}: parent {} does not precede it",
                            jp.node
                        )));
                    }
                    let parent_ring = &rings[jp.node];
                    let look = |name: &str| {
                        parent_ring.var_index(name).ok_or_else(|| {
                            bad(format!("node {i}: `{name}` not in parent ring"))
                        })
                    };
                    let chart_var = look(&jp.chart_var)?;
                    let center_vars = jp
                        .center
                        .iter()
                        .map(|n| look(n))
                        .collect::<Result<Vec<_>>>()?;
                    if !center_vars.contains(&chart_var) {
                        return Err(bad(format!(
                            "node {i}: chart variable `{}` is not in the center",
                            jp.chart_var
                        )));
                    }
                    if jp.point.len() != center_vars.len() {
                        return Err(bad(format!(
                            "node {i}: center has {} variables but {} point coordinates",
                            center_vars.len(),
                            jp.point.len()
                        )));
                    }
                    let point = jp
                        .point
                        .iter()
                        .map(|s| {
                            BigRational::from_str(s).map_err(|_| {
                                bad(format!("node {i}: bad coordinate `{s}`"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Some(ParentLink {
                        node: jp.node,
                        chart_var,
                        center_vars,
                        point,
                        center_dim: jp.center_dim,
                    })
                }
            };
            nodes.push(TreeNode {
                id: i,
                chart: Chart {
                    ring: ring.clone(),
                    ideal,
                    exceptional,
                    images,
                },
                parent,
                is_final: jn.is_final,
                note: jn.note.clone(),
            });
            rings.push(ring);
        }
        Ok(ChartTree { nodes })
    }
}

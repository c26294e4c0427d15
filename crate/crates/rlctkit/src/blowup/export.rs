//! DOT and JSON exporters for blow-up trees.

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::BlowupTree;
use crate::parse::{outer_to_json, polynomial_to_json};
use crate::rational::Nat;

fn nat_json(n: &Nat) -> Value {
    match n.to_u64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

/// One DOT node per blow-up node: label = inner polynomial + outer monomial
/// + depth; edge label = chart substitution.
pub fn tree_to_dot(tree: &BlowupTree) -> String {
    let mut out = String::from("digraph blowup {\n  node [shape=box];\n");
    for (id, node) in tree.nodes() {
        let label = format!(
            "f = {}\\ng = {}\\ndepth {}",
            node.inner, node.outer, node.depth
        );
        out.push_str(&format!(
            "  n{id} [label=\"{}\"];\n",
            label.replace('"', "\\\"")
        ));
    }
    for (id, node) in tree.nodes() {
        for &c in &node.children {
            let chart = tree
                .node(c)
                .chart
                .map(|l| l.to_string())
                .unwrap_or_default();
            out.push_str(&format!("  n{id} -> n{c} [label=\"{chart}\"];\n"));
        }
    }
    out.push_str("}\n");
    out
}

/// Full node records, including cumulative blow matrices and counters.
pub fn tree_to_json(tree: &BlowupTree) -> Value {
    let nodes: Vec<Value> = tree
        .nodes()
        .map(|(id, node)| {
            let poly = polynomial_to_json(&node.inner.to_general())
                .unwrap_or_else(|_| json!(node.inner.to_string()));
            let blow: Vec<Vec<Value>> = node
                .blow
                .rows()
                .iter()
                .map(|r| r.iter().map(nat_json).collect())
                .collect();
            json!({
                "id": id,
                "parent": node.parent,
                "depth": node.depth,
                "chart": node.chart.map(|l| json!({"i": l.i + 1, "j": l.j + 1, "text": l.to_string()})),
                "inner": poly,
                "inner_text": node.inner.to_string(),
                "outer": outer_to_json(&node.outer),
                "blow": blow,
                "counters": [node.counters.0, node.counters.1],
                "leaf": node.children.is_empty(),
            })
        })
        .collect();
    json!({
        "root": 0,
        "node_count": tree.len(),
        "leaf_count": tree.leaves().len(),
        "depth": tree.depth(),
        "nodes": nodes,
    })
}

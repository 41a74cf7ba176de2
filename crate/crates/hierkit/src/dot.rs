//! Graphviz DOT export with deterministic ordering.

use std::collections::BTreeSet;

use crate::graph::{edge, Edge, Graph, NodeId};
use crate::tree::RootedTree;

/// Optional emphasis sets rendered with fill/bold attributes.
#[derive(Debug, Clone, Default)]
pub struct Highlight {
    pub nodes: BTreeSet<NodeId>,
    pub edges: BTreeSet<Edge>,
}

/// Renders an undirected graph. Nodes ascending, edges in normalized
/// (min, max) order, so equal inputs give byte-equal output.
pub fn graph_to_dot(graph: &Graph, highlight: Option<&Highlight>) -> String {
    let mut out = String::from("graph G {\n");
    for v in graph.nodes() {
        let mut attrs = Vec::new();
        if let Some(map) = graph.node_attrs(v) {
            if let Some(label) = map.get("label") {
                attrs.push(format!("label=\"{}\"", escape(label)));
            }
        }
        if highlight.is_some_and(|h| h.nodes.contains(&v)) {
            attrs.push("style=filled".to_string());
            attrs.push("fillcolor=lightblue".to_string());
        }
        if attrs.is_empty() {
            out.push_str(&format!("  {v};\n"));
        } else {
            out.push_str(&format!("  {v} [{}];\n", attrs.join(", ")));
        }
    }
    for ((u, v), w) in graph.edges() {
        let mut attrs = vec![format!("label=\"{w}\"")];
        if highlight.is_some_and(|h| h.edges.contains(&edge(u, v))) {
            attrs.push("penwidth=2.5".to_string());
            attrs.push("color=blue".to_string());
        }
        out.push_str(&format!("  {u} -- {v} [{}];\n", attrs.join(", ")));
    }
    out.push_str("}\n");
    out
}

/// Renders a rooted tree as a digraph, arcs parent -> child.
pub fn tree_to_dot(tree: &RootedTree, highlight: Option<&Highlight>) -> String {
    let mut out = String::from("digraph T {\n");
    for v in tree.nodes() {
        let mut attrs = Vec::new();
        if v == tree.root {
            attrs.push("shape=doublecircle".to_string());
        }
        if let Some(w) = tree.node_weight.get(&v) {
            attrs.push(format!("label=\"{v} ({w})\""));
        }
        if highlight.is_some_and(|h| h.nodes.contains(&v)) {
            attrs.push("style=filled".to_string());
            attrs.push("fillcolor=lightblue".to_string());
        }
        if attrs.is_empty() {
            out.push_str(&format!("  {v};\n"));
        } else {
            out.push_str(&format!("  {v} [{}];\n", attrs.join(", ")));
        }
    }
    for (&c, &p) in &tree.parent {
        let mut attrs = Vec::new();
        if let Some(w) = tree.arc_weight.get(&c) {
            attrs.push(format!("label=\"{w}\""));
        }
        if highlight.is_some_and(|h| h.edges.contains(&edge(p, c))) {
            attrs.push("penwidth=2.5".to_string());
            attrs.push("color=blue".to_string());
        }
        if attrs.is_empty() {
            out.push_str(&format!("  {p} -> {c};\n"));
        } else {
            out.push_str(&format!("  {p} -> {c} [{}];\n", attrs.join(", ")));
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Rat;

    #[test]
    fn empty_graph_header_only() {
        assert_eq!(graph_to_dot(&Graph::new(), None), "graph G {\n}\n");
    }

    #[test]
    fn single_edge() {
        let mut g = Graph::with_nodes([1, 2]);
        g.add_edge(2, 1, Rat::parse("1.5").unwrap()).unwrap();
        let dot = graph_to_dot(&g, None);
        assert!(dot.contains("1 -- 2 [label=\"1.5\"];"));
        assert_eq!(dot.matches("--").count(), 1);
    }

    #[test]
    fn deterministic_output() {
        let mut g = Graph::with_nodes([3, 1, 2]);
        g.add_edge(3, 1, Rat::ONE).unwrap();
        g.add_edge(2, 3, Rat::ONE).unwrap();
        assert_eq!(graph_to_dot(&g, None), graph_to_dot(&g.clone(), None));
    }
}

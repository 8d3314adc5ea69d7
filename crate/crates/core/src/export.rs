//! Graph exports: Graphviz DOT and canonical JSON.
//!
//! Output is deterministic byte for byte: nodes in id order, edges in
//! (src, dst, kind) order, JSON keys sorted, two-space pretty printing,
//! trailing newline. The JSON layout is documented in
//! `docs/graph-schema.md`.

use serde::{Deserialize, Serialize};

use crate::ast::{MethodAst, StatementKind};
use crate::error::{Error, Result};
use crate::graph::{DependencyGraph, Edge, EdgeKind};

// Field declaration order is alphabetical so the derived serializer emits
// sorted keys.

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct GraphDoc {
    edges: Vec<EdgeDoc>,
    nodes: Vec<NodeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct EdgeDoc {
    dst: usize,
    kind: EdgeKind,
    src: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct NodeDoc {
    id: usize,
    kind: StatementKind,
    line: usize,
    text: String,
}

/// Renders the graph as canonical JSON.
pub fn to_json(graph: &DependencyGraph, method: &MethodAst) -> String {
    let doc = GraphDoc {
        edges: graph
            .edges()
            .map(|e| EdgeDoc {
                dst: e.dst,
                kind: e.kind,
                src: e.src,
            })
            .collect(),
        nodes: method
            .statements
            .iter()
            .map(|node| NodeDoc {
                id: node.id,
                kind: node.kind,
                line: node.line,
                text: node.text.clone(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("graph document serializes");
    out.push('\n');
    out
}

/// Parses a graph JSON document back into a [`DependencyGraph`].
pub fn parse_graph_json(text: &str) -> Result<DependencyGraph> {
    let doc: GraphDoc =
        serde_json::from_str(text).map_err(|e| Error::InvalidGraph(e.to_string()))?;
    for (rank, node) in doc.nodes.iter().enumerate() {
        if node.id != rank {
            return Err(Error::InvalidGraph(format!(
                "node ids must be dense and ordered, found {} at position {}",
                node.id, rank
            )));
        }
    }
    DependencyGraph::from_parts(
        doc.nodes.len(),
        doc.edges.iter().map(|e| Edge {
            src: e.src,
            dst: e.dst,
            kind: e.kind,
        }),
    )
}

/// Renders the graph in Graphviz dialect. Control edges are solid, data
/// edges dashed; node labels are the statement texts.
pub fn to_dot(graph: &DependencyGraph, method: &MethodAst) -> String {
    let mut out = String::from("digraph dependencies {\n");
    out.push_str("    rankdir=TB;\n");
    out.push_str("    node [shape=box];\n");
    for node in &method.statements {
        out.push_str(&format!(
            "    n{} [label=\"{}\"];\n",
            node.id,
            escape_label(&node.text)
        ));
    }
    for edge in graph.edges() {
        let style = match edge.kind {
            EdgeKind::Control => "solid",
            EdgeKind::Data => "dashed",
        };
        out.push_str(&format!(
            "    n{} -> n{} [style={}];\n",
            edge.src, edge.dst, style
        ));
    }
    out.push_str("}\n");
    out
}

fn escape_label(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::parser::parse_method;

    #[test]
    fn empty_body_method_renders_one_node_no_edges() {
        let method = parse_method("void m() { }").unwrap();
        let graph = build_graph(&method);
        let dot = to_dot(&graph, &method);
        assert!(dot.contains("n0 [label=\"void m()\"];"));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn three_node_chain_renders_three_edges() {
        let method = parse_method("void m() { int x = 5; int z = x; }").unwrap();
        let graph = build_graph(&method);
        let dot = to_dot(&graph, &method);
        assert_eq!(dot.matches("[style=solid]").count(), 2);
        assert_eq!(dot.matches("[style=dashed]").count(), 1);
        let json = to_json(&graph, &method);
        let parsed = parse_graph_json(&json).unwrap();
        assert_eq!(parsed, graph);
        assert_eq!(parsed.edge_count(), 3);
    }

    #[test]
    fn one_node_graph_serializes_with_empty_edges() {
        let method = parse_method("void m() { }").unwrap();
        let graph = build_graph(&method);
        let json = to_json(&graph, &method);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["edges"].as_array().unwrap().len(), 0);
        assert_eq!(value["nodes"].as_array().unwrap().len(), 1);
        assert_eq!(value["nodes"][0]["kind"], "prototype");
    }

    #[test]
    fn json_keys_are_sorted() {
        let method = parse_method("void m() { int x = 5; int z = x; }").unwrap();
        let graph = build_graph(&method);
        let json = to_json(&graph, &method);
        // serde_json::Value maps are ordered, so re-serializing a parsed
        // document sorts its keys; canonical output must already be sorted.
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let mut resorted = serde_json::to_string_pretty(&value).unwrap();
        resorted.push('\n');
        assert_eq!(json, resorted);
    }

    #[test]
    fn quotes_in_labels_are_escaped() {
        let method = parse_method("void m(Writer out) { out.print(\"hi\"); }").unwrap();
        let graph = build_graph(&method);
        let dot = to_dot(&graph, &method);
        assert!(dot.contains("out.print(\\\"hi\\\")"));
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(matches!(parse_graph_json("{"), Err(Error::InvalidGraph(_))));
        let gap = r#"{"edges":[],"nodes":[{"id":1,"kind":"assignment","line":1,"text":"x = 1;"}]}"#;
        assert!(matches!(parse_graph_json(gap), Err(Error::InvalidGraph(_))));
    }
}

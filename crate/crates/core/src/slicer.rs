//! Backward slicing over the dependency graph.
//!
//! Slicing is graph reachability: reverse every edge of the dependency
//! graph, then walk breadth-first from each sink statement. Everything
//! reached impacts the value written to the output stream, directly or
//! through intermediate statements.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::ast::{MethodAst, StatementKind, StatementNode};
use crate::error::{Error, Result};
use crate::graph::{build_graph_with, DataflowMode, DependencyGraph, Edge, NodeId};

/// Method names that write their arguments to the stream.
pub const DEFAULT_SINK_METHODS: &[&str] = &["print", "println", "write", "append"];

/// Type names recognized as stream/writer wrappers when constructed around
/// an existing stream variable.
pub const DEFAULT_WRAPPER_TYPES: &[&str] = &[
    "BufferedStream",
    "BufferedWriter",
    "ObjectOutputStream",
    "PrintWriter",
    "Writer",
];

pub fn default_sink_methods() -> BTreeSet<String> {
    DEFAULT_SINK_METHODS.iter().map(|s| s.to_string()).collect()
}

pub fn default_wrapper_types() -> BTreeSet<String> {
    DEFAULT_WRAPPER_TYPES.iter().map(|s| s.to_string()).collect()
}

/// What to slice on: an output-stream variable plus the method names that
/// count as writes to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SliceCriterion {
    pub sink_methods: BTreeSet<String>,
    pub stream_variable: String,
}

impl SliceCriterion {
    pub fn new(stream_variable: impl Into<String>) -> Self {
        SliceCriterion {
            sink_methods: default_sink_methods(),
            stream_variable: stream_variable.into(),
        }
    }

    pub fn with_sinks(
        stream_variable: impl Into<String>,
        sink_methods: impl IntoIterator<Item = String>,
    ) -> Self {
        let sink_methods: BTreeSet<String> = sink_methods.into_iter().collect();
        SliceCriterion {
            sink_methods: if sink_methods.is_empty() {
                default_sink_methods()
            } else {
                sink_methods
            },
            stream_variable: stream_variable.into(),
        }
    }

    /// The stream variable must name a parameter or declared variable.
    pub fn validate(&self, method: &MethodAst) -> Result<()> {
        if method.declared_variables().contains(&self.stream_variable) {
            Ok(())
        } else {
            Err(Error::UnknownVariable(self.stream_variable.clone()))
        }
    }
}

/// A computed slice: the sink statements plus everything reachable from
/// them in the transpose graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    pub criterion: SliceCriterion,
    pub sink_nodes: BTreeSet<NodeId>,
    pub nodes: BTreeSet<NodeId>,
    pub rendered_text: String,
    pub warnings: Vec<String>,
}

/// Serialized form of a slice; see `docs/slice-schema.md`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SliceDoc {
    pub criterion: SliceCriterion,
    pub nodes: BTreeSet<NodeId>,
    pub sink_nodes: BTreeSet<NodeId>,
    pub warnings: Vec<String>,
}

impl Slice {
    pub fn to_doc(&self) -> SliceDoc {
        SliceDoc {
            criterion: self.criterion.clone(),
            nodes: self.nodes.clone(),
            sink_nodes: self.sink_nodes.clone(),
            warnings: self.warnings.clone(),
        }
    }

    /// Canonical JSON: sorted keys, two-space indent, trailing newline.
    pub fn to_json(&self) -> String {
        self.to_doc().to_json()
    }
}

impl SliceDoc {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("slice document serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidGraph(e.to_string()))
    }
}

/// Reverses every edge; nodes are unchanged. Runs in O(|V| + |E|).
pub fn transpose(graph: &DependencyGraph) -> DependencyGraph {
    let reversed = graph.edges().map(|e| Edge {
        src: e.dst,
        dst: e.src,
        kind: e.kind,
    });
    DependencyGraph::from_parts(graph.node_count(), reversed)
        .expect("transposing cannot violate graph invariants")
}

/// Breadth-first reachability from `start`, which is always part of the
/// result. Fan-out is visited in ascending (dst, kind) order.
pub fn reachable(graph: &DependencyGraph, start: NodeId) -> Result<BTreeSet<NodeId>> {
    if !graph.contains_node(start) {
        return Err(Error::UnknownNode(start));
    }
    let mut nodes = BTreeSet::new();
    let mut queue = VecDeque::new();
    queue.push_back(start);
    nodes.insert(start);
    while let Some(current) = queue.pop_front() {
        for &(next, _) in graph.fan_out(current) {
            if nodes.insert(next) {
                queue.push_back(next);
            }
        }
    }
    Ok(nodes)
}

/// Variables that denote the output stream: the stream variable itself,
/// anything constructed as a recognized wrapper around a member of the
/// set, and any plain copy of a member. Iterates the two rules over the
/// statements in textual order until a fixpoint.
pub fn resolve_output_aliases(method: &MethodAst, stream_variable: &str) -> Result<BTreeSet<String>> {
    resolve_output_aliases_with(method, stream_variable, &default_wrapper_types())
}

pub fn resolve_output_aliases_with(
    method: &MethodAst,
    stream_variable: &str,
    wrapper_types: &BTreeSet<String>,
) -> Result<BTreeSet<String>> {
    if !method.declared_variables().contains(stream_variable) {
        return Err(Error::UnknownVariable(stream_variable.to_string()));
    }
    let mut aliases: BTreeSet<String> = [stream_variable.to_string()].into_iter().collect();
    loop {
        let mut changed = false;
        for node in &method.statements {
            if let Some(added) = alias_introduced_by(node, &aliases, wrapper_types) {
                changed |= aliases.insert(added);
            }
        }
        if !changed {
            return Ok(aliases);
        }
    }
}

fn alias_introduced_by(
    node: &StatementNode,
    aliases: &BTreeSet<String>,
    wrapper_types: &BTreeSet<String>,
) -> Option<String> {
    let target = match node.kind {
        StatementKind::Declaration => node.declares.clone(),
        StatementKind::Assignment => node.writes.iter().next().cloned(),
        _ => None,
    }?;
    let wraps_member = node
        .constructed_wrapper_of
        .as_ref()
        .zip(node.constructed_type.as_ref())
        .is_some_and(|(wrapped, ty)| aliases.contains(wrapped) && wrapper_types.contains(ty));
    let copies_member = node
        .copy_of
        .as_ref()
        .is_some_and(|source| aliases.contains(source));
    (wraps_member || copies_member).then_some(target)
}

/// Invocation statements whose receiver denotes the output stream and
/// whose method name is one of the criterion's sink methods. Argument
/// count is irrelevant.
pub fn find_sinks(method: &MethodAst, criterion: &SliceCriterion) -> Result<BTreeSet<NodeId>> {
    let aliases = resolve_output_aliases(method, &criterion.stream_variable)?;
    Ok(method
        .statements
        .iter()
        .filter(|node| node.kind == StatementKind::Invocation)
        .filter(|node| {
            node.receiver
                .as_ref()
                .is_some_and(|receiver| aliases.contains(receiver))
        })
        .filter(|node| {
            node.called_method
                .as_ref()
                .is_some_and(|m| criterion.sink_methods.contains(m))
        })
        .map(|node| node.id)
        .collect())
}

/// Computes the backward slice of `method` for `criterion` with default
/// data-flow handling.
pub fn compute_slice(method: &MethodAst, criterion: &SliceCriterion) -> Result<Slice> {
    compute_slice_with(method, criterion, DataflowMode::Paper)
}

pub fn compute_slice_with(
    method: &MethodAst,
    criterion: &SliceCriterion,
    mode: DataflowMode,
) -> Result<Slice> {
    criterion.validate(method)?;
    let graph = build_graph_with(method, mode);
    let transposed = transpose(&graph);
    let sink_nodes = find_sinks(method, criterion)?;

    let mut nodes = BTreeSet::new();
    for &sink in &sink_nodes {
        nodes.extend(reachable(&transposed, sink)?);
    }

    let mut warnings = Vec::new();
    if sink_nodes.is_empty() {
        warnings.push(format!(
            "no sink statements found for stream variable '{}'",
            criterion.stream_variable
        ));
    }

    let rendered_text = render_nodes(&nodes, method);
    Ok(Slice {
        criterion: criterion.clone(),
        sink_nodes,
        nodes,
        rendered_text,
        warnings,
    })
}

/// Renders the slice as source text: statements in id order with original
/// texts, control statements re-opened with braces around their included
/// children, excluded statements omitted.
pub fn render_slice(slice: &Slice, method: &MethodAst) -> String {
    render_nodes(&slice.nodes, method)
}

fn render_nodes(included: &BTreeSet<NodeId>, method: &MethodAst) -> String {
    if !included.contains(&0) {
        return String::new();
    }
    let mut out = String::new();
    let prototype = method.prototype();
    out.push_str(&prototype.text);
    out.push_str(" {\n");
    render_children(&prototype.children, included, method, 1, &mut out);
    out.push_str("}\n");
    out
}

fn render_children(
    children: &[NodeId],
    included: &BTreeSet<NodeId>,
    method: &MethodAst,
    depth: usize,
    out: &mut String,
) {
    for &child in children {
        if included.contains(&child) {
            render_statement(method.node(child), included, method, depth, out);
        }
    }
}

fn render_statement(
    node: &StatementNode,
    included: &BTreeSet<NodeId>,
    method: &MethodAst,
    depth: usize,
    out: &mut String,
) {
    let indent = "    ".repeat(depth);
    if !node.kind.is_control() {
        out.push_str(&indent);
        out.push_str(&node.text);
        out.push('\n');
        return;
    }

    let split = node.else_start.unwrap_or(node.children.len());
    let (then_children, else_children) = node.children.split_at(split);

    out.push_str(&indent);
    out.push_str(&node.text);
    out.push_str(" {\n");
    render_children(then_children, included, method, depth + 1, out);
    out.push_str(&indent);
    out.push('}');

    // Re-open the else branch when it contributes statements, or when the
    // source had an empty else block (so a full-tree render round-trips).
    let render_else = node.else_start.is_some()
        && (else_children.is_empty() || else_children.iter().any(|id| included.contains(id)));
    if render_else {
        out.push_str(" else {\n");
        render_children(else_children, included, method, depth + 1, out);
        out.push_str(&indent);
        out.push('}');
    }
    out.push('\n');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EdgeKind};
    use crate::parser::parse_method;

    fn names(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn transpose_of_empty_graph_is_empty() {
        let graph = DependencyGraph::from_parts(3, []).unwrap();
        let transposed = transpose(&graph);
        assert_eq!(transposed.edge_count(), 0);
        assert_eq!(transposed.node_ids(), graph.node_ids());
    }

    #[test]
    fn transpose_reverses_a_single_edge() {
        let graph = DependencyGraph::from_parts(3, [Edge::data(1, 2)]).unwrap();
        let transposed = transpose(&graph);
        assert!(transposed.contains_edge(&Edge::data(2, 1)));
        assert_eq!(transposed.edge_count(), 1);
    }

    #[test]
    fn transpose_preserves_edge_kinds() {
        let graph =
            DependencyGraph::from_parts(3, [Edge::control(0, 1), Edge::data(0, 1)]).unwrap();
        let transposed = transpose(&graph);
        assert!(transposed.contains_edge(&Edge {
            src: 1,
            dst: 0,
            kind: EdgeKind::Control
        }));
        assert!(transposed.contains_edge(&Edge {
            src: 1,
            dst: 0,
            kind: EdgeKind::Data
        }));
    }

    #[test]
    fn isolated_node_reaches_itself() {
        let graph = DependencyGraph::from_parts(4, []).unwrap();
        assert_eq!(reachable(&graph, 2).unwrap(), BTreeSet::from([2]));
    }

    #[test]
    fn chain_is_fully_reachable() {
        let graph =
            DependencyGraph::from_parts(4, [Edge::data(3, 2), Edge::data(2, 1)]).unwrap();
        assert_eq!(reachable(&graph, 3).unwrap(), BTreeSet::from([1, 2, 3]));
    }

    #[test]
    fn unknown_start_node_is_an_error() {
        let graph = DependencyGraph::from_parts(2, []).unwrap();
        assert_eq!(reachable(&graph, 7).unwrap_err(), Error::UnknownNode(7));
    }

    #[test]
    fn alias_set_starts_with_the_seed() {
        let method = parse_method("void m(PrintWriter out) { out.print(1); }").unwrap();
        assert_eq!(resolve_output_aliases(&method, "out").unwrap(), names(&["out"]));
    }

    #[test]
    fn wrapper_construction_extends_the_alias_set() {
        let method =
            parse_method("void m(Writer out) { PrintWriter w = new PrintWriter(out); }").unwrap();
        assert_eq!(
            resolve_output_aliases(&method, "out").unwrap(),
            names(&["out", "w"])
        );
    }

    #[test]
    fn copies_of_aliases_are_aliases() {
        let source = "void m(Writer out, PrintWriter w, PrintWriter v) { w = new PrintWriter(out); v = w; }";
        let method = parse_method(source).unwrap();
        assert_eq!(
            resolve_output_aliases(&method, "out").unwrap(),
            names(&["out", "v", "w"])
        );
    }

    #[test]
    fn unrecognized_wrapper_types_do_not_alias() {
        let method =
            parse_method("void m(Writer out) { StringBuilder b = new StringBuilder(out); }")
                .unwrap();
        assert_eq!(resolve_output_aliases(&method, "out").unwrap(), names(&["out"]));
    }

    #[test]
    fn unknown_stream_variable_is_an_error() {
        let method = parse_method("void m(Writer out) { }").unwrap();
        assert_eq!(
            resolve_output_aliases(&method, "nosuch").unwrap_err(),
            Error::UnknownVariable("nosuch".to_string())
        );
    }

    #[test]
    fn direct_sink_is_found() {
        let method =
            parse_method("void m(PrintWriter out, int x) { out.print(x); }").unwrap();
        let sinks = find_sinks(&method, &SliceCriterion::new("out")).unwrap();
        assert_eq!(sinks, BTreeSet::from([1]));
    }

    #[test]
    fn other_receivers_are_not_sinks() {
        let source = "void m(PrintWriter out, PrintWriter other, int x) { other.print(x); }";
        let method = parse_method(source).unwrap();
        let sinks = find_sinks(&method, &SliceCriterion::new("out")).unwrap();
        assert!(sinks.is_empty());
    }

    #[test]
    fn wrapped_write_is_a_sink() {
        let source = "void m(Writer out, String h) { PrintWriter w = new PrintWriter(out); w.write(h); }";
        let method = parse_method(source).unwrap();
        let sinks = find_sinks(&method, &SliceCriterion::new("out")).unwrap();
        assert_eq!(sinks, BTreeSet::from([2]));
    }

    #[test]
    fn flush_and_close_are_not_sinks() {
        let method =
            parse_method("void m(PrintWriter out) { out.flush(); out.close(); }").unwrap();
        let sinks = find_sinks(&method, &SliceCriterion::new("out")).unwrap();
        assert!(sinks.is_empty());
    }

    #[test]
    fn straight_line_slice_contains_the_data_chain() {
        let source = "void m(PrintWriter out, int y) { int x = y; out.print(x); }";
        let method = parse_method(source).unwrap();
        let slice = compute_slice(&method, &SliceCriterion::new("out")).unwrap();
        assert_eq!(slice.sink_nodes, BTreeSet::from([2]));
        assert_eq!(slice.nodes, BTreeSet::from([0, 1, 2]));
        assert!(slice.warnings.is_empty());
    }

    #[test]
    fn conditional_sink_pulls_in_the_condition() {
        let source = "void m(PrintWriter out, int c, int x) { if (c < 1) { out.print(x); } }";
        let method = parse_method(source).unwrap();
        let slice = compute_slice(&method, &SliceCriterion::new("out")).unwrap();
        assert!(slice.nodes.contains(&1), "if node must be in the slice");
        assert_eq!(slice.nodes, BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn no_sinks_yields_empty_slice_with_warning() {
        let method = parse_method("void m(PrintWriter out, int x) { int y = x; }").unwrap();
        let slice = compute_slice(&method, &SliceCriterion::new("out")).unwrap();
        assert!(slice.sink_nodes.is_empty());
        assert!(slice.nodes.is_empty());
        assert_eq!(slice.warnings.len(), 1);
        assert!(slice.warnings[0].contains("out"));
        assert_eq!(slice.rendered_text, "");
    }

    #[test]
    fn full_slice_renders_the_whole_method() {
        let source = "void m(PrintWriter out, int x) {\n    int y = x;\n    out.print(y);\n}\n";
        let method = parse_method(source).unwrap();
        let slice = compute_slice(&method, &SliceCriterion::new("out")).unwrap();
        assert_eq!(slice.nodes.len(), method.node_count());
        assert_eq!(slice.rendered_text, source);
    }

    #[test]
    fn excluded_statement_is_omitted_from_rendering() {
        let source = "void m(PrintWriter out, int x) {\n    int y = x;\n    int dead = x + 2;\n    out.print(y);\n}\n";
        let method = parse_method(source).unwrap();
        let slice = compute_slice(&method, &SliceCriterion::new("out")).unwrap();
        assert!(!slice.nodes.contains(&2));
        assert_eq!(
            slice.rendered_text,
            "void m(PrintWriter out, int x) {\n    int y = x;\n    out.print(y);\n}\n"
        );
    }

    #[test]
    fn conditional_sink_renders_with_braces() {
        let source = "void m(PrintWriter out, int c, int x) { if (c < 1) { out.print(x); } }";
        let method = parse_method(source).unwrap();
        let slice = compute_slice(&method, &SliceCriterion::new("out")).unwrap();
        assert_eq!(
            slice.rendered_text,
            "void m(PrintWriter out, int c, int x) {\n    if (c < 1) {\n        out.print(x);\n    }\n}\n"
        );
    }

    #[test]
    fn else_branch_renders_only_when_it_contributes() {
        let source = "void m(PrintWriter out, int c, int x, int y) { if (c < 1) { x = 1; } else { y = 2; } out.print(x); }";
        let method = parse_method(source).unwrap();
        let slice = compute_slice(&method, &SliceCriterion::new("out")).unwrap();
        // y = 2 does not feed the sink; the else block disappears.
        assert!(!slice.nodes.contains(&3));
        assert_eq!(
            slice.rendered_text,
            "void m(PrintWriter out, int c, int x, int y) {\n    if (c < 1) {\n        x = 1;\n    }\n    out.print(x);\n}\n"
        );
    }

    #[test]
    fn sink_inside_else_keeps_the_else_branch() {
        let source = "void m(PrintWriter out, int c, int x) { if (c < 1) { x = 1; } else { out.print(x); } }";
        let method = parse_method(source).unwrap();
        let slice = compute_slice(&method, &SliceCriterion::new("out")).unwrap();
        assert_eq!(
            slice.rendered_text,
            "void m(PrintWriter out, int c, int x) {\n    if (c < 1) {\n    } else {\n        out.print(x);\n    }\n}\n"
        );
    }

    #[test]
    fn prototype_is_in_every_nonempty_slice() {
        let source = "void m(PrintWriter out) { out.println(7); }";
        let method = parse_method(source).unwrap();
        let slice = compute_slice(&method, &SliceCriterion::new("out")).unwrap();
        assert!(slice.nodes.contains(&0));
    }

    #[test]
    fn criterion_validation_rejects_unknown_variables() {
        let method = parse_method("void m(PrintWriter out) { }").unwrap();
        let err = compute_slice(&method, &SliceCriterion::new("nosuch")).unwrap_err();
        assert_eq!(err, Error::UnknownVariable("nosuch".to_string()));
    }

    #[test]
    fn slice_json_is_canonical() {
        let method =
            parse_method("void m(PrintWriter out, int x) { out.print(x); }").unwrap();
        let slice = compute_slice(&method, &SliceCriterion::new("out")).unwrap();
        let json = slice.to_json();
        let reparsed = SliceDoc::from_json(&json).unwrap();
        assert_eq!(reparsed, slice.to_doc());
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let mut resorted = serde_json::to_string_pretty(&value).unwrap();
        resorted.push('\n');
        assert_eq!(json, resorted);
    }

    #[test]
    fn graph_and_its_transpose_have_equal_edge_counts() {
        let source = "void m(int a, int b) { int c = a; if (a < b) { c = b; } }";
        let graph = build_graph(&parse_method(source).unwrap());
        assert_eq!(transpose(&graph).edge_count(), graph.edge_count());
    }
}

//! Statement dependency graph.
//!
//! Nodes mirror [`MethodAst`](crate::ast::MethodAst) statement ids. Edges
//! come in two kinds: control edges from the prototype to every other node
//! and from each control statement to its direct inner statements, and
//! data edges from a statement that writes a variable to every later
//! statement that reads it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ast::{MethodAst, StatementNode};
use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Control,
    Data,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn control(src: NodeId, dst: NodeId) -> Self {
        Edge {
            src,
            dst,
            kind: EdgeKind::Control,
        }
    }

    pub fn data(src: NodeId, dst: NodeId) -> Self {
        Edge {
            src,
            dst,
            kind: EdgeKind::Data,
        }
    }
}

/// How data edges are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DataflowMode {
    /// Single forward pass: every earlier writer of a variable links to
    /// every later reader. No kill filtering, no loop back-edges.
    #[default]
    Paper,
    /// Only the nearest (latest) earlier writer links to each reader.
    ReachingDefs,
    /// Forward pass plus back-edges between statements of the same loop
    /// region, so a write late in a loop body can feed the loop header or
    /// an earlier body statement.
    LoopAware,
}

impl DataflowMode {
    pub fn name(self) -> &'static str {
        match self {
            DataflowMode::Paper => "paper",
            DataflowMode::ReachingDefs => "reaching-defs",
            DataflowMode::LoopAware => "loop-aware",
        }
    }
}

/// Directed labeled graph over statement ids; also used for its transpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    node_ids: Vec<NodeId>,
    edges: BTreeSet<Edge>,
    /// Fan-out per node, sorted by (dst, kind).
    adjacency: Vec<Vec<(NodeId, EdgeKind)>>,
}

impl DependencyGraph {
    /// Builds a graph from raw parts, enforcing the structural invariants:
    /// dense node ids, in-range endpoints, no self-edges.
    pub fn from_parts(node_count: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for edge in edges {
            if edge.src >= node_count || edge.dst >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) outside node range 0..{}",
                    edge.src, edge.dst, node_count
                )));
            }
            if edge.src == edge.dst {
                return Err(Error::InvalidGraph(format!("self-edge on node {}", edge.src)));
            }
            set.insert(edge);
        }
        Ok(Self::from_validated(node_count, set))
    }

    fn from_validated(node_count: usize, edges: BTreeSet<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        for edge in &edges {
            adjacency[edge.src].push((edge.dst, edge.kind));
        }
        // BTreeSet iteration is (src, dst, kind)-ordered, so each fan-out
        // list is already sorted by (dst, kind).
        DependencyGraph {
            node_ids: (0..node_count).collect(),
            edges,
            adjacency,
        }
    }

    pub fn node_ids(&self) -> &[NodeId] {
        &self.node_ids
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, edge: &Edge) -> bool {
        self.edges.contains(edge)
    }

    /// Fan-out of `node` in ascending (dst, kind) order.
    pub fn fan_out(&self, node: NodeId) -> &[(NodeId, EdgeKind)] {
        &self.adjacency[node]
    }

    pub fn contains_node(&self, node: NodeId) -> bool {
        node < self.node_ids.len()
    }
}

/// Builds the dependency graph of a method with default (forward-pass)
/// data-flow handling.
pub fn build_graph(method: &MethodAst) -> DependencyGraph {
    build_graph_with(method, DataflowMode::Paper)
}

/// Builds the dependency graph of a method under an explicit data-flow mode.
pub fn build_graph_with(method: &MethodAst, mode: DataflowMode) -> DependencyGraph {
    let node_count = method.node_count();
    let mut edges = BTreeSet::new();

    // Entry edges: the prototype reaches every other statement.
    for id in 1..node_count {
        edges.insert(Edge::control(0, id));
    }
    // Each control statement reaches its direct inner statements; its
    // ancestors reach deeper statements transitively.
    for node in &method.statements {
        if node.kind.is_control() {
            for &child in &node.children {
                edges.insert(Edge::control(node.id, child));
            }
        }
    }

    for (src, dst) in data_pairs(method, mode) {
        edges.insert(Edge::data(src, dst));
    }

    DependencyGraph::from_validated(node_count, edges)
}

/// Writer-to-later-reader pairs under default data-flow handling.
pub fn data_edges(method: &MethodAst) -> BTreeSet<(NodeId, NodeId)> {
    data_pairs(method, DataflowMode::Paper)
}

fn data_pairs(method: &MethodAst, mode: DataflowMode) -> BTreeSet<(NodeId, NodeId)> {
    let mut pairs = match mode {
        DataflowMode::Paper | DataflowMode::LoopAware => forward_pairs(method),
        DataflowMode::ReachingDefs => nearest_writer_pairs(method),
    };
    if mode == DataflowMode::LoopAware {
        pairs.extend(loop_back_pairs(method));
    }
    pairs
}

/// One pass in statement order: each statement links from every variable
/// writer recorded so far to itself, then records its own writes.
fn forward_pairs(method: &MethodAst) -> BTreeSet<(NodeId, NodeId)> {
    let mut pairs = BTreeSet::new();
    let mut writers: BTreeMap<&str, Vec<NodeId>> = BTreeMap::new();
    for node in &method.statements {
        for read in &node.reads {
            if let Some(sources) = writers.get(read.as_str()) {
                for &writer in sources {
                    pairs.insert((writer, node.id));
                }
            }
        }
        for write in &node.writes {
            writers.entry(write).or_default().push(node.id);
        }
    }
    pairs
}

/// Forward pass where a new write kills previous writers of the variable.
fn nearest_writer_pairs(method: &MethodAst) -> BTreeSet<(NodeId, NodeId)> {
    let mut pairs = BTreeSet::new();
    let mut latest: BTreeMap<&str, NodeId> = BTreeMap::new();
    for node in &method.statements {
        for read in &node.reads {
            if let Some(&writer) = latest.get(read.as_str()) {
                pairs.insert((writer, node.id));
            }
        }
        for write in &node.writes {
            latest.insert(write, node.id);
        }
    }
    pairs
}

/// Back-edges inside loop regions: within the statements of one loop
/// (header included), a later writer feeds an earlier reader.
fn loop_back_pairs(method: &MethodAst) -> BTreeSet<(NodeId, NodeId)> {
    let mut pairs = BTreeSet::new();
    for node in &method.statements {
        if !matches!(node.kind, crate::ast::StatementKind::While | crate::ast::StatementKind::For) {
            continue;
        }
        let mut region = vec![node.id];
        collect_descendants(method, node, &mut region);
        for &reader in &region {
            for &writer in &region {
                if writer > reader && intersects(&method.node(writer).writes, &method.node(reader).reads)
                {
                    pairs.insert((writer, reader));
                }
            }
        }
    }
    pairs
}

fn collect_descendants(method: &MethodAst, node: &StatementNode, into: &mut Vec<NodeId>) {
    for &child in &node.children {
        into.push(child);
        collect_descendants(method, method.node(child), into);
    }
}

fn intersects(a: &BTreeSet<String>, b: &BTreeSet<String>) -> bool {
    a.intersection(b).next().is_some()
}

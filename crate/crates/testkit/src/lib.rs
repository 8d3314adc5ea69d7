//! Independent oracles and seeded generators for the slicekit test suites.
//!
//! Everything here deliberately avoids the code paths it is used to check:
//! reachability is computed by boolean matrix squaring instead of BFS,
//! slice membership by exhaustive simple-path enumeration instead of
//! reachability, and data edges by brute-force pair enumeration instead of
//! the forward construction pass.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slicekit_core::ast::{MethodAst, StatementKind, StatementNode};
use slicekit_core::graph::{DependencyGraph, Edge, EdgeKind, NodeId};

// --- reachability oracles --------------------------------------------------

/// Transitive closure by repeated boolean matrix squaring:
/// `M ← M ∨ M·M` until a fixpoint. `closure[u][v]` is true iff a directed
/// path of length ≥ 1 exists from `u` to `v`.
pub fn matrix_closure(graph: &DependencyGraph) -> Vec<Vec<bool>> {
    let n = graph.node_count();
    let mut closure = vec![vec![false; n]; n];
    for edge in graph.edges() {
        closure[edge.src][edge.dst] = true;
    }
    loop {
        let mut next = closure.clone();
        for u in 0..n {
            for k in 0..n {
                if closure[u][k] {
                    for v in 0..n {
                        if closure[k][v] {
                            next[u][v] = true;
                        }
                    }
                }
            }
        }
        if next == closure {
            return closure;
        }
        closure = next;
    }
}

/// The reachable set of `start` per the closure, including `start` itself.
pub fn closure_row(closure: &[Vec<bool>], start: NodeId) -> BTreeSet<NodeId> {
    let mut row: BTreeSet<NodeId> = closure[start]
        .iter()
        .enumerate()
        .filter_map(|(v, &hit)| hit.then_some(v))
        .collect();
    row.insert(start);
    row
}

/// Every node lying on some simple path out of `start`, found by
/// depth-first enumeration with a cycle guard, plus `start` itself.
pub fn path_enumeration(graph: &DependencyGraph, start: NodeId) -> BTreeSet<NodeId> {
    fn walk(
        graph: &DependencyGraph,
        node: NodeId,
        on_path: &mut Vec<bool>,
        collected: &mut BTreeSet<NodeId>,
    ) {
        for &(next, _) in graph.fan_out(node) {
            if !on_path[next] {
                collected.insert(next);
                on_path[next] = true;
                walk(graph, next, on_path, collected);
                on_path[next] = false;
            }
        }
    }
    let mut collected = BTreeSet::from([start]);
    let mut on_path = vec![false; graph.node_count()];
    on_path[start] = true;
    walk(graph, start, &mut on_path, &mut collected);
    collected
}

/// Union of [`path_enumeration`] over several start nodes.
pub fn path_enumeration_union(
    graph: &DependencyGraph,
    starts: &BTreeSet<NodeId>,
) -> BTreeSet<NodeId> {
    let mut union = BTreeSet::new();
    for &start in starts {
        union.extend(path_enumeration(graph, start));
    }
    union
}

// --- graph-construction oracles ---------------------------------------------

/// Brute-force data-edge enumeration:
/// `{(i, j) | i < j, writes(i) ∩ reads(j) ≠ ∅}`.
pub fn brute_force_data_edges(method: &MethodAst) -> BTreeSet<(NodeId, NodeId)> {
    let mut pairs = BTreeSet::new();
    for writer in &method.statements {
        for reader in &method.statements {
            if writer.id < reader.id
                && writer.writes.intersection(&reader.reads).next().is_some()
            {
                pairs.insert((writer.id, reader.id));
            }
        }
    }
    pairs
}

/// The control edges the construction must produce: entry edges from node
/// 0 to every other node, plus an edge from each control statement to each
/// of its direct children.
pub fn prescribed_control_edges(method: &MethodAst) -> BTreeSet<(NodeId, NodeId)> {
    let mut pairs = BTreeSet::new();
    for id in 1..method.node_count() {
        pairs.insert((0, id));
    }
    for node in &method.statements {
        if node.kind.is_control() {
            for &child in &node.children {
                pairs.insert((node.id, child));
            }
        }
    }
    pairs
}

// --- alias-resolution oracle --------------------------------------------------

/// Fixpoint of the two alias rules with rule applications tried in a
/// shuffled order, to check order independence of the resolver.
pub fn alias_fixpoint_shuffled(
    method: &MethodAst,
    stream_variable: &str,
    wrapper_types: &BTreeSet<String>,
    seed: u64,
) -> BTreeSet<String> {
    struct Rule {
        target: String,
        source: String,
        needs_wrapper_type: Option<String>,
    }

    let mut rules = Vec::new();
    for node in &method.statements {
        let target = match node.kind {
            StatementKind::Declaration => node.declares.clone(),
            StatementKind::Assignment => node.writes.iter().next().cloned(),
            _ => None,
        };
        let Some(target) = target else { continue };
        if let (Some(wrapped), Some(ty)) = (&node.constructed_wrapper_of, &node.constructed_type) {
            rules.push(Rule {
                target: target.clone(),
                source: wrapped.clone(),
                needs_wrapper_type: Some(ty.clone()),
            });
        }
        if let Some(source) = &node.copy_of {
            rules.push(Rule {
                target,
                source: source.clone(),
                needs_wrapper_type: None,
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut aliases: BTreeSet<String> = [stream_variable.to_string()].into_iter().collect();
    loop {
        rules.shuffle(&mut rng);
        let mut changed = false;
        for rule in &rules {
            let type_ok = rule
                .needs_wrapper_type
                .as_ref()
                .map_or(true, |ty| wrapper_types.contains(ty));
            if type_ok && aliases.contains(&rule.source) {
                changed |= aliases.insert(rule.target.clone());
            }
        }
        if !changed {
            return aliases;
        }
    }
}

// --- random generators ----------------------------------------------------------

/// Seeded random graph with up to `max_nodes` nodes and edge probability
/// up to `max_density`, mixed edge kinds, no self-edges.
pub fn random_graph(seed: u64, max_nodes: usize, max_density: f64) -> DependencyGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = rng.gen_range(1..=max_nodes.max(1));
    let density = rng.gen_range(0.0..=max_density);
    let mut edges = Vec::new();
    for src in 0..nodes {
        for dst in 0..nodes {
            if src != dst && rng.gen_bool(density) {
                let kind = if rng.gen_bool(0.5) {
                    EdgeKind::Control
                } else {
                    EdgeKind::Data
                };
                edges.push(Edge { src, dst, kind });
            }
        }
    }
    DependencyGraph::from_parts(nodes, edges).expect("generated edges are in range")
}

/// Seeded random program in the mini-language: straight-line statements
/// mixed with `if`/`while`/`for` blocks, all variables declared before
/// use, at most `max_statements` statements (excluding the prototype).
pub fn random_program(seed: u64, max_statements: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = rng.gen_range(1..=max_statements.max(1));
    let mut gen = ProgramGenerator {
        rng,
        vars: vec!["a".to_string(), "b".to_string()],
        next_var: 0,
        remaining: budget,
    };
    let mut body = String::new();
    gen.emit_block(&mut body, 1, 0);
    format!("void generated(PrintWriter out, int a, int b) {{\n{body}}}\n")
}

struct ProgramGenerator {
    rng: ChaCha8Rng,
    vars: Vec<String>,
    next_var: usize,
    remaining: usize,
}

impl ProgramGenerator {
    fn fresh_var(&mut self) -> String {
        let name = format!("v{}", self.next_var);
        self.next_var += 1;
        name
    }

    fn any_var(&mut self) -> String {
        self.vars[self.rng.gen_range(0..self.vars.len())].clone()
    }

    fn operand(&mut self) -> String {
        if self.rng.gen_bool(0.4) {
            self.rng.gen_range(0..100).to_string()
        } else {
            self.any_var()
        }
    }

    fn expression(&mut self) -> String {
        let lhs = self.operand();
        if self.rng.gen_bool(0.5) {
            let op = ["+", "-", "*"][self.rng.gen_range(0..3)];
            let rhs = self.operand();
            format!("{lhs} {op} {rhs}")
        } else {
            lhs
        }
    }

    fn emit_block(&mut self, out: &mut String, depth: usize, nesting: usize) {
        while self.remaining > 0 {
            self.emit_statement(out, depth, nesting);
            if self.rng.gen_bool(0.25) {
                break;
            }
        }
    }

    fn emit_statement(&mut self, out: &mut String, depth: usize, nesting: usize) {
        let indent = "    ".repeat(depth);
        // Control statements cost at least two statements (header + body).
        let can_nest = nesting < 2 && self.remaining >= 2;
        let choice = self.rng.gen_range(0..10);
        self.remaining -= 1;
        match choice {
            0 | 1 if can_nest => {
                let (a, b) = (self.any_var(), self.operand());
                out.push_str(&format!("{indent}if ({a} < {b}) {{\n"));
                self.emit_block(out, depth + 1, nesting + 1);
                out.push_str(&format!("{indent}}}\n"));
            }
            2 if can_nest => {
                let guard = self.any_var();
                out.push_str(&format!("{indent}while ({guard} < 3) {{\n"));
                self.emit_block(out, depth + 1, nesting + 1);
                if self.remaining > 0 {
                    self.remaining -= 1;
                    out.push_str(&format!("{indent}    ++{guard};\n"));
                }
                out.push_str(&format!("{indent}}}\n"));
            }
            3 if can_nest => {
                let fresh = self.fresh_var();
                let bound = self.any_var();
                out.push_str(&format!(
                    "{indent}for (int {fresh} = 0; {fresh} < {bound}; ++{fresh}) {{\n"
                ));
                self.vars.push(fresh);
                self.emit_block(out, depth + 1, nesting + 1);
                out.push_str(&format!("{indent}}}\n"));
            }
            4 => {
                let fresh = self.fresh_var();
                let init = self.expression();
                out.push_str(&format!("{indent}int {fresh} = {init};\n"));
                self.vars.push(fresh);
            }
            5 => {
                let target = self.any_var();
                out.push_str(&format!("{indent}++{target};\n"));
            }
            6 => {
                let target = self.any_var();
                let op = ["+=", "-=", "*="][self.rng.gen_range(0..3)];
                let rhs = self.operand();
                out.push_str(&format!("{indent}{target} {op} {rhs};\n"));
            }
            7 => {
                let arg = self.any_var();
                out.push_str(&format!("{indent}out.print({arg});\n"));
            }
            _ => {
                let target = self.any_var();
                let rhs = self.expression();
                out.push_str(&format!("{indent}{target} = {rhs};\n"));
            }
        }
    }
}

/// Trivial statement counter for one-statement-per-line sources: counts
/// every line that is more than braces (the prototype line included),
/// without using the parser.
pub fn count_statement_lines(source: &str) -> usize {
    source
        .lines()
        .map(str::trim)
        .filter(|line| !line.is_empty())
        .filter(|line| {
            let stripped: String = line
                .chars()
                .filter(|c| !c.is_whitespace() && *c != '{' && *c != '}')
                .collect();
            !stripped.is_empty() && stripped != "else"
        })
        .count()
}

// --- small helpers ---------------------------------------------------------------

/// Statement node lookup shorthand used by assertion helpers in tests.
pub fn node_texts(method: &MethodAst, ids: &BTreeSet<NodeId>) -> Vec<String> {
    ids.iter()
        .map(|&id| method.statements[id].text.clone())
        .collect()
}

/// True when the node set is closed under control edges of `graph`:
/// whenever a member has an incoming control edge, the controller is a
/// member too.
pub fn is_control_closed(
    graph: &DependencyGraph,
    nodes: &BTreeSet<NodeId>,
) -> bool {
    graph.edges().all(|edge| {
        edge.kind != EdgeKind::Control || !nodes.contains(&edge.dst) || nodes.contains(&edge.src)
    })
}

/// Convenience accessor mirroring `StatementNode::position` for slices of
/// generated programs.
pub fn positions(method: &MethodAst) -> Vec<(usize, usize)> {
    method.statements.iter().map(StatementNode::position).collect()
}

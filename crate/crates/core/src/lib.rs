//! Backward slicing for a small Java-like imperative language.
//!
//! Given one method and an output-stream variable, this crate finds the
//! statements that impact the values written to that stream:
//!
//! 1. [`parser::parse_method`] turns source text into a statement-level
//!    AST with per-statement read/write variable sets.
//! 2. [`graph::build_graph`] builds a directed dependency graph: control
//!    edges from the method prototype and from each control statement to
//!    its inner statements, data edges from variable writers to later
//!    readers.
//! 3. [`slicer::compute_slice`] reverses the graph, finds the sink
//!    invocations (`print`/`println`/`write`/`append` on the stream or one
//!    of its aliases), and collects everything breadth-first reachable
//!    from them.
//!
//! Graphs export to Graphviz DOT and canonical JSON ([`export`]); slices
//! render back to compilable source text or canonical JSON.

pub mod ast;
pub mod error;
pub mod export;
pub mod graph;
pub mod lexer;
pub mod parser;
pub mod slicer;

pub use ast::{extract_reads_writes, MethodAst, Parameter, StatementKind, StatementNode};
pub use error::{Error, Result};
pub use export::{parse_graph_json, to_dot, to_json};
pub use graph::{build_graph, build_graph_with, data_edges, DataflowMode, DependencyGraph, Edge, EdgeKind, NodeId};
pub use lexer::{tokenize, Token, TokenKind, TokenStream};
pub use parser::parse_method;
pub use slicer::{
    compute_slice, compute_slice_with, find_sinks, reachable, render_slice,
    resolve_output_aliases, resolve_output_aliases_with, transpose, Slice, SliceCriterion,
    SliceDoc,
};

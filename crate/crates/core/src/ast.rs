//! Statement-level AST for one method.
//!
//! Statements are stored flat in textual order; `StatementNode::id` is the
//! index into `MethodAst::statements`. Node 0 is always the method
//! prototype, and control statements list their direct inner statements in
//! `children`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatementKind {
    Prototype,
    Declaration,
    Assignment,
    ExpressionStatement,
    Invocation,
    If,
    While,
    For,
    Return,
}

impl StatementKind {
    /// Control kinds own their body statements as children.
    pub fn is_control(self) -> bool {
        matches!(self, StatementKind::If | StatementKind::While | StatementKind::For)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatementNode {
    /// Dense id equal to the statement's 0-based rank in textual order.
    pub id: NodeId,
    pub kind: StatementKind,
    /// Verbatim source text. Control statements carry only their header,
    /// e.g. `while (i <= 10)`.
    pub text: String,
    /// Variables whose values this statement reads.
    pub reads: BTreeSet<String>,
    /// Variables this statement writes via `=`, compound assignment,
    /// `++`/`--`, a declaration initializer, or (for the prototype) its
    /// parameters.
    pub writes: BTreeSet<String>,
    /// Direct inner statements; non-empty only for control kinds and the
    /// prototype.
    pub children: Vec<NodeId>,
    pub line: usize,
    pub column: usize,
    /// Variable introduced by this statement, if it is a declaration or a
    /// `for` statement with a declaring init clause.
    pub declares: Option<String>,
    /// Receiver variable of a bare invocation statement (`recv.m(...)`).
    pub receiver: Option<String>,
    /// Method name of a bare invocation statement.
    pub called_method: Option<String>,
    /// For `T w = new T(v);` or `w = new T(v);`: the wrapped variable `v`.
    pub constructed_wrapper_of: Option<String>,
    /// For the same forms: the constructed type name `T`.
    pub constructed_type: Option<String>,
    /// For plain copies `w = v;` or `T w = v;`: the source variable `v`.
    pub copy_of: Option<String>,
    /// For `if` statements with an `else` branch: index into `children`
    /// where the else-branch statements begin.
    pub else_start: Option<usize>,
}

impl StatementNode {
    pub fn position(&self) -> (usize, usize) {
        (self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameter {
    pub name: String,
    pub declared_type: String,
}

/// Ordered statement tree for one method plus its prototype.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodAst {
    pub name: String,
    pub parameters: Vec<Parameter>,
    /// Statements indexed by id; `statements[0]` is the prototype.
    pub statements: Vec<StatementNode>,
    pub source_text: String,
}

impl MethodAst {
    pub fn node(&self, id: NodeId) -> &StatementNode {
        &self.statements[id]
    }

    pub fn prototype(&self) -> &StatementNode {
        &self.statements[0]
    }

    pub fn node_count(&self) -> usize {
        self.statements.len()
    }

    /// Parameter names plus every variable introduced by a declaration
    /// (including `for`-header declarations).
    pub fn declared_variables(&self) -> BTreeSet<String> {
        let mut names: BTreeSet<String> =
            self.parameters.iter().map(|p| p.name.clone()).collect();
        for node in &self.statements {
            if let Some(declared) = &node.declares {
                names.insert(declared.clone());
            }
        }
        names
    }
}

/// The per-statement read/write sets, as computed by the parser.
pub fn extract_reads_writes(node: &StatementNode) -> (BTreeSet<String>, BTreeSet<String>) {
    (node.reads.clone(), node.writes.clone())
}

//! Recursive-descent parser producing a [`MethodAst`].
//!
//! One method per source file. Statements receive dense ids in textual
//! order (the prototype is id 0), control statements own their direct
//! inner statements, and every statement carries the variable names it
//! reads and writes. Variables must be declared (or introduced as
//! parameters) before use; declarations are method-scoped and unique.

use std::collections::BTreeSet;

use crate::ast::{MethodAst, Parameter, StatementKind, StatementNode};
use crate::error::{Error, Result};
use crate::lexer::{tokenize, Token, TokenKind};

const ASSIGN_OPS: &[&str] = &["=", "+=", "-=", "*=", "/="];
const BINARY_LEVELS: &[&[&str]] = &[
    &["||"],
    &["&&"],
    &["==", "!="],
    &["<", "<=", ">", ">="],
    &["+", "-"],
    &["*", "/", "%"],
];

/// Parses exactly one method definition.
pub fn parse_method(source: &str) -> Result<MethodAst> {
    let stream = tokenize(source)?;
    Parser::new(source, stream.tokens).parse()
}

/// Expression shape, kept only long enough to collect variable reads and
/// recognize copy / wrapper-construction right-hand sides.
enum Expr {
    Literal,
    Var(String),
    Unary(Box<Expr>),
    Binary(Box<Expr>, Box<Expr>),
    Call {
        receiver: Option<String>,
        args: Vec<Expr>,
    },
    New {
        type_name: String,
        args: Vec<Expr>,
    },
}

impl Expr {
    fn collect_reads(&self, into: &mut BTreeSet<String>) {
        match self {
            Expr::Literal => {}
            Expr::Var(name) => {
                into.insert(name.clone());
            }
            Expr::Unary(inner) => inner.collect_reads(into),
            Expr::Binary(lhs, rhs) => {
                lhs.collect_reads(into);
                rhs.collect_reads(into);
            }
            Expr::Call { receiver, args } => {
                if let Some(receiver) = receiver {
                    into.insert(receiver.clone());
                }
                for arg in args {
                    arg.collect_reads(into);
                }
            }
            Expr::New { args, .. } => {
                for arg in args {
                    arg.collect_reads(into);
                }
            }
        }
    }

    fn reads(&self) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        self.collect_reads(&mut set);
        set
    }

    /// `(copy_of, (constructed_type, constructed_wrapper_of))` facts for a
    /// plain `=` right-hand side.
    fn rhs_facts(&self) -> (Option<String>, Option<(String, String)>) {
        match self {
            Expr::Var(name) => (Some(name.clone()), None),
            Expr::New { type_name, args } => {
                let wrapped = args.first().and_then(|arg| match arg {
                    Expr::Var(name) => Some(name.clone()),
                    _ => None,
                });
                (None, wrapped.map(|w| (type_name.clone(), w)))
            }
            _ => (None, None),
        }
    }
}

struct Parser<'s> {
    source: &'s str,
    tokens: Vec<Token>,
    pos: usize,
    statements: Vec<StatementNode>,
    declared: BTreeSet<String>,
}

impl<'s> Parser<'s> {
    fn new(source: &'s str, tokens: Vec<Token>) -> Self {
        Parser {
            source,
            tokens,
            pos: 0,
            statements: Vec::new(),
            declared: BTreeSet::new(),
        }
    }

    // --- token plumbing -------------------------------------------------

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, ahead: usize) -> Option<&Token> {
        self.tokens.get(self.pos + ahead)
    }

    fn advance(&mut self) -> Option<Token> {
        let token = self.tokens.get(self.pos).cloned();
        if token.is_some() {
            self.pos += 1;
        }
        token
    }

    fn at(&self, kind: TokenKind, text: &str) -> bool {
        self.peek()
            .is_some_and(|t| t.kind == kind && t.text == text)
    }

    fn at_punct(&self, text: &str) -> bool {
        self.at(TokenKind::Punctuation, text)
    }

    fn at_op(&self, text: &str) -> bool {
        self.at(TokenKind::Operator, text)
    }

    fn at_keyword(&self, text: &str) -> bool {
        self.at(TokenKind::Keyword, text)
    }

    /// Position and rendering of the current token for error reporting.
    fn here(&self) -> (usize, usize, String) {
        match self.peek() {
            Some(token) => (token.line, token.column, format!("'{}'", token.text)),
            None => {
                let (line, column) = self
                    .tokens
                    .last()
                    .map(|t| (t.line, t.column + t.text.chars().count()))
                    .unwrap_or((1, 1));
                (line, column, "end of input".to_string())
            }
        }
    }

    fn expected(&self, expected: &[&str]) -> Error {
        let (line, column, found) = self.here();
        Error::Parse {
            line,
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    /// Consumes the expected token and returns its index.
    fn eat(&mut self, kind: TokenKind, text: &str) -> Result<usize> {
        if self.at(kind, text) {
            let idx = self.pos;
            self.pos += 1;
            Ok(idx)
        } else {
            Err(self.expected(&[&format!("'{text}'")]))
        }
    }

    fn eat_punct(&mut self, text: &str) -> Result<usize> {
        self.eat(TokenKind::Punctuation, text)
    }

    fn eat_keyword(&mut self, text: &str) -> Result<usize> {
        self.eat(TokenKind::Keyword, text)
    }

    fn eat_identifier(&mut self, role: &str) -> Result<(String, usize)> {
        if self.peek().is_some_and(|t| t.kind == TokenKind::Identifier) {
            let idx = self.pos;
            self.pos += 1;
            Ok((self.tokens[idx].text.clone(), idx))
        } else {
            Err(self.expected(&[role]))
        }
    }

    /// Verbatim source between two token indices, inclusive.
    fn slice(&self, start_idx: usize, end_idx: usize) -> String {
        let start = self.tokens[start_idx].offset;
        let end_tok = &self.tokens[end_idx];
        let end = end_tok.offset + end_tok.text.len();
        self.source[start..end].to_string()
    }

    // --- symbol table ---------------------------------------------------

    fn require_declared(&self, name: &str, token_idx: usize) -> Result<()> {
        if self.declared.contains(name) {
            Ok(())
        } else {
            let token = &self.tokens[token_idx];
            Err(Error::UndeclaredVariable {
                line: token.line,
                column: token.column,
                name: name.to_string(),
            })
        }
    }

    fn declare(&mut self, name: &str, token_idx: usize) -> Result<()> {
        if !self.declared.insert(name.to_string()) {
            let token = &self.tokens[token_idx];
            return Err(Error::DuplicateDeclaration {
                line: token.line,
                column: token.column,
                name: name.to_string(),
            });
        }
        Ok(())
    }

    // --- nodes ------------------------------------------------------------

    fn blank_node(
        &self,
        kind: StatementKind,
        start_idx: usize,
        end_idx: usize,
        reads: BTreeSet<String>,
        writes: BTreeSet<String>,
    ) -> StatementNode {
        let start = &self.tokens[start_idx];
        StatementNode {
            id: self.statements.len(),
            kind,
            text: self.slice(start_idx, end_idx),
            reads,
            writes,
            children: Vec::new(),
            line: start.line,
            column: start.column,
            declares: None,
            receiver: None,
            called_method: None,
            constructed_wrapper_of: None,
            constructed_type: None,
            copy_of: None,
            else_start: None,
        }
    }

    // --- grammar ----------------------------------------------------------

    fn parse(mut self) -> Result<MethodAst> {
        let (_return_type, start_idx) = self.eat_identifier("return type")?;
        let (name, _) = self.eat_identifier("method name")?;
        self.eat_punct("(")?;

        let mut parameters = Vec::new();
        if !self.at_punct(")") {
            loop {
                let (param_type, _) = self.eat_identifier("parameter type")?;
                let (param_name, name_idx) = self.eat_identifier("parameter name")?;
                self.declare(&param_name, name_idx)?;
                parameters.push(Parameter {
                    name: param_name,
                    declared_type: param_type,
                });
                if self.at_punct(",") {
                    self.eat_punct(",")?;
                } else {
                    break;
                }
            }
        }
        let close_idx = self.eat_punct(")")?;

        let writes = parameters.iter().map(|p| p.name.clone()).collect();
        let prototype = self.blank_node(
            StatementKind::Prototype,
            start_idx,
            close_idx,
            BTreeSet::new(),
            writes,
        );
        self.statements.push(prototype);

        let children = self.parse_block()?;
        if self.peek().is_some() {
            return Err(self.expected(&["end of input"]));
        }
        self.statements[0].children = children;

        Ok(MethodAst {
            name,
            parameters,
            statements: self.statements,
            source_text: self.source.to_string(),
        })
    }

    fn parse_block(&mut self) -> Result<Vec<usize>> {
        self.eat_punct("{")?;
        let mut children = Vec::new();
        while self.peek().is_some() && !self.at_punct("}") {
            children.push(self.parse_statement()?);
        }
        self.eat_punct("}")?;
        Ok(children)
    }

    fn parse_statement(&mut self) -> Result<usize> {
        let Some(token) = self.peek() else {
            return Err(self.expected(&["statement"]));
        };
        match (token.kind, token.text.as_str()) {
            (TokenKind::Keyword, "if") => self.parse_if(),
            (TokenKind::Keyword, "while") => self.parse_while(),
            (TokenKind::Keyword, "for") => self.parse_for(),
            (TokenKind::Keyword, "return") => self.parse_return(),
            (TokenKind::Keyword, "new") => self.parse_expression_statement(),
            (TokenKind::Keyword, _) => Err(self.expected(&["statement"])),
            (TokenKind::Identifier, _)
                if self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Identifier) =>
            {
                self.parse_declaration()
            }
            (TokenKind::Identifier, _) => self.parse_simple(),
            (TokenKind::Operator, "++") | (TokenKind::Operator, "--") => {
                self.parse_prefix_increment()
            }
            _ => self.parse_expression_statement(),
        }
    }

    fn parse_declaration(&mut self) -> Result<usize> {
        let start_idx = self.pos;
        let (declared_type, _) = self.eat_identifier("type")?;
        let (name, name_idx) = self.eat_identifier("variable name")?;

        let mut reads = BTreeSet::new();
        let mut writes = BTreeSet::new();
        let mut copy_of = None;
        let mut constructed = None;
        if self.at_op("=") {
            self.eat(TokenKind::Operator, "=")?;
            let init = self.parse_expression()?;
            reads = init.reads();
            writes.insert(name.clone());
            let (copy, cons) = init.rhs_facts();
            copy_of = copy;
            constructed = cons;
        }
        let end_idx = self.eat_punct(";")?;
        // The initializer is checked against the symbol table before the
        // declared name becomes visible, so `int x = x;` is rejected.
        self.declare(&name, name_idx)?;

        let mut node = self.blank_node(StatementKind::Declaration, start_idx, end_idx, reads, writes);
        node.declares = Some(name);
        node.copy_of = copy_of;
        if let Some((constructed_type, wrapped)) = constructed {
            node.constructed_type = Some(constructed_type);
            node.constructed_wrapper_of = Some(wrapped);
        }
        let _ = declared_type;
        let id = node.id;
        self.statements.push(node);
        Ok(id)
    }

    fn parse_prefix_increment(&mut self) -> Result<usize> {
        let start_idx = self.pos;
        self.advance(); // ++ or --
        let (name, name_idx) = self.eat_identifier("variable name")?;
        self.require_declared(&name, name_idx)?;
        let end_idx = self.eat_punct(";")?;
        let set: BTreeSet<String> = [name].into_iter().collect();
        let node = self.blank_node(StatementKind::Assignment, start_idx, end_idx, set.clone(), set);
        let id = node.id;
        self.statements.push(node);
        Ok(id)
    }

    fn parse_simple(&mut self) -> Result<usize> {
        let next = self.peek_at(1).map(|t| (t.kind, t.text.clone()));
        match next {
            Some((TokenKind::Operator, op)) if ASSIGN_OPS.contains(&op.as_str()) => {
                self.parse_assignment()
            }
            Some((TokenKind::Operator, op)) if op == "++" || op == "--" => {
                let start_idx = self.pos;
                let (name, name_idx) = self.eat_identifier("variable name")?;
                self.require_declared(&name, name_idx)?;
                self.advance(); // ++ or --
                let end_idx = self.eat_punct(";")?;
                let set: BTreeSet<String> = [name].into_iter().collect();
                let node =
                    self.blank_node(StatementKind::Assignment, start_idx, end_idx, set.clone(), set);
                let id = node.id;
                self.statements.push(node);
                Ok(id)
            }
            Some((TokenKind::Punctuation, p)) if p == "." || p == "(" => self.parse_invocation(),
            _ => self.parse_expression_statement(),
        }
    }

    fn parse_assignment(&mut self) -> Result<usize> {
        let start_idx = self.pos;
        let (target, target_idx) = self.eat_identifier("variable name")?;
        self.require_declared(&target, target_idx)?;
        let op = self.advance().expect("assignment operator");
        let rhs = self.parse_expression()?;
        let end_idx = self.eat_punct(";")?;

        let mut reads = rhs.reads();
        if op.text != "=" {
            // Compound assignment reads the previous value of its target.
            reads.insert(target.clone());
        }
        let writes: BTreeSet<String> = [target].into_iter().collect();
        let mut node = self.blank_node(StatementKind::Assignment, start_idx, end_idx, reads, writes);
        if op.text == "=" {
            let (copy, constructed) = rhs.rhs_facts();
            node.copy_of = copy;
            if let Some((constructed_type, wrapped)) = constructed {
                node.constructed_type = Some(constructed_type);
                node.constructed_wrapper_of = Some(wrapped);
            }
        }
        let id = node.id;
        self.statements.push(node);
        Ok(id)
    }

    fn parse_invocation(&mut self) -> Result<usize> {
        let start_idx = self.pos;
        let (first, first_idx) = self.eat_identifier("variable or method name")?;

        let (receiver, method) = if self.at_punct(".") {
            self.eat_punct(".")?;
            self.require_declared(&first, first_idx)?;
            let (method, _) = self.eat_identifier("method name")?;
            (Some(first), method)
        } else {
            (None, first)
        };

        self.eat_punct("(")?;
        let args = self.parse_arguments()?;
        self.eat_punct(")")?;
        let end_idx = self.eat_punct(";")?;

        let mut reads = BTreeSet::new();
        if let Some(receiver) = &receiver {
            reads.insert(receiver.clone());
        }
        for arg in &args {
            arg.collect_reads(&mut reads);
        }
        let mut node = self.blank_node(
            StatementKind::Invocation,
            start_idx,
            end_idx,
            reads,
            BTreeSet::new(),
        );
        node.receiver = receiver;
        node.called_method = Some(method);
        let id = node.id;
        self.statements.push(node);
        Ok(id)
    }

    fn parse_expression_statement(&mut self) -> Result<usize> {
        let start_idx = self.pos;
        let expr = self.parse_expression()?;
        let end_idx = self.eat_punct(";")?;
        let node = self.blank_node(
            StatementKind::ExpressionStatement,
            start_idx,
            end_idx,
            expr.reads(),
            BTreeSet::new(),
        );
        let id = node.id;
        self.statements.push(node);
        Ok(id)
    }

    fn parse_if(&mut self) -> Result<usize> {
        let start_idx = self.eat_keyword("if")?;
        self.eat_punct("(")?;
        let condition = self.parse_expression()?;
        let close_idx = self.eat_punct(")")?;

        let node = self.blank_node(
            StatementKind::If,
            start_idx,
            close_idx,
            condition.reads(),
            BTreeSet::new(),
        );
        let id = node.id;
        self.statements.push(node);

        let mut children = self.parse_block()?;
        let mut else_start = None;
        if self.at_keyword("else") {
            self.eat_keyword("else")?;
            else_start = Some(children.len());
            children.extend(self.parse_block()?);
        }
        self.statements[id].children = children;
        self.statements[id].else_start = else_start;
        Ok(id)
    }

    fn parse_while(&mut self) -> Result<usize> {
        let start_idx = self.eat_keyword("while")?;
        self.eat_punct("(")?;
        let condition = self.parse_expression()?;
        let close_idx = self.eat_punct(")")?;

        let node = self.blank_node(
            StatementKind::While,
            start_idx,
            close_idx,
            condition.reads(),
            BTreeSet::new(),
        );
        let id = node.id;
        self.statements.push(node);

        let children = self.parse_block()?;
        self.statements[id].children = children;
        Ok(id)
    }

    fn parse_for(&mut self) -> Result<usize> {
        let start_idx = self.eat_keyword("for")?;
        self.eat_punct("(")?;

        let mut reads = BTreeSet::new();
        let mut writes = BTreeSet::new();
        let mut declares = None;

        // Init clause: declaring form, assignment, or empty.
        if !self.at_punct(";") {
            if self.peek().is_some_and(|t| t.kind == TokenKind::Identifier)
                && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Identifier)
            {
                let (_init_type, _) = self.eat_identifier("type")?;
                let (name, name_idx) = self.eat_identifier("variable name")?;
                self.eat(TokenKind::Operator, "=")?;
                let init = self.parse_expression()?;
                init.collect_reads(&mut reads);
                self.declare(&name, name_idx)?;
                writes.insert(name.clone());
                declares = Some(name);
            } else {
                let (target, target_idx) = self.eat_identifier("variable name")?;
                self.require_declared(&target, target_idx)?;
                let op = self
                    .peek()
                    .filter(|t| t.kind == TokenKind::Operator && ASSIGN_OPS.contains(&t.text.as_str()))
                    .cloned()
                    .ok_or_else(|| self.expected(&["assignment operator"]))?;
                self.advance();
                let rhs = self.parse_expression()?;
                rhs.collect_reads(&mut reads);
                if op.text != "=" {
                    reads.insert(target.clone());
                }
                writes.insert(target);
            }
        }
        self.eat_punct(";")?;

        // Condition clause.
        if !self.at_punct(";") {
            let condition = self.parse_expression()?;
            condition.collect_reads(&mut reads);
        }
        self.eat_punct(";")?;

        // Update clause: increment or assignment, or empty.
        if !self.at_punct(")") {
            if self.at_op("++") || self.at_op("--") {
                self.advance();
                let (name, name_idx) = self.eat_identifier("variable name")?;
                self.require_declared(&name, name_idx)?;
                reads.insert(name.clone());
                writes.insert(name);
            } else {
                let (target, target_idx) = self.eat_identifier("variable name")?;
                self.require_declared(&target, target_idx)?;
                if self.at_op("++") || self.at_op("--") {
                    self.advance();
                    reads.insert(target.clone());
                    writes.insert(target);
                } else {
                    let op = self
                        .peek()
                        .filter(|t| {
                            t.kind == TokenKind::Operator && ASSIGN_OPS.contains(&t.text.as_str())
                        })
                        .cloned()
                        .ok_or_else(|| self.expected(&["assignment operator"]))?;
                    self.advance();
                    let rhs = self.parse_expression()?;
                    rhs.collect_reads(&mut reads);
                    if op.text != "=" {
                        reads.insert(target.clone());
                    }
                    writes.insert(target);
                }
            }
        }
        let close_idx = self.eat_punct(")")?;

        let mut node = self.blank_node(StatementKind::For, start_idx, close_idx, reads, writes);
        node.declares = declares;
        let id = node.id;
        self.statements.push(node);

        let children = self.parse_block()?;
        self.statements[id].children = children;
        Ok(id)
    }

    fn parse_return(&mut self) -> Result<usize> {
        let start_idx = self.eat_keyword("return")?;
        let mut reads = BTreeSet::new();
        if !self.at_punct(";") {
            let value = self.parse_expression()?;
            value.collect_reads(&mut reads);
        }
        let end_idx = self.eat_punct(";")?;
        let node = self.blank_node(StatementKind::Return, start_idx, end_idx, reads, BTreeSet::new());
        let id = node.id;
        self.statements.push(node);
        Ok(id)
    }

    // --- expressions ------------------------------------------------------

    fn parse_expression(&mut self) -> Result<Expr> {
        self.parse_binary(0)
    }

    fn parse_binary(&mut self, level: usize) -> Result<Expr> {
        if level == BINARY_LEVELS.len() {
            return self.parse_unary();
        }
        let mut lhs = self.parse_binary(level + 1)?;
        while BINARY_LEVELS[level].iter().any(|op| self.at_op(op)) {
            self.advance();
            let rhs = self.parse_binary(level + 1)?;
            lhs = Expr::Binary(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Expr> {
        if self.at_op("!") || self.at_op("-") {
            self.advance();
            return Ok(Expr::Unary(Box::new(self.parse_unary()?)));
        }
        self.parse_primary()
    }

    fn parse_primary(&mut self) -> Result<Expr> {
        let Some(token) = self.peek() else {
            return Err(self.expected(&["expression"]));
        };
        match (token.kind, token.text.as_str()) {
            (TokenKind::Literal, _) => {
                self.advance();
                Ok(Expr::Literal)
            }
            (TokenKind::Punctuation, "(") => {
                self.eat_punct("(")?;
                let inner = self.parse_expression()?;
                self.eat_punct(")")?;
                Ok(inner)
            }
            (TokenKind::Keyword, "new") => {
                self.eat_keyword("new")?;
                let (type_name, _) = self.eat_identifier("type")?;
                self.eat_punct("(")?;
                let args = self.parse_arguments()?;
                self.eat_punct(")")?;
                Ok(Expr::New { type_name, args })
            }
            (TokenKind::Identifier, _) => {
                let receiver_call = self.peek_at(1).is_some_and(|t| t.text == ".")
                    && self.peek_at(2).is_some_and(|t| t.kind == TokenKind::Identifier)
                    && self.peek_at(3).is_some_and(|t| t.text == "(");
                let bare_call = self.peek_at(1).is_some_and(|t| t.text == "(");
                if receiver_call {
                    let (receiver, receiver_idx) = self.eat_identifier("variable name")?;
                    self.require_declared(&receiver, receiver_idx)?;
                    self.eat_punct(".")?;
                    let (_method, _) = self.eat_identifier("method name")?;
                    self.eat_punct("(")?;
                    let args = self.parse_arguments()?;
                    self.eat_punct(")")?;
                    Ok(Expr::Call {
                        receiver: Some(receiver),
                        args,
                    })
                } else if bare_call {
                    let (_method, _) = self.eat_identifier("method name")?;
                    self.eat_punct("(")?;
                    let args = self.parse_arguments()?;
                    self.eat_punct(")")?;
                    Ok(Expr::Call {
                        receiver: None,
                        args,
                    })
                } else {
                    let (name, name_idx) = self.eat_identifier("variable name")?;
                    self.require_declared(&name, name_idx)?;
                    Ok(Expr::Var(name))
                }
            }
            _ => Err(self.expected(&["expression"])),
        }
    }

    fn parse_arguments(&mut self) -> Result<Vec<Expr>> {
        let mut args = Vec::new();
        if self.at_punct(")") {
            return Ok(args);
        }
        loop {
            args.push(self.parse_expression()?);
            if self.at_punct(",") {
                self.eat_punct(",")?;
            } else {
                return Ok(args);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn single_statement_method() {
        let method = parse_method("void m(int x, int y) { x = y; }").unwrap();
        assert_eq!(method.name, "m");
        assert_eq!(method.node_count(), 2);
        assert_eq!(method.node(0).kind, StatementKind::Prototype);
        assert_eq!(method.node(0).writes, names(&["x", "y"]));
        assert_eq!(method.node(0).children, vec![1]);
        assert_eq!(method.node(1).kind, StatementKind::Assignment);
        assert_eq!(method.node(1).text, "x = y;");
    }

    #[test]
    fn loop_method_structure() {
        let source = "void m(int i, int sum) { while (i <= 10) { sum = sum + 1; ++i; } }";
        let method = parse_method(source).unwrap();
        assert_eq!(method.node_count(), 4);
        assert_eq!(method.node(1).kind, StatementKind::While);
        assert_eq!(method.node(1).text, "while (i <= 10)");
        assert_eq!(method.node(1).children, vec![2, 3]);
        assert_eq!(method.node(2).text, "sum = sum + 1;");
        assert_eq!(method.node(3).text, "++i;");
    }

    #[test]
    fn reads_and_writes_per_statement() {
        let source = "void m(int sum, int i) { while (i <= 10) { sum = sum + 1; ++i; } }";
        let method = parse_method(source).unwrap();
        assert_eq!(method.node(1).reads, names(&["i"]));
        assert!(method.node(1).writes.is_empty());
        assert_eq!(method.node(2).reads, names(&["sum"]));
        assert_eq!(method.node(2).writes, names(&["sum"]));
        assert_eq!(method.node(3).reads, names(&["i"]));
        assert_eq!(method.node(3).writes, names(&["i"]));
    }

    #[test]
    fn assignment_chain_reads_writes() {
        let method = parse_method("void m(int x, int y, int z) { x = y; z = x; }").unwrap();
        assert_eq!(method.node(2).reads, names(&["x"]));
        assert_eq!(method.node(2).writes, names(&["z"]));
    }

    #[test]
    fn invocation_reads_receiver_and_arguments() {
        let method =
            parse_method("void m(PrintWriter out, String msg) { out.print(msg); }").unwrap();
        let call = method.node(1);
        assert_eq!(call.kind, StatementKind::Invocation);
        assert_eq!(call.receiver.as_deref(), Some("out"));
        assert_eq!(call.called_method.as_deref(), Some("print"));
        assert_eq!(call.reads, names(&["msg", "out"]));
        assert!(call.writes.is_empty());
    }

    #[test]
    fn wrapper_construction_is_recorded() {
        let method =
            parse_method("void m(Writer out) { PrintWriter w = new PrintWriter(out); }").unwrap();
        let decl = method.node(1);
        assert_eq!(decl.constructed_type.as_deref(), Some("PrintWriter"));
        assert_eq!(decl.constructed_wrapper_of.as_deref(), Some("out"));
        assert_eq!(decl.declares.as_deref(), Some("w"));
        assert_eq!(decl.reads, names(&["out"]));
        assert_eq!(decl.writes, names(&["w"]));
    }

    #[test]
    fn assignment_with_new_records_wrapper() {
        let source = "void m(Writer out, PrintWriter w) { w = new PrintWriter(out); }";
        let method = parse_method(source).unwrap();
        let assign = method.node(1);
        assert_eq!(assign.kind, StatementKind::Assignment);
        assert_eq!(assign.constructed_type.as_deref(), Some("PrintWriter"));
        assert_eq!(assign.constructed_wrapper_of.as_deref(), Some("out"));
    }

    #[test]
    fn plain_copy_is_recorded() {
        let method = parse_method("void m(Writer out) { Writer v = out; }").unwrap();
        assert_eq!(method.node(1).copy_of.as_deref(), Some("out"));
    }

    #[test]
    fn else_children_belong_to_the_if_node() {
        let source =
            "void m(int c, int x) { if (c < 1) { x = 1; } else { x = 2; x = 3; } }";
        let method = parse_method(source).unwrap();
        let cond = method.node(1);
        assert_eq!(cond.kind, StatementKind::If);
        assert_eq!(cond.children, vec![2, 3, 4]);
        assert_eq!(cond.else_start, Some(1));
    }

    #[test]
    fn for_header_contributes_reads_and_writes() {
        let source = "void m(int n, int sum) { for (int i = 0; i < n; ++i) { sum += i; } }";
        let method = parse_method(source).unwrap();
        let header = method.node(1);
        assert_eq!(header.kind, StatementKind::For);
        assert_eq!(header.text, "for (int i = 0; i < n; ++i)");
        assert_eq!(header.reads, names(&["i", "n"]));
        assert_eq!(header.writes, names(&["i"]));
        assert_eq!(header.declares.as_deref(), Some("i"));
        assert_eq!(header.children, vec![2]);
        // Compound assignment reads its own target.
        assert_eq!(method.node(2).reads, names(&["i", "sum"]));
        assert_eq!(method.node(2).writes, names(&["sum"]));
    }

    #[test]
    fn compound_assignment_reads_target() {
        let method = parse_method("void m(int a, int b) { a *= b; }").unwrap();
        assert_eq!(method.node(1).reads, names(&["a", "b"]));
        assert_eq!(method.node(1).writes, names(&["a"]));
    }

    #[test]
    fn declaration_without_initializer_writes_nothing() {
        let method = parse_method("void m() { int x; }").unwrap();
        assert!(method.node(1).writes.is_empty());
        assert_eq!(method.node(1).declares.as_deref(), Some("x"));
    }

    #[test]
    fn nested_control_children_are_direct_only() {
        let source = "void m(int c, int d, int x) { while (c < 9) { if (d < 1) { x = 1; } } }";
        let method = parse_method(source).unwrap();
        assert_eq!(method.node(1).children, vec![2]);
        assert_eq!(method.node(2).children, vec![3]);
    }

    #[test]
    fn duplicate_declaration_is_rejected() {
        let err = parse_method("void m() { int x = 1; int x = 2; }").unwrap_err();
        assert!(matches!(err, Error::DuplicateDeclaration { ref name, .. } if name == "x"));
    }

    #[test]
    fn duplicate_parameter_is_rejected() {
        let err = parse_method("void m(int a, int a) { }").unwrap_err();
        assert!(matches!(err, Error::DuplicateDeclaration { ref name, .. } if name == "a"));
    }

    #[test]
    fn undeclared_read_is_rejected() {
        let err = parse_method("void m(int x) { x = y; }").unwrap_err();
        assert!(matches!(err, Error::UndeclaredVariable { ref name, .. } if name == "y"));
    }

    #[test]
    fn self_referential_initializer_is_rejected() {
        let err = parse_method("void m() { int x = x + 1; }").unwrap_err();
        assert!(matches!(err, Error::UndeclaredVariable { ref name, .. } if name == "x"));
    }

    #[test]
    fn syntax_error_reports_position_and_expectation() {
        let err = parse_method("void m(int a) { a = ; }").unwrap_err();
        match err {
            Error::Parse { line, column, found, .. } => {
                assert_eq!((line, column), (1, 21));
                assert_eq!(found, "';'");
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn trailing_tokens_are_rejected() {
        let err = parse_method("void m() { } int x;").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn ids_follow_textual_order() {
        let source = "void m(int c) {\n    int a = 1;\n    if (c < 2) {\n        a = 2;\n    }\n    int b = a;\n}\n";
        let method = parse_method(source).unwrap();
        let positions: Vec<(usize, usize)> = method
            .statements
            .iter()
            .map(|node| node.position())
            .collect();
        let mut sorted = positions.clone();
        sorted.sort();
        assert_eq!(positions, sorted);
        for (id, node) in method.statements.iter().enumerate() {
            assert_eq!(node.id, id);
            for &child in &node.children {
                assert!(child > node.id);
            }
        }
    }
}

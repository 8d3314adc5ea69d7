use thiserror::Error;

use crate::graph::NodeId;

/// Errors produced by the frontend, graph, and slicing layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{column}: unexpected character '{found}'")]
    Lex {
        line: usize,
        column: usize,
        found: char,
    },

    #[error("{line}:{column}: unterminated {what}")]
    Unterminated {
        line: usize,
        column: usize,
        /// "string literal" or "block comment"
        what: &'static str,
    },

    #[error("{line}:{column}: expected {}, found {found}", expected.join(" or "))]
    Parse {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },

    #[error("{line}:{column}: duplicate declaration of '{name}'")]
    DuplicateDeclaration {
        line: usize,
        column: usize,
        name: String,
    },

    #[error("{line}:{column}: use of undeclared variable '{name}'")]
    UndeclaredVariable {
        line: usize,
        column: usize,
        name: String,
    },

    #[error("unknown stream variable '{0}'")]
    UnknownVariable(String),

    #[error("unknown node id {0}")]
    UnknownNode(NodeId),

    #[error("invalid graph document: {0}")]
    InvalidGraph(String),
}

impl Error {
    /// Source position of the error, when it refers to one.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            Error::Lex { line, column, .. }
            | Error::Unterminated { line, column, .. }
            | Error::Parse { line, column, .. }
            | Error::DuplicateDeclaration { line, column, .. }
            | Error::UndeclaredVariable { line, column, .. } => Some((*line, *column)),
            _ => None,
        }
    }

    /// True for errors raised while lexing or parsing source text.
    pub fn is_frontend(&self) -> bool {
        self.position().is_some()
    }
}

pub type Result<T> = std::result::Result<T, Error>;

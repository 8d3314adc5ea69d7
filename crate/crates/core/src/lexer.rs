//! Tokenizer for the mini-language.
//!
//! Whitespace and comments are kept as leading trivia on the following
//! token, so concatenating `leading_trivia + text` over the stream (plus
//! the stream's trailing trivia) reproduces the input byte for byte.

use crate::error::{Error, Result};

pub const KEYWORDS: &[&str] = &["else", "for", "if", "new", "return", "while"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Identifier,
    Keyword,
    Literal,
    Operator,
    Punctuation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based source line.
    pub line: usize,
    /// 1-based source column.
    pub column: usize,
    /// Byte offset of the first character of `text` in the source.
    pub offset: usize,
    /// Whitespace and comments between the previous token and this one.
    pub leading_trivia: String,
}

/// The full token stream of one source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
    /// Whitespace and comments after the last token.
    pub trailing_trivia: String,
}

impl TokenStream {
    /// Reassembles the original source exactly.
    pub fn reconstruct(&self) -> String {
        let mut out = String::new();
        for token in &self.tokens {
            out.push_str(&token.leading_trivia);
            out.push_str(&token.text);
        }
        out.push_str(&self.trailing_trivia);
        out
    }
}

struct Cursor<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    offset: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src,
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            offset: 0,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let ch = self.peek()?;
        self.pos += 1;
        self.offset += ch.len_utf8();
        if ch == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(ch)
    }
}

fn is_ident_start(ch: char) -> bool {
    ch.is_ascii_alphabetic() || ch == '_'
}

fn is_ident_continue(ch: char) -> bool {
    ch.is_ascii_alphanumeric() || ch == '_'
}

/// Splits source text into tokens, collecting whitespace and comments as
/// trivia. Fails on any character outside the mini-language alphabet.
pub fn tokenize(source: &str) -> Result<TokenStream> {
    let mut cursor = Cursor::new(source);
    let mut tokens = Vec::new();

    loop {
        let trivia = consume_trivia(&mut cursor)?;
        let (line, column, offset) = (cursor.line, cursor.column, cursor.offset);
        let Some(ch) = cursor.peek() else {
            return Ok(TokenStream {
                tokens,
                trailing_trivia: trivia,
            });
        };

        let (kind, text) = if is_ident_start(ch) {
            let mut word = String::new();
            while cursor.peek().is_some_and(is_ident_continue) {
                word.push(cursor.bump().unwrap());
            }
            if KEYWORDS.contains(&word.as_str()) {
                (TokenKind::Keyword, word)
            } else if word == "true" || word == "false" {
                (TokenKind::Literal, word)
            } else {
                (TokenKind::Identifier, word)
            }
        } else if ch.is_ascii_digit() {
            let mut digits = String::new();
            while cursor.peek().is_some_and(|c| c.is_ascii_digit()) {
                digits.push(cursor.bump().unwrap());
            }
            (TokenKind::Literal, digits)
        } else if ch == '"' {
            (TokenKind::Literal, lex_string(&mut cursor, line, column)?)
        } else if let Some(op) = lex_operator(&mut cursor) {
            (TokenKind::Operator, op)
        } else if "(){};,.".contains(ch) {
            cursor.bump();
            (TokenKind::Punctuation, ch.to_string())
        } else {
            return Err(Error::Lex {
                line,
                column,
                found: ch,
            });
        };

        tokens.push(Token {
            kind,
            text,
            line,
            column,
            offset,
            leading_trivia: trivia,
        });
    }
}

fn consume_trivia(cursor: &mut Cursor) -> Result<String> {
    let start = cursor.offset;
    loop {
        match cursor.peek() {
            Some(ch) if ch.is_ascii_whitespace() => {
                cursor.bump();
            }
            Some('/') if cursor.peek_at(1) == Some('/') => {
                while cursor.peek().is_some_and(|c| c != '\n') {
                    cursor.bump();
                }
            }
            Some('/') if cursor.peek_at(1) == Some('*') => {
                let (line, column) = (cursor.line, cursor.column);
                cursor.bump();
                cursor.bump();
                loop {
                    match cursor.peek() {
                        Some('*') if cursor.peek_at(1) == Some('/') => {
                            cursor.bump();
                            cursor.bump();
                            break;
                        }
                        Some(_) => {
                            cursor.bump();
                        }
                        None => {
                            return Err(Error::Unterminated {
                                line,
                                column,
                                what: "block comment",
                            })
                        }
                    }
                }
            }
            _ => return Ok(cursor.src[start..cursor.offset].to_string()),
        }
    }
}

fn lex_string(cursor: &mut Cursor, line: usize, column: usize) -> Result<String> {
    let mut text = String::new();
    text.push(cursor.bump().unwrap()); // opening quote
    loop {
        match cursor.peek() {
            Some('"') => {
                text.push(cursor.bump().unwrap());
                return Ok(text);
            }
            Some('\\') => {
                text.push(cursor.bump().unwrap());
                match cursor.peek() {
                    Some('"') | Some('\\') | Some('n') | Some('t') => {
                        text.push(cursor.bump().unwrap());
                    }
                    other => {
                        return Err(Error::Lex {
                            line: cursor.line,
                            column: cursor.column,
                            found: other.unwrap_or('\\'),
                        })
                    }
                }
            }
            Some('\n') | None => {
                return Err(Error::Unterminated {
                    line,
                    column,
                    what: "string literal",
                })
            }
            Some(_) => text.push(cursor.bump().unwrap()),
        }
    }
}

/// Longest-match operator lexing. Returns `None` when the next character
/// does not start an operator.
fn lex_operator(cursor: &mut Cursor) -> Option<String> {
    const TWO: &[&str] = &[
        "++", "--", "+=", "-=", "*=", "/=", "==", "!=", "<=", ">=", "&&", "||",
    ];
    const ONE: &str = "+-*/%<>=!";

    let first = cursor.peek()?;
    if let Some(second) = cursor.peek_at(1) {
        let pair: String = [first, second].iter().collect();
        if TWO.contains(&pair.as_str()) {
            cursor.bump();
            cursor.bump();
            return Some(pair);
        }
    }
    if ONE.contains(first) {
        cursor.bump();
        return Some(first.to_string());
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds_and_texts(source: &str) -> Vec<(TokenKind, String)> {
        tokenize(source)
            .unwrap()
            .tokens
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    #[test]
    fn smallest_assignment() {
        use TokenKind::*;
        assert_eq!(
            kinds_and_texts("x=y;"),
            vec![
                (Identifier, "x".into()),
                (Operator, "=".into()),
                (Identifier, "y".into()),
                (Punctuation, ";".into()),
            ]
        );
    }

    #[test]
    fn while_header() {
        use TokenKind::*;
        assert_eq!(
            kinds_and_texts("while (i <= 10)"),
            vec![
                (Keyword, "while".into()),
                (Punctuation, "(".into()),
                (Identifier, "i".into()),
                (Operator, "<=".into()),
                (Literal, "10".into()),
                (Punctuation, ")".into()),
            ]
        );
    }

    #[test]
    fn print_invocation() {
        use TokenKind::*;
        assert_eq!(
            kinds_and_texts("out.print(parameter);"),
            vec![
                (Identifier, "out".into()),
                (Punctuation, ".".into()),
                (Identifier, "print".into()),
                (Punctuation, "(".into()),
                (Identifier, "parameter".into()),
                (Punctuation, ")".into()),
                (Punctuation, ";".into()),
            ]
        );
    }

    #[test]
    fn trivia_round_trips_exactly() {
        let source = "void m(int a) {\n    // add one\n    a += 1; /* then stop */\n}\n";
        let stream = tokenize(source).unwrap();
        assert_eq!(stream.reconstruct(), source);
    }

    #[test]
    fn positions_are_one_based_and_non_decreasing() {
        let source = "int a = 1;\nint b = a;\n";
        let stream = tokenize(source).unwrap();
        let mut last = (0, 0);
        for token in &stream.tokens {
            assert!(token.line >= 1 && token.column >= 1);
            assert!((token.line, token.column) > last);
            last = (token.line, token.column);
        }
    }

    #[test]
    fn rejects_characters_outside_alphabet() {
        let err = tokenize("int a = 1 @ 2;").unwrap_err();
        assert_eq!(
            err,
            Error::Lex {
                line: 1,
                column: 11,
                found: '@'
            }
        );
    }

    #[test]
    fn rejects_unterminated_string() {
        let err = tokenize("out.print(\"oops);").unwrap_err();
        assert!(matches!(err, Error::Unterminated { line: 1, column: 11, .. }));
    }

    #[test]
    fn string_contents_are_opaque() {
        let tokens = kinds_and_texts("out.print(\"x = y; while\");");
        assert_eq!(tokens[4], (TokenKind::Literal, "\"x = y; while\"".into()));
    }
}

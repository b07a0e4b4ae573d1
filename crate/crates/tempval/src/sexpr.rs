//! S-expression reader shared by the domain and problem parsers.
//!
//! Symbols are lowercased here, which makes every downstream name comparison
//! case-insensitive. Comments run from `;` to end of line.

use tempval_core::ast::Span;

use crate::parser::{FileRole, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    List { span: Span, items: Vec<Sexp> },
    Sym { span: Span, text: String },
}

impl Sexp {
    pub fn span(&self) -> Span {
        match self {
            Sexp::List { span, .. } | Sexp::Sym { span, .. } => *span,
        }
    }

    /// Short rendering for "found ..." diagnostics.
    pub fn describe(&self) -> String {
        match self {
            Sexp::List { items, .. } => match items.first() {
                Some(Sexp::Sym { text, .. }) => format!("({text} ...)"),
                _ => "(...)".to_string(),
            },
            Sexp::Sym { text, .. } => text.clone(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

#[derive(Clone, Debug)]
enum Token {
    Open(Span),
    Close(Span),
    Sym(Span, String),
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn next_token(&mut self) -> Option<Token> {
        loop {
            let &c = self.chars.peek()?;
            if c == ';' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
        let span = Span::new(self.line, self.col);
        let &c = self.chars.peek()?;
        match c {
            '(' => {
                self.bump();
                Some(Token::Open(span))
            }
            ')' => {
                self.bump();
                Some(Token::Close(span))
            }
            _ => {
                let mut text = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    text.push(c.to_ascii_lowercase());
                    self.bump();
                }
                Some(Token::Sym(span, text))
            }
        }
    }
}

/// Reads all top-level forms of `text`.
pub fn read_all(text: &str, role: FileRole) -> Result<Vec<Sexp>, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut stack: Vec<(Span, Vec<Sexp>)> = Vec::new();
    let mut top = Vec::new();
    while let Some(token) = lexer.next_token() {
        match token {
            Token::Open(span) => stack.push((span, Vec::new())),
            Token::Close(span) => match stack.pop() {
                Some((open_span, items)) => {
                    let list = Sexp::List { span: open_span, items };
                    match stack.last_mut() {
                        Some((_, parent)) => parent.push(list),
                        None => top.push(list),
                    }
                }
                None => {
                    return Err(ParseError::syntax(role, span, "an expression", ")"));
                }
            },
            Token::Sym(span, text) => {
                let sym = Sexp::Sym { span, text };
                match stack.last_mut() {
                    Some((_, parent)) => parent.push(sym),
                    None => top.push(sym),
                }
            }
        }
    }
    if let Some((span, _)) = stack.pop() {
        return Err(ParseError::syntax(role, span, "a closing parenthesis", "end of input"));
    }
    Ok(top)
}

//! Line lexer shared by the `.ics` and `.ivs` formats.

use std::fmt;

use crate::extint::ExtInt;
use crate::scalar::Scalar;

/// A located diagnostic for malformed input.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// A possibly signed decimal literal, or `-inf` / `+inf`.
    Number(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Number(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

pub(crate) fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '@' | '\'' | '~')
}

/// Tokens of one line, each with its 1-based column.
pub(crate) struct Cursor {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Cursor {
    pub fn lex(line_no: usize, line: &str) -> Result<Self, ParseError> {
        let chars: Vec<char> = line.split('#').next().unwrap_or("").chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if is_name_start(c) {
                let start = i;
                while i < chars.len() && is_name_char(chars[i]) {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            } else if c.is_ascii_digit() || ((c == '-' || c == '+') && i + 1 < chars.len()) {
                let start = i;
                if c == '-' || c == '+' {
                    i += 1;
                }
                if chars[i..].starts_with(&['i', 'n', 'f']) && start < i {
                    i += 3;
                } else if chars[i].is_ascii_digit() {
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                } else {
                    return Err(ParseError::new(line_no, col, format!("unexpected character `{c}`")));
                }
                toks.push((Tok::Number(chars[start..i].iter().collect()), col));
            } else if c == '>' && chars.get(i + 1) == Some(&'=') {
                toks.push((Tok::Sym(">="), col));
                i += 2;
            } else {
                let sym = match c {
                    '(' => "(",
                    ')' => ")",
                    '[' => "[",
                    ']' => "]",
                    ',' => ",",
                    ';' => ";",
                    _ => return Err(ParseError::new(line_no, col, format!("unexpected character `{c}`"))),
                };
                toks.push((Tok::Sym(sym), col));
                i += 1;
            }
        }
        Ok(Cursor { toks, pos: 0, line: line_no, end_col: chars.len() + 1 })
    }

    pub fn line(&self) -> usize {
        self.line
    }

    pub fn is_empty(&self) -> bool {
        self.toks.is_empty()
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column(), message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {t}")),
            None => self.error(format!("expected {wanted}, found end of line")),
        }
    }

    pub fn ident(&mut self) -> Result<(String, usize), ParseError> {
        match self.toks.get(self.pos) {
            Some((Tok::Ident(s), col)) => {
                let out = (s.clone(), *col);
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    pub fn sym(&mut self, s: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Sym(t)) if *t == s => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{s}`"))),
        }
    }

    pub fn ext<S: Scalar>(&mut self) -> Result<ExtInt<S>, ParseError> {
        match self.peek() {
            Some(Tok::Number(s)) => {
                let v = s.parse().map_err(|_| self.error(format!("integer `{s}` out of range")))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.unexpected("an integer, `-inf` or `+inf`")),
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }
}

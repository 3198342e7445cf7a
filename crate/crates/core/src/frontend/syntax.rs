//! Lexer, abstract syntax and recursive-descent parser of the while-language.

use std::fmt;

use num_bigint::BigInt;

use crate::csys::text::ParseError;

/// A source position, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    fn error(self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column, message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String, Pos),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    /// The value of a variable-free expression.
    pub fn constant(&self) -> Option<BigInt> {
        Some(match self {
            Expr::Int(k) => k.clone(),
            Expr::Var(..) => return None,
            Expr::Add(a, b) => a.constant()? + b.constant()?,
            Expr::Sub(a, b) => a.constant()? - b.constant()?,
            Expr::Mul(a, b) => a.constant()? * b.constant()?,
            Expr::Neg(a) => -a.constant()?,
        })
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(&str, Pos)) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(x, pos) => f(x, *pos),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.for_each_var(f);
                b.for_each_var(f);
            }
            Expr::Neg(a) => a.for_each_var(f),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(k) => write!(f, "{k}"),
            Expr::Var(x, _) => f.write_str(x),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Neg(a) => write!(f, "-{a}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
    Ne,
}

impl RelOp {
    pub fn negate(self) -> RelOp {
        match self {
            RelOp::Lt => RelOp::Ge,
            RelOp::Le => RelOp::Gt,
            RelOp::Eq => RelOp::Ne,
            RelOp::Ge => RelOp::Lt,
            RelOp::Gt => RelOp::Le,
            RelOp::Ne => RelOp::Eq,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Eq => "==",
            RelOp::Ge => ">=",
            RelOp::Gt => ">",
            RelOp::Ne => "!=",
        }
    }
}

/// `var ⊳ value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cond {
    pub var: String,
    pub op: RelOp,
    pub value: BigInt,
    pub pos: Pos,
}

impl Cond {
    pub fn negate(&self) -> Cond {
        Cond { op: self.op.negate(), ..self.clone() }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.var, self.op.symbol(), self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Assign { var: String, expr: Expr, pos: Pos },
    If { cond: Cond, then: Vec<Stmt>, otherwise: Vec<Stmt> },
    While { cond: Cond, body: Vec<Stmt> },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Program {
    pub stmts: Vec<Stmt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Kw(&'static str),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(k) => write!(f, "`{k}`"),
            Tok::Kw(s) | Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

fn lex(source: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    for (l, line) in source.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos { line: l + 1, column: i + 1 };
            let next = chars.get(i + 1).copied();
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '/' && next == Some('/') {
                break;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "if" => Tok::Kw("if"),
                    "else" => Tok::Kw("else"),
                    "while" => Tok::Kw("while"),
                    _ => Tok::Ident(word),
                };
                out.push((tok, pos));
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((Tok::Int(digits.parse().expect("decimal digits")), pos));
                continue;
            }
            let (sym, len) = match (c, next) {
                ('<', Some('=')) => ("<=", 2),
                ('>', Some('=')) => (">=", 2),
                ('=', Some('=')) => ("==", 2),
                ('!', Some('=')) => ("!=", 2),
                ('≤', _) => ("<=", 1),
                ('≥', _) => (">=", 1),
                ('≠', _) => ("!=", 1),
                ('<', _) => ("<", 1),
                ('>', _) => (">", 1),
                ('=', _) => ("=", 1),
                ('+', _) => ("+", 1),
                ('-', _) | ('−', _) => ("-", 1),
                ('*', _) => ("*", 1),
                ('(', _) => ("(", 1),
                (')', _) => (")", 1),
                ('{', _) => ("{", 1),
                ('}', _) => ("}", 1),
                (';', _) => (";", 1),
                _ => return Err(pos.error(format!("unexpected character `{c}`"))),
            };
            out.push((Tok::Sym(sym), pos));
            i += len;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.pos().error(format!("expected {wanted}, found {t}")),
            None => self.pos().error(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, sym: &'static str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s) | Tok::Kw(s)) if *s == sym) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &'static str) -> Result<(), ParseError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{sym}`")))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.toks.get(self.at) {
            Some((Tok::Ident(x), pos)) => {
                let out = (x.clone(), *pos);
                self.at += 1;
                Ok(out)
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn stmts_until_close(&mut self) -> Result<Vec<Stmt>, ParseError> {
        let mut out = Vec::new();
        while !self.eat("}") {
            if self.peek().is_none() {
                return Err(self.unexpected("`}`"));
            }
            self.stmt(&mut out)?;
        }
        Ok(out)
    }

    /// A statement or a block, flattened into `out`.
    fn stmt(&mut self, out: &mut Vec<Stmt>) -> Result<(), ParseError> {
        if self.eat("{") {
            out.extend(self.stmts_until_close()?);
        } else if self.eat(";") {
        } else if self.eat("if") {
            let cond = self.cond()?;
            let then = self.body()?;
            let otherwise = if self.eat("else") { self.body()? } else { Vec::new() };
            out.push(Stmt::If { cond, then, otherwise });
        } else if self.eat("while") {
            let cond = self.cond()?;
            let body = self.body()?;
            out.push(Stmt::While { cond, body });
        } else {
            let (var, pos) = self.ident().map_err(|_| self.unexpected("a statement"))?;
            self.expect("=")?;
            let expr = self.expr()?;
            self.expect(";")?;
            out.push(Stmt::Assign { var, expr, pos });
        }
        Ok(())
    }

    fn body(&mut self) -> Result<Vec<Stmt>, ParseError> {
        let mut out = Vec::new();
        self.stmt(&mut out)?;
        Ok(out)
    }

    fn cond(&mut self) -> Result<Cond, ParseError> {
        self.expect("(")?;
        let (var, pos) = self.ident()?;
        let op = match self.peek() {
            Some(Tok::Sym("<")) => RelOp::Lt,
            Some(Tok::Sym("<=")) => RelOp::Le,
            Some(Tok::Sym("==")) => RelOp::Eq,
            Some(Tok::Sym(">=")) => RelOp::Ge,
            Some(Tok::Sym(">")) => RelOp::Gt,
            Some(Tok::Sym("!=")) => RelOp::Ne,
            _ => return Err(self.unexpected("a comparison against a constant")),
        };
        self.at += 1;
        let negative = self.eat("-");
        let value = match self.peek() {
            Some(Tok::Int(k)) => k.clone(),
            _ => return Err(self.unexpected("an integer literal")),
        };
        self.at += 1;
        self.expect(")")?;
        Ok(Cond { var, op, value: if negative { -value } else { value }, pos })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat("+") {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat("-") {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        while self.eat("*") {
            acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        match self.toks.get(self.at) {
            Some((Tok::Int(k), _)) => {
                let k = k.clone();
                self.at += 1;
                Ok(Expr::Int(k))
            }
            Some((Tok::Ident(_), _)) => {
                let (x, pos) = self.ident()?;
                Ok(Expr::Var(x, pos))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

/// Parses a while-language program.
pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let toks = lex(source)?;
    let lines = source.lines().count().max(1);
    let last_len = source.lines().last().map_or(0, |l| l.chars().count());
    let mut p = Parser { toks, at: 0, end: Pos { line: lines, column: last_len + 1 } };
    let mut stmts = Vec::new();
    while p.peek().is_some() {
        if p.peek() == Some(&Tok::Sym("}")) {
            return Err(p.unexpected("a statement"));
        }
        p.stmt(&mut stmts)?;
    }
    Ok(Program { stmts })
}

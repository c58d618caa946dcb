//! Real-valued expressions in the real coordinates of a chart.
//!
//! Grammar:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := number | 'x_k' | 'y_k' | 'r2' | ('log' | 'exp') '(' expr ')' | '(' expr ')'
//! ```
//!
//! `x_k`, `y_k` are the real and imaginary parts of `z^k` (1-based) and `r2`
//! is `|z|²`. The Unicode minus sign is accepted as `-`.

use std::fmt;

use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Real part of `z^{k+1}`.
    X(usize),
    /// Imaginary part of `z^{k+1}`.
    Y(usize),
    R2,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Log(Box<Expr>),
    Exp(Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Num(f64),
    Var(usize),
    R2,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow(i32),
    Log,
    Exp,
}

/// A compiled [`Expr`], evaluated on interleaved `(x_1, y_1, x_2, ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    ops: Vec<Op>,
    depth: usize,
}

impl Program {
    pub fn eval(&self, t: &[f64]) -> f64 {
        let mut stack: Vec<f64> = Vec::with_capacity(self.depth);
        for op in &self.ops {
            let v = match *op {
                Op::Num(v) => v,
                Op::Var(i) => t[i],
                Op::R2 => t.iter().map(|v| v * v).sum(),
                Op::Neg | Op::Pow(_) | Op::Log | Op::Exp => {
                    let a = stack.pop().expect("well-formed program");
                    match *op {
                        Op::Neg => -a,
                        Op::Pow(k) => a.powi(k),
                        Op::Log => a.ln(),
                        _ => a.exp(),
                    }
                }
                _ => {
                    let b = stack.pop().expect("well-formed program");
                    let a = stack.pop().expect("well-formed program");
                    match *op {
                        Op::Add => a + b,
                        Op::Sub => a - b,
                        Op::Mul => a * b,
                        _ => a / b,
                    }
                }
            };
            stack.push(v);
        }
        stack.pop().expect("well-formed program")
    }
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ParseError> {
        let tokens = lex(text)?;
        let mut parser = Parser { tokens, pos: 0 };
        let expr = parser.expr()?;
        match parser.peek() {
            Token { kind: Tok::End, .. } => Ok(expr),
            tok => Err(ParseError::new(tok.line, tok.col, format!("unexpected {}", tok.kind))
                .expecting(&["operator", "end of expression"])),
        }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::X(k) => x[*k],
            Expr::Y(k) => y[*k],
            Expr::R2 => x.iter().chain(y).map(|v| v * v).sum(),
            Expr::Neg(a) => -a.eval(x, y),
            Expr::Add(a, b) => a.eval(x, y) + b.eval(x, y),
            Expr::Sub(a, b) => a.eval(x, y) - b.eval(x, y),
            Expr::Mul(a, b) => a.eval(x, y) * b.eval(x, y),
            Expr::Div(a, b) => a.eval(x, y) / b.eval(x, y),
            Expr::Pow(a, k) => a.eval(x, y).powi(*k),
            Expr::Log(a) => a.eval(x, y).ln(),
            Expr::Exp(a) => a.eval(x, y).exp(),
        }
    }

    /// Flattens the tree into a postfix program over interleaved coordinates.
    pub fn compile(&self) -> Program {
        let mut ops = Vec::new();
        let depth = self.emit(&mut ops);
        Program { ops, depth }
    }

    /// Appends postfix ops and returns the stack depth needed.
    fn emit(&self, ops: &mut Vec<Op>) -> usize {
        let unary = |a: &Expr, op: Op, ops: &mut Vec<Op>| {
            let d = a.emit(ops);
            ops.push(op);
            d
        };
        let binary = |a: &Expr, b: &Expr, op: Op, ops: &mut Vec<Op>| {
            let da = a.emit(ops);
            let db = b.emit(ops);
            ops.push(op);
            da.max(db + 1)
        };
        match self {
            Expr::Num(v) => {
                ops.push(Op::Num(*v));
                1
            }
            Expr::X(k) => {
                ops.push(Op::Var(2 * k));
                1
            }
            Expr::Y(k) => {
                ops.push(Op::Var(2 * k + 1));
                1
            }
            Expr::R2 => {
                ops.push(Op::R2);
                1
            }
            Expr::Neg(a) => unary(a, Op::Neg, ops),
            Expr::Pow(a, k) => unary(a, Op::Pow(*k), ops),
            Expr::Log(a) => unary(a, Op::Log, ops),
            Expr::Exp(a) => unary(a, Op::Exp, ops),
            Expr::Add(a, b) => binary(a, b, Op::Add, ops),
            Expr::Sub(a, b) => binary(a, b, Op::Sub, ops),
            Expr::Mul(a, b) => binary(a, b, Op::Mul, ops),
            Expr::Div(a, b) => binary(a, b, Op::Div, ops),
        }
    }

    /// Number of complex coordinates referenced (highest `k` in `x_k`, `y_k`).
    pub fn arity(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::R2 => 0,
            Expr::X(k) | Expr::Y(k) => k + 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Log(a) | Expr::Exp(a) => a.arity(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.arity().max(b.arity())
            }
        }
    }

    fn is_atomic(&self) -> bool {
        match self {
            Expr::Num(v) => *v >= 0.0,
            Expr::X(_) | Expr::Y(_) | Expr::R2 | Expr::Log(_) | Expr::Exp(_) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn sub(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
            if e.is_atomic() {
                write!(f, "{e}")
            } else {
                write!(f, "({e})")
            }
        }
        match self {
            Expr::Num(v) if *v < 0.0 => write!(f, "(-{})", -v),
            Expr::Num(v) => write!(f, "{v}"),
            Expr::X(k) => write!(f, "x_{}", k + 1),
            Expr::Y(k) => write!(f, "y_{}", k + 1),
            Expr::R2 => write!(f, "r2"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                sub(f, a)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = match self {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    Expr::Mul(..) => " * ",
                    _ => " / ",
                };
                sub(f, a)?;
                write!(f, "{op}")?;
                sub(f, b)
            }
            Expr::Pow(a, k) => {
                sub(f, a)?;
                write!(f, "^{k}")
            }
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {v}"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::End => write!(f, "end of expression"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let start_col = col;
        let single = match ch {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(kind) = single {
            tokens.push(Token { kind, line, col });
            i += 1;
            col += 1;
            continue;
        }
        if ch == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let literal: String = chars[start..i].iter().collect();
            let value: f64 = literal.parse().map_err(|_| {
                ParseError::new(line, start_col, format!("malformed number `{literal}`"))
            })?;
            tokens.push(Token { kind: Tok::Num(value), line, col: start_col });
            col += i - start;
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let ident: String = chars[start..i].iter().collect();
            tokens.push(Token { kind: Tok::Ident(ident), line, col: start_col });
            col += i - start;
            continue;
        }
        return Err(ParseError::new(line, col, format!("unexpected character `{ch}`")));
    }
    tokens.push(Token { kind: Tok::End, line, col });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

const ATOM_START: &[&str] = &["number", "x_k", "y_k", "r2", "log(", "exp(", "(", "-"];

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn expect(&mut self, kind: Tok, what: &str) -> Result<(), ParseError> {
        let tok = self.next();
        if tok.kind == kind {
            Ok(())
        } else {
            Err(ParseError::new(tok.line, tok.col, format!("unexpected {}", tok.kind))
                .expecting(&[what]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().kind {
                Tok::Plus => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().kind {
                Tok::Star => {
                    self.next();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.next();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().kind == Tok::Minus {
            self.next();
            return Ok(match self.unary()? {
                Expr::Num(v) => Expr::Num(-v),
                e => Expr::Neg(Box::new(e)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek().kind != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let negative = if self.peek().kind == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let tok = self.next();
        match tok.kind {
            Tok::Num(v) if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 => {
                let k = v as i32;
                Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }))
            }
            _ => Err(ParseError::new(tok.line, tok.col, "exponent must be an integer literal")
                .expecting(&["integer"])),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let tok = self.next();
        match tok.kind {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(ref name) => match name.as_str() {
                "r2" => Ok(Expr::R2),
                "log" | "exp" => {
                    self.expect(Tok::LParen, "`(`")?;
                    let arg = Box::new(self.expr()?);
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(if name == "log" { Expr::Log(arg) } else { Expr::Exp(arg) })
                }
                _ => variable(name).ok_or_else(|| {
                    ParseError::new(tok.line, tok.col, format!("unknown identifier `{name}`"))
                        .expecting(&["x_k", "y_k", "r2", "log", "exp"])
                }),
            },
            other => Err(ParseError::new(tok.line, tok.col, format!("unexpected {other}"))
                .expecting(ATOM_START)),
        }
    }
}

fn variable(name: &str) -> Option<Expr> {
    let (kind, index) = name.split_once('_')?;
    let k: usize = index.parse().ok()?;
    if k == 0 {
        return None;
    }
    match kind {
        "x" => Some(Expr::X(k - 1)),
        "y" => Some(Expr::Y(k - 1)),
        _ => None,
    }
}

//! Operator expressions in the generators `Z<j>`, `Zb<j>`, `T`.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | 'i' | number | ident | gen | '(' expr ')' | 'Szego' '(' expr ')'
//! gen    := ('Z'|'Zb') index | 'T'
//! ```
//!
//! A leading unary minus is accepted in addition to the binary forms.

use std::collections::BTreeMap;
use std::fmt;

use super::Generator;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Scalar,
    Matrix(usize),
}

/// Declaration table for an operator: dimensions and named coefficient shapes.
#[derive(Clone, Debug, PartialEq)]
pub struct Declarations {
    pub n: usize,
    pub r: usize,
    shapes: BTreeMap<String, Shape>,
}

impl Declarations {
    pub fn new(n: usize, r: usize) -> Self {
        Declarations { n, r, shapes: BTreeMap::new() }
    }

    pub fn declare(mut self, name: &str, shape: Shape) -> Self {
        self.shapes.insert(name.to_string(), shape);
        self
    }

    pub fn insert(&mut self, name: &str, shape: Shape) {
        self.shapes.insert(name.to_string(), shape);
    }

    pub fn shape(&self, name: &str) -> Option<Shape> {
        self.shapes.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.shapes.keys().map(String::as_str)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorExpr {
    I,
    Number(f64),
    Coeff(String),
    Gen(Generator),
    Neg(Box<OperatorExpr>),
    Add(Box<OperatorExpr>, Box<OperatorExpr>),
    Sub(Box<OperatorExpr>, Box<OperatorExpr>),
    Mul(Box<OperatorExpr>, Box<OperatorExpr>),
    /// `S·a·S + (1 − S)` for the Szegő projector `S`.
    Szego(Box<OperatorExpr>),
}

impl OperatorExpr {
    pub fn contains_generators(&self) -> bool {
        match self {
            OperatorExpr::Gen(_) => true,
            OperatorExpr::I | OperatorExpr::Number(_) | OperatorExpr::Coeff(_) => false,
            OperatorExpr::Neg(a) | OperatorExpr::Szego(a) => a.contains_generators(),
            OperatorExpr::Add(a, b) | OperatorExpr::Sub(a, b) | OperatorExpr::Mul(a, b) => {
                a.contains_generators() || b.contains_generators()
            }
        }
    }

    pub fn contains_szego(&self) -> bool {
        match self {
            OperatorExpr::Szego(_) => true,
            OperatorExpr::I | OperatorExpr::Number(_) | OperatorExpr::Coeff(_) | OperatorExpr::Gen(_) => false,
            OperatorExpr::Neg(a) => a.contains_szego(),
            OperatorExpr::Add(a, b) | OperatorExpr::Sub(a, b) | OperatorExpr::Mul(a, b) => {
                a.contains_szego() || b.contains_szego()
            }
        }
    }

    /// Names of all coefficient symbols, sorted and deduplicated.
    pub fn coefficient_names(&self) -> Vec<String> {
        fn walk(e: &OperatorExpr, out: &mut Vec<String>) {
            match e {
                OperatorExpr::Coeff(name) => out.push(name.clone()),
                OperatorExpr::I | OperatorExpr::Number(_) | OperatorExpr::Gen(_) => {}
                OperatorExpr::Neg(a) | OperatorExpr::Szego(a) => walk(a, out),
                OperatorExpr::Add(a, b) | OperatorExpr::Sub(a, b) | OperatorExpr::Mul(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            OperatorExpr::Add(..) | OperatorExpr::Sub(..) => 1,
            OperatorExpr::Mul(..) => 2,
            OperatorExpr::Neg(..) => 3,
            _ => 4,
        }
    }
}

/// Canonical printer; `parse_operator(&e.to_string(), ..)` reproduces `e`.
impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(e: &OperatorExpr, min: u8) -> String {
            if e.precedence() < min {
                format!("({e})")
            } else {
                e.to_string()
            }
        }
        match self {
            OperatorExpr::I => write!(f, "i"),
            OperatorExpr::Number(x) => {
                if x.fract() == 0.0 && x.abs() < 1e15 {
                    write!(f, "{}", *x as i64)
                } else {
                    write!(f, "{x:?}")
                }
            }
            OperatorExpr::Coeff(name) => write!(f, "{name}"),
            OperatorExpr::Gen(g) => write!(f, "{g}"),
            OperatorExpr::Neg(a) => write!(f, "-{}", wrap(a, 3)),
            OperatorExpr::Add(a, b) => write!(f, "{} + {}", wrap(a, 1), wrap(b, 2)),
            OperatorExpr::Sub(a, b) => write!(f, "{} - {}", wrap(a, 1), wrap(b, 2)),
            OperatorExpr::Mul(a, b) => write!(f, "{}*{}", wrap(a, 2), wrap(b, 3)),
            OperatorExpr::Szego(a) => write!(f, "Szego({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        match ch {
            c if c.is_ascii_whitespace() => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let value = text.parse::<f64>().map_err(|_| Error::Parse {
                    pos: start,
                    msg: format!("malformed number `{text}`"),
                })?;
                out.push((start, Tok::Num(value)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            other => {
                return Err(Error::Parse { pos: i, msg: format!("unexpected character `{other}`") });
            }
        }
    }
    Ok(out)
}

fn generator_from_ident(name: &str) -> Option<std::result::Result<Generator, String>> {
    if name == "T" {
        return Some(Ok(Generator::T));
    }
    let (digits, zbar) = match name.strip_prefix("Zb") {
        Some(rest) => (rest, true),
        None => (name.strip_prefix('Z')?, false),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(
        digits
            .parse::<usize>()
            .map_err(|_| format!("bad generator index in `{name}`"))
            .map(|j| if zbar { Generator::Zbar(j) } else { Generator::Z(j) }),
    )
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    decls: &'a Declarations,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<OperatorExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = OperatorExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = OperatorExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<OperatorExpr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            lhs = OperatorExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<OperatorExpr> {
        let start = self.offset();
        match self.peek().cloned() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(OperatorExpr::Neg(Box::new(self.factor()?)))
            }
            Some(Tok::Num(x)) => {
                self.pos += 1;
                Ok(OperatorExpr::Number(x))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "i" {
                    return Ok(OperatorExpr::I);
                }
                if name == "Szego" {
                    self.expect(Tok::LParen, "`(` after Szego")?;
                    let inner = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    if inner.contains_generators() || inner.contains_szego() {
                        return Err(Error::Shape(
                            "Szego argument must be a coefficient expression without generators".into(),
                        ));
                    }
                    return Ok(OperatorExpr::Szego(Box::new(inner)));
                }
                if let Some(g) = generator_from_ident(&name) {
                    let g = g.map_err(|msg| Error::Parse { pos: start, msg })?;
                    return match g {
                        Generator::Z(j) | Generator::Zbar(j) if j == 0 || j > self.decls.n => {
                            Err(Error::Parse {
                                pos: start,
                                msg: format!("generator `{name}` index out of range 1..={}", self.decls.n),
                            })
                        }
                        g => Ok(OperatorExpr::Gen(g)),
                    };
                }
                match self.decls.shape(&name) {
                    None => Err(Error::Undeclared(name)),
                    Some(Shape::Matrix(k)) if k != self.decls.r => Err(Error::Shape(format!(
                        "coefficient `{name}` is {k}×{k} but the operator acts on r = {}",
                        self.decls.r
                    ))),
                    Some(_) => Ok(OperatorExpr::Coeff(name)),
                }
            }
            Some(_) => self.err("expected a factor"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an operator expression against a declaration table.
pub fn parse_operator(src: &str, decls: &Declarations) -> Result<OperatorExpr> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len(), decls };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

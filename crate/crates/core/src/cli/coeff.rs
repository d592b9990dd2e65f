//! Closed-form coefficient expressions in chart coordinates.
//!
//! ```text
//! top   := '[' row (',' row)* ']' | expr
//! row   := '[' expr (',' expr)* ']'
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | atom
//! atom  := number | 'i' | 'pi' | name | func '(' expr ')' | '(' expr ')'
//! func  := sin | cos | exp | sqrt
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::index::{CoeffValue, CoefficientField};
use crate::mesh::{Mesh, MeshKind};
use crate::{CMatrix, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Const(Complex64),
    Coord(usize),
    Var(usize),
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    fn eval(&self, x: &[f64; 3], vars: &[Complex64]) -> Complex64 {
        match self {
            Node::Const(c) => *c,
            Node::Coord(a) => Complex64::new(x[*a], 0.0),
            Node::Var(k) => vars[*k],
            Node::Neg(a) => -a.eval(x, vars),
            Node::Bin(op, a, b) => {
                let (u, v) = (a.eval(x, vars), b.eval(x, vars));
                match op {
                    '+' => u + v,
                    '-' => u - v,
                    '*' => u * v,
                    _ => u / v,
                }
            }
            Node::Call(f, a) => {
                let u = a.eval(x, vars);
                match f {
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Exp => u.exp(),
                    Func::Sqrt => u.sqrt(),
                }
            }
        }
    }

    fn uses_coordinates(&self) -> bool {
        match self {
            Node::Coord(_) => true,
            Node::Const(_) | Node::Var(_) => false,
            Node::Neg(a) | Node::Call(_, a) => a.uses_coordinates(),
            Node::Bin(_, a, b) => a.uses_coordinates() || b.uses_coordinates(),
        }
    }
}

/// A parsed scalar or square-matrix coefficient expression.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffExpr {
    rows: Option<Vec<Vec<Node>>>,
    scalar: Option<Node>,
}

impl CoeffExpr {
    /// Matrix size, or `None` for a scalar expression.
    pub fn matrix_size(&self) -> Option<usize> {
        self.rows.as_ref().map(Vec::len)
    }

    pub fn uses_coordinates(&self) -> bool {
        match (&self.scalar, &self.rows) {
            (Some(s), _) => s.uses_coordinates(),
            (None, Some(rows)) => rows.iter().flatten().any(Node::uses_coordinates),
            _ => false,
        }
    }

    /// Value at chart coordinates `x`, given the values of earlier definitions.
    pub fn evaluate(&self, x: [f64; 3], vars: &[Complex64]) -> CoeffValue {
        match (&self.scalar, &self.rows) {
            (Some(s), _) => CoeffValue::Scalar(s.eval(&x, vars)),
            (None, Some(rows)) => {
                let k = rows.len();
                CoeffValue::Matrix(CMatrix::from_fn(k, k, |i, j| rows[i][j].eval(&x, vars)))
            }
            _ => unreachable!("either scalar or matrix"),
        }
    }
}

/// Parses one coefficient expression. `coords` selects the chart coordinates in
/// scope (`None` for constant-coefficient runs); `vars` are names of scalar
/// definitions that may be referenced.
pub fn parse_coeff_expr(src: &str, coords: Option<MeshKind>, vars: &[String]) -> Result<CoeffExpr> {
    let mut p = Parser { src, chars: src.char_indices().collect(), at: 0, coords, vars };
    p.skip_ws();
    let out = if p.peek() == Some('[') {
        let rows = p.matrix()?;
        CoeffExpr { rows: Some(rows), scalar: None }
    } else {
        CoeffExpr { rows: None, scalar: Some(p.expr()?) }
    };
    p.skip_ws();
    if p.at < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    at: usize,
    coords: Option<MeshKind>,
    vars: &'a [String],
}

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.src.len(), |c| c.0)
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos(), msg: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|c| c.1)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.at += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn matrix(&mut self) -> Result<Vec<Vec<Node>>> {
        self.expect('[')?;
        let mut rows = Vec::new();
        loop {
            let start = self.pos();
            self.expect('[')?;
            let mut row = vec![self.expr()?];
            while self.eat(',') {
                row.push(self.expr()?);
            }
            self.expect(']')?;
            if let Some(first) = rows.first() {
                if Vec::len(first) != row.len() {
                    return Err(Error::Parse { pos: start, msg: "matrix rows have different lengths".into() });
                }
            }
            rows.push(row);
            if !self.eat(',') {
                break;
            }
        }
        self.expect(']')?;
        if rows.len() != rows[0].len() {
            return Err(Error::Shape(format!("matrix literal is {}×{}, expected square", rows.len(), rows[0].len())));
        }
        Ok(rows)
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(op @ ('+' | '-')) => {
                    self.at += 1;
                    lhs = Node::Bin(op, Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(op @ ('*' | '/')) => {
                    self.at += 1;
                    lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Node> {
        self.skip_ws();
        let start = self.at;
        match self.peek() {
            Some('(') => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.at += 1;
                }
                let name: String = self.chars[start..self.at].iter().map(|c| c.1).collect();
                self.name(&name, start)
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Node> {
        let start = self.at;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            self.at += 1;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let save = self.at;
            self.at += 1;
            if matches!(self.peek(), Some('+' | '-')) {
                self.at += 1;
            }
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.at += 1;
                }
            } else {
                self.at = save;
            }
        }
        let text: String = self.chars[start..self.at].iter().map(|c| c.1).collect();
        text.parse::<f64>()
            .map(|v| Node::Const(Complex64::new(v, 0.0)))
            .map_err(|_| Error::Parse { pos: self.chars[start].0, msg: format!("invalid number `{text}`") })
    }

    fn name(&mut self, name: &str, start: usize) -> Result<Node> {
        let pos = self.chars[start].0;
        let func = match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        };
        if let Some(f) = func {
            self.expect('(')?;
            let arg = self.expr()?;
            self.expect(')')?;
            return Ok(Node::Call(f, Box::new(arg)));
        }
        match name {
            "i" => return Ok(Node::Const(Complex64::new(0.0, 1.0))),
            "pi" => return Ok(Node::Const(Complex64::new(std::f64::consts::PI, 0.0))),
            _ => {}
        }
        if let Some(k) = self.vars.iter().position(|v| v == name) {
            return Ok(Node::Var(k));
        }
        if let Some(kind) = self.coords {
            if let Some(a) = kind.coordinate_names().iter().position(|c| *c == name) {
                return Ok(Node::Coord(a));
            }
        }
        let is_coordinate = [MeshKind::Torus3, MeshKind::Sphere3]
            .iter()
            .any(|k| k.coordinate_names().contains(&name));
        let msg = match (is_coordinate, self.coords) {
            (true, Some(kind)) => format!("coordinate `{name}` is not defined on {kind:?}").to_lowercase(),
            (true, None) => format!("coordinate `{name}` used without a manifold"),
            (false, _) => format!("unknown name `{name}`"),
        };
        Err(Error::Parse { pos, msg })
    }
}

/// Ordered scalar definitions followed by named coefficients.
#[derive(Debug, Clone)]
pub struct CoeffProgram {
    definitions: Vec<(String, CoeffExpr)>,
    coefficients: BTreeMap<String, CoeffExpr>,
}

impl CoeffProgram {
    pub fn compile(
        definitions: &[(String, String)],
        coefficients: &BTreeMap<String, String>,
        coords: Option<MeshKind>,
    ) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut defs = Vec::with_capacity(definitions.len());
        for (name, src) in definitions {
            let e = parse_coeff_expr(src, coords, &names)?;
            if e.matrix_size().is_some() {
                return Err(Error::Shape(format!("definition `{name}` must be scalar")));
            }
            names.push(name.clone());
            defs.push((name.clone(), e));
        }
        let coefficients = coefficients
            .iter()
            .map(|(name, src)| Ok((name.clone(), parse_coeff_expr(src, coords, &names)?)))
            .collect::<Result<_>>()?;
        Ok(CoeffProgram { definitions: defs, coefficients })
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&str, &CoeffExpr)> {
        self.coefficients.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn vars_at(&self, x: [f64; 3]) -> Vec<Complex64> {
        let mut vars = Vec::with_capacity(self.definitions.len());
        for (_, e) in &self.definitions {
            if let CoeffValue::Scalar(v) = e.evaluate(x, &vars) {
                vars.push(v);
            }
        }
        vars
    }

    /// Values at a single point.
    pub fn evaluate(&self, x: [f64; 3]) -> BTreeMap<String, CoeffValue> {
        let vars = self.vars_at(x);
        self.coefficients.iter().map(|(k, e)| (k.clone(), e.evaluate(x, &vars))).collect()
    }

    /// Nodewise fields on a mesh.
    pub fn fields(&self, mesh: &Mesh) -> BTreeMap<String, CoefficientField> {
        let samples: Vec<BTreeMap<String, CoeffValue>> =
            (0..mesh.len()).into_par_iter().map(|node| self.evaluate(mesh.coords(node))).collect();
        self.coefficients
            .keys()
            .map(|name| {
                let values = samples.iter().map(|s| s[name].clone()).collect();
                (name.clone(), CoefficientField::new(values))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: CoeffValue) -> Complex64 {
        match v {
            CoeffValue::Scalar(c) => c,
            CoeffValue::Matrix(_) => panic!("expected scalar"),
        }
    }

    #[test]
    fn scalar_field_range() {
        let e = parse_coeff_expr("0.5 + 0.3*cos(phi1)", Some(MeshKind::Torus3), &[]).unwrap();
        let mesh = Mesh::torus3(16).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for node in 0..mesh.len() {
            let v = scalar(e.evaluate(mesh.coords(node), &[]));
            assert_eq!(v.im, 0.0);
            lo = lo.min(v.re);
            hi = hi.max(v.re);
        }
        assert!((lo - 0.2).abs() < 1e-12 && (hi - 0.8).abs() < 1e-12);
    }

    #[test]
    fn su2_literal_is_unitary() {
        let src = "[[cos(eta)*exp(i*phi1), -sin(eta)*exp(-i*phi2)],[sin(eta)*exp(i*phi2), cos(eta)*exp(-i*phi1)]]";
        let e = parse_coeff_expr(src, Some(MeshKind::Sphere3), &[]).unwrap();
        assert_eq!(e.matrix_size(), Some(2));
        let mesh = Mesh::sphere3(12).unwrap();
        for node in 0..mesh.len() {
            let CoeffValue::Matrix(u) = e.evaluate(mesh.coords(node), &[]) else { panic!() };
            assert!((&u * u.adjoint() - CMatrix::identity(2, 2)).norm() < 1e-12);
            let want = crate::index::samples::su2_hopf(mesh.coords(node));
            assert!((u - want).norm() < 1e-14);
        }
    }

    #[test]
    fn undefined_coordinate() {
        match parse_coeff_expr("sin(eta)", Some(MeshKind::Torus3), &[]) {
            Err(Error::Parse { pos: 4, msg }) => assert!(msg.contains("eta"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(parse_coeff_expr("phi1", None, &[]).is_err());
        assert!(parse_coeff_expr("foo + 1", Some(MeshKind::Torus3), &[]).is_err());
    }

    #[test]
    fn syntax_errors() {
        for bad in ["1 +", "sin 2", "(1", "[[1, 2], [3]]", "2 $ 3", "[[1,2]]"] {
            assert!(parse_coeff_expr(bad, None, &[]).is_err(), "{bad}");
        }
    }

    #[test]
    fn arithmetic_and_precedence() {
        let e = parse_coeff_expr("-2*3 + 8/4 - -1 + 1.5e1 + i*i + sqrt(4) + pi - pi", None, &[]).unwrap();
        assert!((scalar(e.evaluate([0.0; 3], &[])) - Complex64::new(13.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn definitions_chain() {
        let defs = vec![("a".to_string(), "2*phi1".to_string()), ("b".to_string(), "a + 1".to_string())];
        let mut coeffs = BTreeMap::new();
        coeffs.insert("beta".to_string(), "[[a, b], [0, 1]]".to_string());
        let prog = CoeffProgram::compile(&defs, &coeffs, Some(MeshKind::Torus3)).unwrap();
        let CoeffValue::Matrix(m) = &prog.evaluate([0.5, 0.0, 0.0])["beta"] else { panic!() };
        assert_eq!(m[(0, 1)], Complex64::new(2.0, 0.0));
        let bad = vec![("b".to_string(), "a + 1".to_string())];
        assert!(CoeffProgram::compile(&bad, &coeffs, Some(MeshKind::Torus3)).is_err());
    }
}

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::fock::{ModelKind, ModelOperator};
use crate::mesh::Mesh;
use crate::symbolic::{Declarations, EnvElement, Monomial, OperatorExpr, Shape};
use crate::{CMatrix, Error, Result};

/// Value of a coefficient at one base point.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffValue {
    Scalar(Complex64),
    Matrix(CMatrix),
}

/// Nodewise samples of one coefficient over a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    values: Vec<CoeffValue>,
}

impl CoefficientField {
    pub fn new(values: Vec<CoeffValue>) -> Self {
        CoefficientField { values }
    }

    pub fn constant(mesh: &Mesh, v: CoeffValue) -> Self {
        CoefficientField { values: vec![v; mesh.len()] }
    }

    pub fn scalar_fn<F: Fn([f64; 3]) -> Complex64 + Sync>(mesh: &Mesh, f: F) -> Self {
        let values = (0..mesh.len()).into_par_iter().map(|n| CoeffValue::Scalar(f(mesh.coords(n)))).collect();
        CoefficientField { values }
    }

    pub fn matrix_fn<F: Fn([f64; 3]) -> CMatrix + Sync>(mesh: &Mesh, f: F) -> Self {
        let values = (0..mesh.len()).into_par_iter().map(|n| CoeffValue::Matrix(f(mesh.coords(n)))).collect();
        CoefficientField { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, node: usize) -> &CoeffValue {
        &self.values[node]
    }
}

enum Val {
    Env(EnvElement),
    Model(ModelOperator),
}

impl Val {
    fn into_model(self) -> ModelOperator {
        match self {
            Val::Env(e) => ModelOperator::enveloping(e),
            Val::Model(m) => m,
        }
    }
}

fn eval<'a, L>(expr: &OperatorExpr, decls: &Declarations, lookup: &L) -> Result<Val>
where
    L: Fn(&str) -> Option<&'a CoeffValue>,
{
    let (n, r) = (decls.n, decls.r);
    Ok(match expr {
        OperatorExpr::I => Val::Env(EnvElement::scalar(n, r, crate::I)),
        OperatorExpr::Number(x) => Val::Env(EnvElement::scalar(n, r, Complex64::new(*x, 0.0))),
        OperatorExpr::Coeff(name) => {
            let v = lookup(name).ok_or_else(|| Error::Unbound(name.clone()))?;
            match (v, decls.shape(name)) {
                (CoeffValue::Scalar(c), Some(Shape::Scalar)) => Val::Env(EnvElement::scalar(n, r, *c)),
                (CoeffValue::Matrix(m), Some(Shape::Matrix(k))) if m.nrows() == k && m.ncols() == k => {
                    Val::Env(EnvElement::from_matrix(n, m.clone()))
                }
                (_, None) => return Err(Error::Undeclared(name.clone())),
                (_, Some(shape)) => {
                    return Err(Error::Shape(format!("value bound to `{name}` does not match its declared shape {shape:?}")))
                }
            }
        }
        OperatorExpr::Gen(g) => Val::Env(EnvElement::generator(n, r, *g)?),
        OperatorExpr::Neg(a) => match eval(a, decls, lookup)? {
            Val::Env(e) => Val::Env(e.scale(Complex64::new(-1.0, 0.0))),
            Val::Model(m) => Val::Model(crate::fock::scaled(&m, Complex64::new(-1.0, 0.0))?),
        },
        OperatorExpr::Add(a, b) => combine(eval(a, decls, lookup)?, eval(b, decls, lookup)?, false)?,
        OperatorExpr::Sub(a, b) => {
            let rhs = eval(&OperatorExpr::Neg(b.clone()), decls, lookup)?;
            combine(eval(a, decls, lookup)?, rhs, false)?
        }
        OperatorExpr::Mul(a, b) => combine(eval(a, decls, lookup)?, eval(b, decls, lookup)?, true)?,
        OperatorExpr::Szego(a) => {
            let Val::Env(e) = eval(a, decls, lookup)? else {
                return Err(Error::Shape("Szego symbol must be a coefficient expression".into()));
            };
            if e.heisenberg_order() > 0 {
                return Err(Error::Shape("Szego symbol must not contain generators".into()));
            }
            let symbol = e.coefficient(&Monomial::one(n)).cloned().unwrap_or_else(|| CMatrix::zeros(r, r));
            Val::Model(ModelOperator::szego(n, symbol)?)
        }
    })
}

fn combine(a: Val, b: Val, multiply: bool) -> Result<Val> {
    match (a, b, multiply) {
        (Val::Env(x), Val::Env(y), false) => Ok(Val::Env(x.add(&y)?)),
        (Val::Env(x), Val::Env(y), true) => Ok(Val::Env(x.multiply(&y)?)),
        (a, b, false) => Ok(Val::Model(ModelOperator::sum(vec![a.into_model(), b.into_model()])?)),
        (a, b, true) => Ok(Val::Model(ModelOperator::product(vec![a.into_model(), b.into_model()])?)),
    }
}

fn zero_model(n: usize, r: usize) -> ModelOperator {
    ModelOperator::enveloping(EnvElement::zero(n, r))
}

/// Homogeneous part of Heisenberg degree exactly `d`; errors if any part exceeds `d`.
pub fn model_principal_part(m: &ModelOperator, d: usize) -> Result<ModelOperator> {
    let (n, r) = (m.n(), m.r());
    match m.kind() {
        ModelKind::Enveloping { element, .. } => Ok(ModelOperator::enveloping(element.principal_part(d as u32)?)),
        ModelKind::Szego { .. } => Ok(if d == 0 { m.clone() } else { zero_model(n, r) }),
        ModelKind::Sum(parts) => {
            let pp = parts.iter().map(|p| model_principal_part(p, d)).collect::<Result<Vec<_>>>()?;
            ModelOperator::sum(pp)
        }
        ModelKind::Product(parts) => {
            let total = m.order();
            if total > d {
                return Err(Error::OrderViolation { weight: total as u32, declared: d as u32 });
            }
            if total < d {
                return Ok(zero_model(n, r));
            }
            let pp = parts.iter().map(|p| model_principal_part(p, p.order())).collect::<Result<Vec<_>>>()?;
            ModelOperator::product(pp)
        }
    }
}

/// Full (not truncated) model operator of an expression at one base point.
pub fn evaluate_operator<'a, L>(expr: &OperatorExpr, decls: &Declarations, lookup: L) -> Result<ModelOperator>
where
    L: Fn(&str) -> Option<&'a CoeffValue>,
{
    Ok(eval(expr, decls, &lookup)?.into_model())
}

/// Model operator of degree `d` at one base point.
pub fn freeze_at<'a, L>(expr: &OperatorExpr, decls: &Declarations, lookup: L, d: usize) -> Result<ModelOperator>
where
    L: Fn(&str) -> Option<&'a CoeffValue>,
{
    match eval(expr, decls, &lookup)? {
        Val::Env(e) => Ok(ModelOperator::enveloping(e.principal_part(d as u32)?)),
        Val::Model(m) => model_principal_part(&m, d),
    }
}

/// Freezes coefficients at every mesh node and takes the principal part of degree `d`.
pub fn freeze_family(
    expr: &OperatorExpr,
    decls: &Declarations,
    mesh: &Mesh,
    fields: &BTreeMap<String, CoefficientField>,
    d: usize,
) -> Result<Vec<ModelOperator>> {
    for name in expr.coefficient_names() {
        match fields.get(&name) {
            None => return Err(Error::Unbound(name)),
            Some(f) if f.len() != mesh.len() => {
                return Err(Error::DimensionMismatch(format!(
                    "field `{name}` has {} samples for {} nodes",
                    f.len(),
                    mesh.len()
                )))
            }
            _ => {}
        }
    }
    if expr.coefficient_names().is_empty() {
        let m = freeze_at(expr, decls, |_| None, d)?;
        return Ok(vec![m; mesh.len()]);
    }
    (0..mesh.len())
        .into_par_iter()
        .map(|node| freeze_at(expr, decls, |name| fields.get(name).map(|f| f.at(node)), d))
        .collect()
}

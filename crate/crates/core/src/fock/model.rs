use std::sync::Arc;

use num_complex::Complex64;

use super::{quantize_compressed, BlockMatrix, FockBasis};
use crate::symbolic::EnvElement;
use crate::{CMatrix, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    /// Model operator of a differential operator; `op` caches `op_involution(element)`.
    Enveloping { element: EnvElement, op: EnvElement },
    /// `a ⊗ s + I ⊗ (1 − s)` with `s` the vacuum projection; its opposite side is the
    /// identity. `opposite` swaps the two sides.
    Szego { symbol: CMatrix, opposite: bool },
    Sum(Vec<ModelOperator>),
    Product(Vec<ModelOperator>),
}

/// Tag describing where a model operator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelTag {
    Enveloping,
    Szego,
    Composite,
}

/// Model operator at one base point, realized through its two Bargmann-Fock
/// images `π(P)` and `π(P^op)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelOperator {
    n: usize,
    r: usize,
    kind: ModelKind,
}

impl ModelOperator {
    pub fn enveloping(element: EnvElement) -> Self {
        let op = element.op_involution();
        ModelOperator { n: element.n(), r: element.r(), kind: ModelKind::Enveloping { element, op } }
    }

    pub fn szego(n: usize, symbol: CMatrix) -> Result<Self> {
        if symbol.nrows() != symbol.ncols() || symbol.nrows() == 0 {
            return Err(Error::Shape(format!(
                "Szego symbol must be square and non-empty, got {}×{}",
                symbol.nrows(),
                symbol.ncols()
            )));
        }
        Ok(ModelOperator { n, r: symbol.nrows(), kind: ModelKind::Szego { symbol, opposite: false } })
    }

    pub fn sum(parts: Vec<ModelOperator>) -> Result<Self> {
        Self::composite(parts, ModelKind::Sum)
    }

    pub fn product(parts: Vec<ModelOperator>) -> Result<Self> {
        Self::composite(parts, ModelKind::Product)
    }

    fn composite(parts: Vec<ModelOperator>, wrap: fn(Vec<ModelOperator>) -> ModelKind) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidArgument("composite model needs at least one part".into()));
        };
        let (n, r) = (first.n, first.r);
        if parts.iter().any(|p| p.n != n || p.r != r) {
            return Err(Error::DimensionMismatch("composite parts have different (n, r)".into()));
        }
        Ok(ModelOperator { n, r, kind: wrap(parts) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn tag(&self) -> ModelTag {
        match self.kind {
            ModelKind::Enveloping { .. } => ModelTag::Enveloping,
            ModelKind::Szego { .. } => ModelTag::Szego,
            ModelKind::Sum(_) | ModelKind::Product(_) => ModelTag::Composite,
        }
    }

    /// Heisenberg order (= maximal Fock degree shift of either image).
    pub fn order(&self) -> usize {
        match &self.kind {
            ModelKind::Enveloping { element, .. } => element.heisenberg_order() as usize,
            ModelKind::Szego { .. } => 0,
            ModelKind::Sum(parts) => parts.iter().map(ModelOperator::order).max().unwrap_or(0),
            ModelKind::Product(parts) => parts.iter().map(ModelOperator::order).sum(),
        }
    }

    /// The model operator of `P^op`: images swapped.
    pub fn op_model(&self) -> ModelOperator {
        let kind = match &self.kind {
            ModelKind::Enveloping { element, op } => {
                ModelKind::Enveloping { element: op.clone(), op: element.clone() }
            }
            ModelKind::Szego { symbol, opposite } => {
                ModelKind::Szego { symbol: symbol.clone(), opposite: !opposite }
            }
            ModelKind::Sum(parts) => ModelKind::Sum(parts.iter().map(ModelOperator::op_model).collect()),
            ModelKind::Product(parts) => {
                ModelKind::Product(parts.iter().rev().map(ModelOperator::op_model).collect())
            }
        };
        ModelOperator { n: self.n, r: self.r, kind }
    }

    /// Square compression `e_N π(P) e_N` on `V^N ⊗ ℂ^r`.
    pub fn pi(&self, basis: &Arc<FockBasis>) -> Result<BlockMatrix> {
        self.image(basis, false)
    }

    /// Square compression `e_N π(P^op) e_N`.
    pub fn pi_op(&self, basis: &Arc<FockBasis>) -> Result<BlockMatrix> {
        self.image(basis, true)
    }

    fn image(&self, basis: &Arc<FockBasis>, op_side: bool) -> Result<BlockMatrix> {
        if basis.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "basis has n = {}, model has n = {}",
                basis.n(),
                self.n
            )));
        }
        match &self.kind {
            ModelKind::Enveloping { element, op } => {
                Ok(quantize_compressed(if op_side { op } else { element }, basis))
            }
            ModelKind::Szego { symbol, opposite } => {
                if op_side != *opposite {
                    Ok(BlockMatrix::identity(basis.clone(), self.r))
                } else {
                    Ok(szego_matrix(symbol, basis))
                }
            }
            ModelKind::Sum(parts) => {
                let mut acc = parts[0].image(basis, op_side)?;
                for p in &parts[1..] {
                    acc = acc.add(&p.image(basis, op_side)?)?;
                }
                Ok(acc)
            }
            ModelKind::Product(parts) => {
                // compress only once: intermediate images must not lose degrees
                let extended_degree = basis.degree() + self.order();
                let ext = FockBasis::new(self.n, extended_degree)?;
                let ordered: Vec<&ModelOperator> = if op_side {
                    parts.iter().rev().collect()
                } else {
                    parts.iter().collect()
                };
                let mut acc = ordered[0].image(&ext, op_side)?;
                for p in &ordered[1..] {
                    acc = acc.mul(&p.image(&ext, op_side)?)?;
                }
                acc.compress(basis.degree())
            }
        }
    }
}

fn szego_matrix(symbol: &CMatrix, basis: &Arc<FockBasis>) -> BlockMatrix {
    let r = symbol.nrows();
    let d = basis.dim() * r;
    let mut data = CMatrix::identity(d, d);
    // vacuum block is the first r×r block
    data.view_mut((0, 0), (r, r)).copy_from(symbol);
    BlockMatrix::from_dense(basis.clone(), basis.clone(), r, data).expect("square by construction")
}

/// Model operator `S·a·S + (1 − S)` built from a symbol matrix.
pub fn szego_model(n: usize, a: &CMatrix) -> Result<ModelOperator> {
    ModelOperator::szego(n, a.clone())
}

impl From<EnvElement> for ModelOperator {
    fn from(e: EnvElement) -> Self {
        ModelOperator::enveloping(e)
    }
}

/// Scalar multiple of a model operator (as a product with a constant element).
pub fn scaled(m: &ModelOperator, c: Complex64) -> Result<ModelOperator> {
    ModelOperator::product(vec![ModelOperator::enveloping(EnvElement::scalar(m.n, m.r, c)), m.clone()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Generator;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn szego_scalar_symbol() {
        let b = FockBasis::new(1, 3).unwrap();
        let m = szego_model(1, &CMatrix::from_element(1, 1, c(2.0))).unwrap();
        let pi = m.pi(&b).unwrap();
        let want = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0), c(1.0), c(1.0), c(1.0)]));
        assert_eq!(pi.dense(), &want);
        assert_eq!(m.pi_op(&b).unwrap().dense(), &CMatrix::identity(4, 4));
        assert_eq!(m.order(), 0);
        assert_eq!(m.tag(), ModelTag::Szego);
    }

    #[test]
    fn szego_identity_symbol_is_identity() {
        let b = FockBasis::new(2, 2).unwrap();
        let m = szego_model(2, &CMatrix::identity(2, 2)).unwrap();
        assert_eq!(m.pi(&b).unwrap().dense(), &CMatrix::identity(12, 12));
    }

    #[test]
    fn szego_singular_symbol_still_builds() {
        let b = FockBasis::new(1, 2).unwrap();
        let m = szego_model(1, &CMatrix::zeros(2, 2)).unwrap();
        assert_eq!(m.pi(&b).unwrap().block(0, 0), CMatrix::zeros(2, 2));
    }

    #[test]
    fn product_images_are_exact_compressions() {
        // π(Zbar)π(Z) compressed to V^N must see the degree N+1 intermediate
        let n = 1;
        let z = ModelOperator::enveloping(EnvElement::generator(n, 1, Generator::Z(1)).unwrap());
        let zb = ModelOperator::enveloping(EnvElement::generator(n, 1, Generator::Zbar(1)).unwrap());
        let prod = ModelOperator::product(vec![zb.clone(), z.clone()]).unwrap();
        let direct = ModelOperator::enveloping(
            EnvElement::generator(n, 1, Generator::Zbar(1))
                .unwrap()
                .multiply(&EnvElement::generator(n, 1, Generator::Z(1)).unwrap())
                .unwrap(),
        );
        let b = FockBasis::new(n, 5).unwrap();
        assert!(prod.pi(&b).unwrap().max_abs_diff(&direct.pi(&b).unwrap()) < 1e-12);
        assert!(prod.pi_op(&b).unwrap().max_abs_diff(&direct.pi_op(&b).unwrap()) < 1e-12);
        assert_eq!(prod.order(), 2);
        assert_eq!(prod.tag(), ModelTag::Composite);
    }

    #[test]
    fn op_model_swaps_images() {
        let b = FockBasis::new(1, 3).unwrap();
        let m = szego_model(1, &CMatrix::from_element(1, 1, c(3.0))).unwrap();
        let o = m.op_model();
        assert_eq!(o.pi(&b).unwrap().dense(), m.pi_op(&b).unwrap().dense());
        assert_eq!(o.pi_op(&b).unwrap().dense(), m.pi(&b).unwrap().dense());
    }
}

use serde::Serialize;

use super::{BlockMatrix, FockBasis, ModelOperator};
use crate::{CMatrix, Error, Result};

pub const DEFAULT_EPS: f64 = 1e-8;
pub const DEFAULT_TOL: f64 = 1e-8;

/// `max(4, 2·order)`.
pub fn default_margin(order: usize) -> usize {
    (2 * order).max(4)
}

/// Compressed automorphism `e_N a(P) e_N` with its stabilization audit.
#[derive(Debug, Clone)]
pub struct Automorphism {
    pub matrix: BlockMatrix,
    /// Frobenius distance between the results for `margin` and `margin + 2`.
    pub residual: f64,
    pub stable: bool,
}

/// Builds `e_N (π(P)·π(P^op)⁻¹) e_N`, inverting the square compression of
/// `π(P^op)` on `V^{N+margin}`.
///
/// When both images are block diagonal compression commutes with inversion and
/// the result is exact (residual 0).
pub fn build_a(model: &ModelOperator, degree: usize, margin: usize, eps: f64, tol: f64) -> Result<Automorphism> {
    let order = model.order();
    if margin < 2 * order {
        return Err(Error::InvalidArgument(format!(
            "margin {margin} must be at least twice the order ({order})"
        )));
    }
    let outer = FockBasis::new(model.n(), degree + margin + 2)?;
    let a_outer = model.pi(&outer)?;
    let b_outer = model.pi_op(&outer)?;

    if a_outer.is_block_diagonal() && b_outer.is_block_diagonal() {
        return build_block_diagonal(&a_outer, &b_outer, degree, eps);
    }

    let first = quotient(&a_outer.compress(degree + margin)?, &b_outer.compress(degree + margin)?, eps)?;
    let second = quotient(&a_outer, &b_outer, eps)?;
    let first = first.compress(degree)?;
    let second = second.compress(degree)?;
    let residual = (first.dense() - second.dense()).norm();
    Ok(Automorphism { matrix: first, residual, stable: residual <= tol })
}

fn check_condition(b: &CMatrix, eps: f64, what: &str) -> Result<()> {
    let (smin, smax) = crate::singular_extremes(b);
    if smin == 0.0 || smax / smin > 1.0 / eps {
        return Err(Error::Degenerate(format!(
            "π(P^op) is numerically singular on {what} (σ_min = {smin:.3e}, σ_max = {smax:.3e})"
        )));
    }
    Ok(())
}

fn quotient(a: &BlockMatrix, b: &BlockMatrix, eps: f64) -> Result<BlockMatrix> {
    check_condition(b.dense(), eps, &format!("V^{}", b.domain().degree()))?;
    let inv = b
        .dense()
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("π(P^op) is not invertible".into()))?;
    BlockMatrix::from_dense(a.domain().clone(), a.codomain().clone(), a.r(), a.dense() * inv)
}

fn build_block_diagonal(a: &BlockMatrix, b: &BlockMatrix, degree: usize, eps: f64) -> Result<Automorphism> {
    let outer_degree = b.domain().degree();
    for k in 0..=outer_degree {
        check_condition(&b.block(k, k), eps, &format!("degree block {k}"))?;
    }
    let basis = FockBasis::new(a.domain().n(), degree)?;
    let r = a.r();
    let d = basis.dim() * r;
    let mut data = CMatrix::zeros(d, d);
    for k in 0..=degree {
        let inv = b
            .block(k, k)
            .try_inverse()
            .ok_or_else(|| Error::Degenerate(format!("π(P^op) block {k} is not invertible")))?;
        let x = a.block(k, k) * inv;
        let range = basis.block_range(k);
        data.view_mut((range.start * r, range.start * r), (x.nrows(), x.ncols())).copy_from(&x);
    }
    Ok(Automorphism {
        matrix: BlockMatrix::from_dense(basis.clone(), basis, r, data)?,
        residual: 0.0,
        stable: true,
    })
}

/// Per-degree distance of a square block matrix from the identity.
#[derive(Debug, Clone, Serialize)]
pub struct DecayProfile {
    /// `‖block_kk(A − I)‖` for each degree `k`.
    pub diagonal: Vec<f64>,
    /// Operator norm of row block `k` of `A` with its diagonal block removed.
    pub off_diagonal: Vec<f64>,
}

pub fn block_decay_profile(a: &BlockMatrix) -> Result<DecayProfile> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("decay profile needs a square block matrix".into()));
    }
    let basis = a.domain().clone();
    let r = a.r();
    let top = basis.degree();
    let mut diagonal = Vec::with_capacity(top + 1);
    let mut off_diagonal = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let block = a.block(k, k);
        let id = CMatrix::identity(block.nrows(), block.ncols());
        diagonal.push(crate::singular_extremes(&(block - id)).1);

        let rows = a.row_range(k);
        let mut row_block = a.dense().rows(rows.start, rows.len()).into_owned();
        let own = basis.block_range(k);
        row_block
            .columns_mut(own.start * r, own.len() * r)
            .fill(num_complex::Complex64::new(0.0, 0.0));
        off_diagonal.push(if a.bandwidth() == 0 { 0.0 } else { crate::singular_extremes(&row_block).1 });
    }
    Ok(DecayProfile { diagonal, off_diagonal })
}

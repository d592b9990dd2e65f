use std::sync::Arc;

use num_complex::Complex64;

use super::FockBasis;
use crate::{CMatrix, Error, Result};

/// Complex matrix between two truncated Fock spaces tensored with `ℂ^r`,
/// addressed by degree blocks.
///
/// Row/column layout is Fock-major: basis vector `i` and coefficient index `a`
/// sit at position `i·r + a`, so degree block `k` is a contiguous range.
#[derive(Debug, Clone)]
pub struct BlockMatrix {
    domain: Arc<FockBasis>,
    codomain: Arc<FockBasis>,
    r: usize,
    data: CMatrix,
    bandwidth: usize,
}

impl BlockMatrix {
    pub fn from_dense(
        domain: Arc<FockBasis>,
        codomain: Arc<FockBasis>,
        r: usize,
        data: CMatrix,
    ) -> Result<Self> {
        if domain.n() != codomain.n() {
            return Err(Error::DimensionMismatch("domain and codomain have different n".into()));
        }
        if data.nrows() != codomain.dim() * r || data.ncols() != domain.dim() * r {
            return Err(Error::DimensionMismatch(format!(
                "dense data is {}×{}, expected {}×{}",
                data.nrows(),
                data.ncols(),
                codomain.dim() * r,
                domain.dim() * r
            )));
        }
        let mut m = BlockMatrix { domain, codomain, r, data, bandwidth: 0 };
        m.bandwidth = m.measure_bandwidth();
        Ok(m)
    }

    pub fn zeros(domain: Arc<FockBasis>, codomain: Arc<FockBasis>, r: usize) -> Self {
        let data = CMatrix::zeros(codomain.dim() * r, domain.dim() * r);
        BlockMatrix { domain, codomain, r, data, bandwidth: 0 }
    }

    pub fn identity(basis: Arc<FockBasis>, r: usize) -> Self {
        let d = basis.dim() * r;
        BlockMatrix { domain: basis.clone(), codomain: basis, r, data: CMatrix::identity(d, d), bandwidth: 0 }
    }

    pub fn domain(&self) -> &Arc<FockBasis> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FockBasis> {
        &self.codomain
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dense(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_dense(self) -> CMatrix {
        self.data
    }

    /// Largest `|k − l|` over nonzero blocks `(k, l)`.
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn is_square(&self) -> bool {
        self.domain.degree() == self.codomain.degree()
    }

    pub fn is_block_diagonal(&self) -> bool {
        self.bandwidth == 0
    }

    pub(crate) fn row_range(&self, k: usize) -> std::ops::Range<usize> {
        let r = self.codomain.block_range(k);
        r.start * self.r..r.end * self.r
    }

    pub(crate) fn col_range(&self, l: usize) -> std::ops::Range<usize> {
        let r = self.domain.block_range(l);
        r.start * self.r..r.end * self.r
    }

    /// Block mapping domain degree `l` into codomain degree `k`.
    pub fn block(&self, k: usize, l: usize) -> CMatrix {
        let rows = self.row_range(k);
        let cols = self.col_range(l);
        self.data.view((rows.start, cols.start), (rows.len(), cols.len())).into_owned()
    }

    fn block_is_zero(&self, k: usize, l: usize) -> bool {
        let rows = self.row_range(k);
        let cols = self.col_range(l);
        self.data
            .view((rows.start, cols.start), (rows.len(), cols.len()))
            .iter()
            .all(|z| *z == Complex64::new(0.0, 0.0))
    }

    fn measure_bandwidth(&self) -> usize {
        let mut band = 0;
        for k in 0..=self.codomain.degree() {
            for l in 0..=self.domain.degree() {
                let d = k.abs_diff(l);
                if d > band && !self.block_is_zero(k, l) {
                    band = d;
                }
            }
        }
        band
    }

    /// Operator norm of block `(k, l)`.
    pub fn block_norm(&self, k: usize, l: usize) -> f64 {
        crate::singular_extremes(&self.block(k, l)).1
    }

    /// Square compression `e_N · M · e_N`.
    pub fn compress(&self, degree: usize) -> Result<BlockMatrix> {
        if degree > self.domain.degree() || degree > self.codomain.degree() {
            return Err(Error::InvalidArgument(format!(
                "cannot compress to degree {degree}: matrix maps degree {} into {}",
                self.domain.degree(),
                self.codomain.degree()
            )));
        }
        let basis = if self.domain.degree() == degree {
            self.domain.clone()
        } else if self.codomain.degree() == degree {
            self.codomain.clone()
        } else {
            FockBasis::new(self.domain.n(), degree)?
        };
        let d = basis.dim() * self.r;
        let data = self.data.view((0, 0), (d, d)).into_owned();
        let mut m = BlockMatrix { domain: basis.clone(), codomain: basis, r: self.r, data, bandwidth: 0 };
        m.bandwidth = self.bandwidth.min(m.measure_bandwidth());
        Ok(m)
    }

    /// Composition `self ∘ other`.
    pub fn mul(&self, other: &BlockMatrix) -> Result<BlockMatrix> {
        if self.r != other.r || self.domain.degree() != other.codomain.degree() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose: left domain degree {} (r = {}), right codomain degree {} (r = {})",
                self.domain.degree(),
                self.r,
                other.codomain.degree(),
                other.r
            )));
        }
        BlockMatrix::from_dense(other.domain.clone(), self.codomain.clone(), self.r, &self.data * &other.data)
    }

    pub fn add(&self, other: &BlockMatrix) -> Result<BlockMatrix> {
        if self.r != other.r
            || self.domain.degree() != other.domain.degree()
            || self.codomain.degree() != other.codomain.degree()
        {
            return Err(Error::DimensionMismatch("block matrices have different shapes".into()));
        }
        BlockMatrix::from_dense(self.domain.clone(), self.codomain.clone(), self.r, &self.data + &other.data)
    }

    pub fn scale(&self, c: Complex64) -> BlockMatrix {
        BlockMatrix { data: &self.data * c, ..self.clone() }
    }

    pub fn adjoint(&self) -> BlockMatrix {
        BlockMatrix {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            r: self.r,
            data: self.data.adjoint(),
            bandwidth: self.bandwidth,
        }
    }

    /// Sub-matrix with rows restricted to codomain degrees `≤ rows_degree`.
    pub fn restrict_rows(&self, rows_degree: usize) -> Result<BlockMatrix> {
        if rows_degree > self.codomain.degree() {
            return Err(Error::InvalidArgument("row degree exceeds codomain".into()));
        }
        let basis = FockBasis::new(self.codomain.n(), rows_degree)?;
        let data = self.data.view((0, 0), (basis.dim() * self.r, self.data.ncols())).into_owned();
        BlockMatrix::from_dense(self.domain.clone(), basis, self.r, data)
    }

    pub fn max_abs_diff(&self, other: &BlockMatrix) -> f64 {
        if self.data.shape() != other.data.shape() {
            return f64::INFINITY;
        }
        crate::max_abs(&(&self.data - &other.data))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_block_diagonal() {
        let b = FockBasis::new(2, 3).unwrap();
        let id = BlockMatrix::identity(b.clone(), 2);
        assert_eq!(id.bandwidth(), 0);
        assert_eq!(id.block(1, 1), CMatrix::identity(4, 4));
        assert_eq!(id.block(1, 2).nrows(), 4);
        assert_eq!(id.block(1, 2).ncols(), 6);
        assert_eq!(id.compress(1).unwrap().dense().nrows(), 6);
    }

    #[test]
    fn bandwidth_is_measured() {
        let b = FockBasis::new(1, 4).unwrap();
        let mut d = CMatrix::identity(5, 5);
        d[(3, 1)] = Complex64::new(1.0, 0.0);
        let m = BlockMatrix::from_dense(b.clone(), b, 1, d).unwrap();
        assert_eq!(m.bandwidth(), 2);
        assert!(!m.is_block_diagonal());
        assert_eq!(m.compress(2).unwrap().bandwidth(), 0);
    }

    #[test]
    fn shape_errors() {
        let b = FockBasis::new(1, 2).unwrap();
        let c = FockBasis::new(1, 3).unwrap();
        assert!(BlockMatrix::from_dense(b.clone(), b.clone(), 1, CMatrix::zeros(2, 2)).is_err());
        let x = BlockMatrix::identity(b.clone(), 1);
        let y = BlockMatrix::identity(c, 1);
        assert!(x.mul(&y).is_err());
        assert!(x.compress(3).is_err());
    }
}

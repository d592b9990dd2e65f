use std::collections::HashMap;
use std::sync::Arc;

use crate::{Error, Result};

/// Orthonormal basis `e_α = z^α/√(α!)` of `V^N = ⊕_{k≤N} Sym^k ℂ^n`.
///
/// Multi-indices are grouped by degree `k = |α|`; inside a degree they are in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    n: usize,
    degree: usize,
    indices: Vec<Vec<u32>>,
    offsets: Vec<usize>,
    lookup: HashMap<Vec<u32>, usize>,
}

impl FockBasis {
    pub fn new(n: usize, degree: usize) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        let mut indices = Vec::new();
        let mut offsets = vec![0];
        for k in 0..=degree {
            compositions(n, k as u32, &mut indices);
            offsets.push(indices.len());
        }
        let lookup = indices.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        Ok(Arc::new(FockBasis { n, degree, indices, offsets, lookup }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Truncation degree `N`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// `dim Sym^k ℂ^n = C(k+n−1, n−1)`.
    pub fn block_dim(&self, k: usize) -> usize {
        self.offsets[k + 1] - self.offsets[k]
    }

    pub fn block_range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn multi_index(&self, i: usize) -> &[u32] {
        &self.indices[i]
    }

    pub fn index_of(&self, alpha: &[u32]) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.indices[i].iter().sum::<u32>() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.indices.iter().map(Vec::as_slice)
    }
}

/// Appends all α ∈ ℕ^n with |α| = k in lexicographic order.
fn compositions(n: usize, k: u32, out: &mut Vec<Vec<u32>>) {
    fn rec(prefix: &mut Vec<u32>, n: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n - 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in 0..=left {
            prefix.push(a);
            rec(prefix, n, left - a, out);
            prefix.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), n, k, out);
}

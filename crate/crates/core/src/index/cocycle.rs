use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fock::{build_a, default_margin, FockBasis, ModelOperator, DEFAULT_EPS, DEFAULT_TOL};
use crate::mesh::{FormField, Mesh};
use crate::{CMatrix, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CocycleOptions {
    /// Conditioning threshold for inverting `π(P^op)`.
    pub eps: f64,
    /// Margin-stabilization tolerance for `a(P)`.
    pub tol: f64,
    /// Defaults to `max(4, 2·order)`.
    pub margin: Option<usize>,
    /// Nodes where `σ_min(a) <` this are reported as degenerate.
    pub sigma_threshold: f64,
    /// Upper bound for the norm-continuity proxy `max ‖a(x+h) − a(x)‖_F / h`.
    pub continuity_bound: f64,
}

impl Default for CocycleOptions {
    fn default() -> Self {
        CocycleOptions {
            eps: DEFAULT_EPS,
            tol: DEFAULT_TOL,
            margin: None,
            sigma_threshold: 1e-8,
            continuity_bound: 1e3,
        }
    }
}

type Blocks = BTreeMap<(usize, usize), CMatrix>;

/// A group of Fock degrees coupled by some off-diagonal block somewhere on the mesh.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockComponent {
    pub degrees: Vec<usize>,
    /// Matrix size `Σ_k dim(degree k)·r`.
    pub rank: usize,
    /// The component equals the identity at every node.
    pub identity: bool,
}

/// `a(P)` compressed to `V^N ⊗ ℂ^r` at every mesh node, stored blockwise by Fock degree.
#[derive(Debug, Clone)]
pub struct CocycleField {
    mesh: Arc<Mesh>,
    basis: Arc<FockBasis>,
    r: usize,
    nodes: Vec<Blocks>,
    sigma_min: Vec<f64>,
    residuals: Vec<f64>,
    continuity: f64,
    components: Vec<BlockComponent>,
}

enum Outcome {
    Ok { blocks: Blocks, sigma: f64, residual: f64, stable: bool },
    Degenerate,
}

fn node_outcome(model: &ModelOperator, degree: usize, opts: &CocycleOptions) -> Result<Outcome> {
    let margin = opts.margin.unwrap_or_else(|| default_margin(model.order()));
    let a = match build_a(model, degree, margin, opts.eps, opts.tol) {
        Ok(a) => a,
        Err(Error::Degenerate(_)) => return Ok(Outcome::Degenerate),
        Err(e) => return Err(e),
    };
    let m = &a.matrix;
    let sigma = if m.is_block_diagonal() {
        (0..=degree).map(|k| crate::singular_extremes(&m.block(k, k)).0).fold(f64::INFINITY, f64::min)
    } else {
        crate::singular_extremes(m.dense()).0
    };
    if !(sigma >= opts.sigma_threshold) {
        return Ok(Outcome::Degenerate);
    }
    let mut blocks = Blocks::new();
    for k in 0..=degree {
        for l in 0..=degree {
            if (k == l || m.bandwidth() > 0) && m.block_norm(k, l) > 0.0 {
                blocks.insert((k, l), m.block(k, l));
            }
        }
    }
    Ok(Outcome::Ok { blocks, sigma, residual: a.residual, stable: a.stable })
}

/// Builds `a(P_x)` at every node on `V^degree`.
///
/// Fails with the full node lists when some model is degenerate or `a` does not
/// stabilize under a margin increase, and when the field is not norm-continuous.
pub fn build_cocycle(models: &[ModelOperator], mesh: &Arc<Mesh>, degree: usize, opts: &CocycleOptions) -> Result<CocycleField> {
    if models.len() != mesh.len() {
        return Err(Error::DimensionMismatch(format!("{} models for {} nodes", models.len(), mesh.len())));
    }
    let Some(first) = models.first() else {
        return Err(Error::InvalidArgument("empty model family".into()));
    };
    let (n, r) = (first.n(), first.r());
    if models.iter().any(|m| m.n() != n || m.r() != r) {
        return Err(Error::DimensionMismatch("model family mixes different (n, r)".into()));
    }
    let basis = FockBasis::new(n, degree)?;

    let outcomes: Vec<Result<Outcome>> = models.par_iter().map(|m| node_outcome(m, degree, opts)).collect();
    let mut nodes = Vec::with_capacity(models.len());
    let mut sigma_min = Vec::with_capacity(models.len());
    let mut residuals = Vec::with_capacity(models.len());
    let mut degenerate = Vec::new();
    let mut unstable = Vec::new();
    let mut worst: f64 = 0.0;
    for (node, o) in outcomes.into_iter().enumerate() {
        match o? {
            Outcome::Degenerate => degenerate.push(node),
            Outcome::Ok { blocks, sigma, residual, stable } => {
                if !stable {
                    unstable.push(node);
                    worst = worst.max(residual);
                }
                nodes.push(blocks);
                sigma_min.push(sigma);
                residuals.push(residual);
            }
        }
    }
    if !degenerate.is_empty() {
        return Err(Error::DegenerateNodes { nodes: degenerate });
    }
    if !unstable.is_empty() {
        return Err(Error::NotStabilized { nodes: unstable, worst });
    }

    let mut field = CocycleField {
        mesh: mesh.clone(),
        basis,
        r,
        nodes,
        sigma_min,
        residuals,
        continuity: 0.0,
        components: Vec::new(),
    };
    field.continuity = field.continuity_proxy();
    if !(field.continuity <= opts.continuity_bound) {
        return Err(Error::Discontinuous(field.continuity));
    }
    field.components = field.find_components();
    Ok(field)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl CocycleField {
    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Matrix size of `a` at one node.
    pub fn dim(&self) -> usize {
        self.basis.dim() * self.r
    }

    pub fn sigma_min(&self) -> &[f64] {
        &self.sigma_min
    }

    pub fn min_sigma(&self) -> f64 {
        self.sigma_min.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    /// `max ‖a(x + h e_i) − a(x)‖_F / h_i` over nodes and axes.
    pub fn continuity(&self) -> f64 {
        self.continuity
    }

    pub fn components(&self) -> &[BlockComponent] {
        &self.components
    }

    /// The degree block `(k, l)` at a node (zero if not stored).
    pub fn block(&self, node: usize, k: usize, l: usize) -> CMatrix {
        self.nodes[node].get(&(k, l)).cloned().unwrap_or_else(|| {
            CMatrix::zeros(self.basis.block_dim(k) * self.r, self.basis.block_dim(l) * self.r)
        })
    }

    /// Dense `a` at one node.
    pub fn matrix(&self, node: usize) -> CMatrix {
        let all: Vec<usize> = (0..=self.degree()).collect();
        self.assemble(node, &all)
    }

    fn assemble(&self, node: usize, degrees: &[usize]) -> CMatrix {
        let r = self.r;
        let offsets: Vec<usize> = degrees
            .iter()
            .scan(0, |acc, &k| {
                let o = *acc;
                *acc += self.basis.block_dim(k) * r;
                Some(o)
            })
            .collect();
        let size: usize = degrees.iter().map(|&k| self.basis.block_dim(k) * r).sum();
        let mut m = CMatrix::zeros(size, size);
        for (ik, &k) in degrees.iter().enumerate() {
            for (il, &l) in degrees.iter().enumerate() {
                if let Some(b) = self.nodes[node].get(&(k, l)) {
                    m.view_mut((offsets[ik], offsets[il]), (b.nrows(), b.ncols())).copy_from(b);
                }
            }
        }
        m
    }

    /// Matrix-valued 0-form of one block component.
    pub fn component_field(&self, comp: &BlockComponent) -> Result<FormField> {
        let mats: Vec<CMatrix> = (0..self.mesh.len()).into_par_iter().map(|n| self.assemble(n, &comp.degrees)).collect();
        FormField::from_matrices(self.mesh.clone(), comp.rank, &mats)
    }

    fn continuity_proxy(&self) -> f64 {
        let mesh = &self.mesh;
        let h = mesh.spacing();
        (0..mesh.len())
            .into_par_iter()
            .map(|node| {
                let mut worst: f64 = 0.0;
                for axis in 0..3 {
                    let Some(nb) = mesh.neighbor(node, axis, true) else { continue };
                    let (a, b) = (&self.nodes[node], &self.nodes[nb]);
                    let mut sq = 0.0;
                    for (key, x) in a {
                        sq += match b.get(key) {
                            Some(y) => (x - y).norm_squared(),
                            None => x.norm_squared(),
                        };
                    }
                    for (key, y) in b {
                        if !a.contains_key(key) {
                            sq += y.norm_squared();
                        }
                    }
                    worst = worst.max(sq.sqrt() / h[axis]);
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }

    fn find_components(&self) -> Vec<BlockComponent> {
        let top = self.degree();
        let mut parent: Vec<usize> = (0..=top).collect();
        for blocks in &self.nodes {
            for &(k, l) in blocks.keys() {
                if k != l {
                    let (a, b) = (find(&mut parent, k), find(&mut parent, l));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for k in 0..=top {
            let root = find(&mut parent, k);
            groups.entry(root).or_default().push(k);
        }
        groups
            .into_values()
            .map(|degrees| {
                let rank = degrees.iter().map(|&k| self.basis.block_dim(k) * self.r).sum();
                let identity = (0..self.mesh.len()).all(|node| {
                    let m = self.assemble(node, &degrees);
                    crate::max_abs(&(m - CMatrix::identity(rank, rank))) == 0.0
                });
                BlockComponent { degrees, rank, identity }
            })
            .collect()
    }
}

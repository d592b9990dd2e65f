use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::Mesh;
use crate::{CMatrix, Error, Result};

const SETS0: &[&[usize]] = &[&[]];
const SETS1: &[&[usize]] = &[&[0], &[1], &[2]];
const SETS2: &[&[usize]] = &[&[0, 1], &[0, 2], &[1, 2]];
const SETS3: &[&[usize]] = &[&[0, 1, 2]];

/// Increasing coordinate index sets labelling the components of a `p`-form.
pub fn component_sets(degree: usize) -> &'static [&'static [usize]] {
    match degree {
        0 => SETS0,
        1 => SETS1,
        2 => SETS2,
        3 => SETS3,
        _ => &[],
    }
}

fn component_index(degree: usize, set: &[usize]) -> usize {
    component_sets(degree)
        .iter()
        .position(|s| *s == set)
        .expect("valid component set")
}

/// Sign of the permutation sorting the concatenation `I ++ J`, or `None` if they overlap.
fn shuffle_sign(i: &[usize], j: &[usize]) -> Option<(f64, Vec<usize>)> {
    let mut inversions = 0;
    for &a in i {
        for &b in j {
            if a == b {
                return None;
            }
            if a > b {
                inversions += 1;
            }
        }
    }
    let mut k: Vec<usize> = i.iter().chain(j).copied().collect();
    k.sort_unstable();
    Some((if inversions % 2 == 0 { 1.0 } else { -1.0 }, k))
}

/// An `r×r` matrix-valued differential form of degree `0..=3` sampled at mesh nodes.
///
/// Storage is node-major, then component, then the matrix in row-major order.
#[derive(Debug, Clone)]
pub struct FormField {
    mesh: Arc<Mesh>,
    degree: usize,
    r: usize,
    data: Vec<Complex64>,
}

impl FormField {
    fn check_degree(degree: usize) -> Result<()> {
        if degree > 3 {
            return Err(Error::Degree(format!("degree {degree} exceeds the dimension 3")));
        }
        Ok(())
    }

    pub fn zeros(mesh: Arc<Mesh>, degree: usize, r: usize) -> Result<Self> {
        Self::check_degree(degree)?;
        let len = mesh.len() * component_sets(degree).len() * r * r;
        Ok(FormField { mesh, degree, r, data: vec![Complex64::new(0.0, 0.0); len] })
    }

    pub fn from_data(mesh: Arc<Mesh>, degree: usize, r: usize, data: Vec<Complex64>) -> Result<Self> {
        Self::check_degree(degree)?;
        let len = mesh.len() * component_sets(degree).len() * r * r;
        if data.len() != len {
            return Err(Error::DimensionMismatch(format!("form data has {} entries, expected {len}", data.len())));
        }
        Ok(FormField { mesh, degree, r, data })
    }

    /// Builds a form from a per-node function returning one matrix per component.
    pub fn from_fn<F>(mesh: Arc<Mesh>, degree: usize, r: usize, f: F) -> Result<Self>
    where
        F: Fn([f64; 3]) -> Vec<CMatrix> + Sync,
    {
        Self::check_degree(degree)?;
        let ncomp = component_sets(degree).len();
        let chunks: Vec<Result<Vec<Complex64>>> = (0..mesh.len())
            .into_par_iter()
            .map(|node| {
                let mats = f(mesh.coords(node));
                if mats.len() != ncomp {
                    return Err(Error::DimensionMismatch(format!(
                        "{} components supplied for a {degree}-form",
                        mats.len()
                    )));
                }
                let mut out = Vec::with_capacity(ncomp * r * r);
                for m in &mats {
                    if m.nrows() != r || m.ncols() != r {
                        return Err(Error::DimensionMismatch(format!(
                            "component is {}×{}, expected {r}×{r}",
                            m.nrows(),
                            m.ncols()
                        )));
                    }
                    for i in 0..r {
                        for j in 0..r {
                            out.push(m[(i, j)]);
                        }
                    }
                }
                Ok(out)
            })
            .collect();
        let mut data = Vec::with_capacity(mesh.len() * ncomp * r * r);
        for c in chunks {
            data.extend(c?);
        }
        Ok(FormField { mesh, degree, r, data })
    }

    /// Scalar 0-form from a function of the node coordinates.
    pub fn scalar_function<F>(mesh: Arc<Mesh>, f: F) -> Self
    where
        F: Fn([f64; 3]) -> Complex64 + Sync,
    {
        let data = (0..mesh.len()).into_par_iter().map(|n| f(mesh.coords(n))).collect();
        FormField { mesh, degree: 0, r: 1, data }
    }

    /// Scalar form with one coefficient per component.
    pub fn scalar_form<F>(mesh: Arc<Mesh>, degree: usize, f: F) -> Result<Self>
    where
        F: Fn([f64; 3]) -> Vec<Complex64> + Sync,
    {
        Self::from_fn(mesh, degree, 1, |x| f(x).into_iter().map(|z| CMatrix::from_element(1, 1, z)).collect())
    }

    /// Matrix-valued 0-form from per-node matrices.
    pub fn from_matrices(mesh: Arc<Mesh>, r: usize, mats: &[CMatrix]) -> Result<Self> {
        if mats.len() != mesh.len() {
            return Err(Error::DimensionMismatch(format!("{} matrices for {} nodes", mats.len(), mesh.len())));
        }
        let mut data = Vec::with_capacity(mesh.len() * r * r);
        for m in mats {
            if m.nrows() != r || m.ncols() != r {
                return Err(Error::DimensionMismatch(format!("matrix is {}×{}, expected {r}×{r}", m.nrows(), m.ncols())));
            }
            for i in 0..r {
                for j in 0..r {
                    data.push(m[(i, j)]);
                }
            }
        }
        Ok(FormField { mesh, degree: 0, r, data })
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    fn ncomp(&self) -> usize {
        component_sets(self.degree).len()
    }

    fn stride(&self) -> usize {
        self.ncomp() * self.r * self.r
    }

    fn offset(&self, node: usize, comp: usize) -> usize {
        (node * self.ncomp() + comp) * self.r * self.r
    }

    /// Component matrix at a node.
    pub fn get(&self, node: usize, comp: usize) -> CMatrix {
        let o = self.offset(node, comp);
        CMatrix::from_row_slice(self.r, self.r, &self.data[o..o + self.r * self.r])
    }

    /// Scalar coefficient at a node (`r = 1`).
    pub fn value(&self, node: usize, comp: usize) -> Complex64 {
        self.data[self.offset(node, comp)]
    }

    fn same_layout(&self, other: &FormField) -> Result<()> {
        if !Arc::ptr_eq(&self.mesh, &other.mesh) && (self.mesh.kind() != other.mesh.kind() || self.mesh.res() != other.mesh.res()) {
            return Err(Error::DimensionMismatch("forms live on different meshes".into()));
        }
        if self.degree != other.degree || self.r != other.r {
            return Err(Error::DimensionMismatch(format!(
                "form layouts differ: degree {} rank {} vs degree {} rank {}",
                self.degree, self.r, other.degree, other.r
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FormField) -> Result<FormField> {
        self.same_layout(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(FormField { data, ..self.clone_empty() })
    }

    pub fn sub(&self, other: &FormField) -> Result<FormField> {
        self.same_layout(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(FormField { data, ..self.clone_empty() })
    }

    pub fn scale(&self, c: Complex64) -> FormField {
        FormField { data: self.data.iter().map(|z| z * c).collect(), ..self.clone_empty() }
    }

    fn clone_empty(&self) -> FormField {
        FormField { mesh: self.mesh.clone(), degree: self.degree, r: self.r, data: Vec::new() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Derivative of every stored entry along `axis`: centred differences,
    /// second-order one-sided stencils at non-periodic edges.
    fn partial(&self, axis: usize) -> Vec<Complex64> {
        let mesh = &self.mesh;
        let res = mesh.res();
        let h = mesh.spacing()[axis];
        let periodic = mesh.periodic()[axis];
        let stride = self.stride();
        let step = match axis {
            0 => res * res,
            1 => res,
            _ => 1,
        } as isize;
        let mut out = vec![Complex64::new(0.0, 0.0); self.data.len()];
        out.par_chunks_mut(stride).enumerate().for_each(|(node, dst)| {
            let i = mesh.indices(node)[axis];
            let at = |di: isize| -> &[Complex64] {
                let mut j = i as isize + di;
                if periodic {
                    j = j.rem_euclid(res as isize);
                }
                let nb = (node as isize + (j - i as isize) * step) as usize;
                &self.data[nb * stride..(nb + 1) * stride]
            };
            if periodic || (i > 0 && i + 1 < res) {
                let (p, m) = (at(1), at(-1));
                for e in 0..stride {
                    dst[e] = (p[e] - m[e]) / (2.0 * h);
                }
            } else if i == 0 {
                let (f0, f1, f2) = (at(0), at(1), at(2));
                for e in 0..stride {
                    dst[e] = (-3.0 * f0[e] + 4.0 * f1[e] - f2[e]) / (2.0 * h);
                }
            } else {
                let (f0, f1, f2) = (at(0), at(-1), at(-2));
                for e in 0..stride {
                    dst[e] = (3.0 * f0[e] - 4.0 * f1[e] + f2[e]) / (2.0 * h);
                }
            }
        });
        out
    }

    /// Finite-difference exterior derivative `dω = Σ_a dx_a ∧ ∂_a ω`.
    pub fn exterior_d(&self) -> Result<FormField> {
        if self.degree == 3 {
            return FormField::zeros(self.mesh.clone(), 3, self.r);
        }
        let mut out = FormField::zeros(self.mesh.clone(), self.degree + 1, self.r)?;
        let rr = self.r * self.r;
        let in_sets = component_sets(self.degree);
        let (in_nc, out_nc) = (in_sets.len(), out.ncomp());
        for axis in 0..3 {
            let der = self.partial(axis);
            for (ci, set) in in_sets.iter().enumerate() {
                let Some((sign, k)) = shuffle_sign(&[axis], set) else { continue };
                let co = component_index(self.degree + 1, &k);
                out.data.par_chunks_mut(out_nc * rr).enumerate().for_each(|(node, dst)| {
                    let src = &der[(node * in_nc + ci) * rr..(node * in_nc + ci + 1) * rr];
                    for e in 0..rr {
                        dst[co * rr + e] += sign * src[e];
                    }
                });
            }
        }
        Ok(out)
    }

    /// Pointwise wedge product with matrix multiplication of the coefficients.
    pub fn wedge(&self, other: &FormField) -> Result<FormField> {
        if self.r != other.r {
            return Err(Error::DimensionMismatch(format!("ranks {} and {} differ", self.r, other.r)));
        }
        if self.mesh.len() != other.mesh.len() {
            return Err(Error::DimensionMismatch("forms live on different meshes".into()));
        }
        let degree = self.degree + other.degree;
        if degree > 3 {
            return Err(Error::Degree(format!("wedge of degrees {} and {} exceeds 3", self.degree, other.degree)));
        }
        let r = self.r;
        let rr = r * r;
        let mut terms = Vec::new();
        for (ci, i) in component_sets(self.degree).iter().enumerate() {
            for (cj, j) in component_sets(other.degree).iter().enumerate() {
                if let Some((sign, k)) = shuffle_sign(i, j) {
                    terms.push((ci, cj, component_index(degree, &k), sign));
                }
            }
        }
        let mut out = FormField::zeros(self.mesh.clone(), degree, r)?;
        let (sa, sb, so) = (self.stride(), other.stride(), out.stride());
        out.data.par_chunks_mut(so).enumerate().for_each(|(node, dst)| {
            let a = &self.data[node * sa..(node + 1) * sa];
            let b = &other.data[node * sb..(node + 1) * sb];
            for &(ci, cj, ck, sign) in &terms {
                let (ma, mb) = (&a[ci * rr..(ci + 1) * rr], &b[cj * rr..(cj + 1) * rr]);
                let d = &mut dst[ck * rr..(ck + 1) * rr];
                for p in 0..r {
                    for q in 0..r {
                        let mut s = Complex64::new(0.0, 0.0);
                        for t in 0..r {
                            s += ma[p * r + t] * mb[t * r + q];
                        }
                        d[p * r + q] += sign * s;
                    }
                }
            }
        });
        Ok(out)
    }

    /// Pointwise matrix product where one factor is a 0-form.
    pub fn mat_mul_pointwise(&self, other: &FormField) -> Result<FormField> {
        if self.degree != 0 && other.degree != 0 {
            return Err(Error::Degree("pointwise matrix product needs a 0-form factor".into()));
        }
        self.wedge(other)
    }

    /// Pointwise inverse of a matrix-valued 0-form.
    pub fn inverse_pointwise(&self) -> Result<FormField> {
        if self.degree != 0 {
            return Err(Error::Degree("only 0-forms can be inverted pointwise".into()));
        }
        const MAX_COND: f64 = 1e12;
        let r = self.r;
        let inverses: Vec<Result<CMatrix>> = (0..self.mesh.len())
            .into_par_iter()
            .map(|node| {
                let m = self.get(node, 0);
                let (smin, smax) = crate::singular_extremes(&m);
                let cond = if smin == 0.0 { f64::INFINITY } else { smax / smin };
                if cond > MAX_COND {
                    return Err(Error::SingularNode { node, cond });
                }
                m.try_inverse().ok_or(Error::SingularNode { node, cond })
            })
            .collect();
        let mats = inverses.into_iter().collect::<Result<Vec<_>>>()?;
        FormField::from_matrices(self.mesh.clone(), r, &mats)
    }

    /// Pointwise trace, giving a scalar form of the same degree.
    pub fn trace_pointwise(&self) -> FormField {
        let r = self.r;
        let data = self
            .data
            .chunks(r * r)
            .map(|m| (0..r).map(|i| m[i * r + i]).sum())
            .collect();
        FormField { mesh: self.mesh.clone(), degree: self.degree, r: 1, data }
    }

    /// Integral of a scalar top-degree form.
    pub fn integrate(&self) -> Result<Complex64> {
        if self.degree != 3 || self.r != 1 {
            return Err(Error::Degree(format!(
                "only scalar 3-forms can be integrated (got degree {}, rank {})",
                self.degree, self.r
            )));
        }
        let cell = self.mesh.cell_measure();
        Ok(self.data.iter().sum::<Complex64>() * cell)
    }

    /// `(1/2π) Σ arg det(a_i⁻¹ a_{i+1})` along the closed coordinate loop through `base`.
    ///
    /// Exact for any loop whose consecutive samples stay within a quarter turn.
    pub fn loop_winding(&self, base: usize, axis: usize) -> Result<f64> {
        if self.degree != 0 {
            return Err(Error::Degree("winding needs a matrix-valued 0-form".into()));
        }
        let nodes = self.mesh.loop_nodes(base, axis)?;
        let mut total = 0.0;
        for (k, &node) in nodes.iter().enumerate() {
            let next = nodes[(k + 1) % nodes.len()];
            let a = self.get(node, 0);
            let b = self.get(next, 0);
            let inv = a.try_inverse().ok_or(Error::SingularNode { node, cond: f64::INFINITY })?;
            total += (inv * b).determinant().arg();
        }
        Ok(total / (2.0 * std::f64::consts::PI))
    }

    /// CSV dump: one row per node and component with coordinates and entries.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let names = self.mesh.coordinate_names();
        write!(w, "node,{},{},{},component", names[0], names[1], names[2])?;
        for i in 0..self.r {
            for j in 0..self.r {
                write!(w, ",re_{i}{j},im_{i}{j}")?;
            }
        }
        writeln!(w)?;
        let sets = component_sets(self.degree);
        for node in 0..self.mesh.len() {
            let x = self.mesh.coords(node);
            for (c, set) in sets.iter().enumerate() {
                let label: String = if set.is_empty() {
                    "1".into()
                } else {
                    set.iter().map(|a| format!("d{}", names[*a])).collect::<Vec<_>>().join("^")
                };
                write!(w, "{node},{:.12},{:.12},{:.12},{label}", x[0], x[1], x[2])?;
                let o = self.offset(node, c);
                for z in &self.data[o..o + self.r * self.r] {
                    write!(w, ",{:.12e},{:.12e}", z.re, z.im)?;
                }
                writeln!(w)?;
            }
        }
        Ok(())
    }
}

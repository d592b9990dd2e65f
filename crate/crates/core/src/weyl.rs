//! Polynomial Weyl symbols on `V*_+ ≅ ℝ^{2n}` and the sharp (Moyal) product.
//!
//! `f # g = Σ_k (1/k!) (i/2)^k Π^k(f, g)` with
//! `Π(f, g) = Σ_{a,b} (ω⁻¹)_{ab} ∂_a f ∂_b g`, normalized so that `1 # f = f`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::{Error, Result, I};

/// Symplectic form on `ℝ^{2n}` with its cached inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct Symplectic {
    omega: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

impl Symplectic {
    /// `ω = [[0, I], [−I, 0]]`.
    pub fn standard(n: usize) -> Self {
        let mut omega = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            omega[(j, n + j)] = 1.0;
            omega[(n + j, j)] = -1.0;
        }
        Self::new(omega).expect("standard form is symplectic")
    }

    pub fn new(omega: DMatrix<f64>) -> Result<Self> {
        let dim = omega.nrows();
        if dim != omega.ncols() || !dim.is_multiple_of(2) || dim == 0 {
            return Err(Error::Shape(format!("ω must be square of even size, got {}×{}", dim, omega.ncols())));
        }
        if (&omega + omega.transpose()).amax() > 1e-12 {
            return Err(Error::InvalidArgument("ω must be antisymmetric".into()));
        }
        let inverse = omega
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("ω must be invertible".into()))?;
        Ok(Symplectic { omega, inverse })
    }

    pub fn dim(&self) -> usize {
        self.omega.nrows()
    }

    pub fn omega(&self) -> &DMatrix<f64> {
        &self.omega
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }
}

/// Polynomial in `2n` real variables with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl WeylPoly {
    pub fn zero(n: usize) -> Self {
        WeylPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; 2 * n], c);
        p
    }

    /// The coordinate function `ξ_a` (0-based).
    pub fn coordinate(n: usize, a: usize) -> Result<Self> {
        if a >= 2 * n {
            return Err(Error::InvalidArgument(format!("coordinate {a} out of range for 2n = {}", 2 * n)));
        }
        let mut e = vec![0; 2 * n];
        e[a] = 1;
        let mut p = Self::zero(n);
        p.add_term(e, Complex64::new(1.0, 0.0));
        Ok(p)
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, Complex64)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            if e.len() != 2 * n {
                return Err(Error::DimensionMismatch(format!("exponent has length {}, expected {}", e.len(), 2 * n)));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if c != Complex64::new(0.0, 0.0) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Complex64::new(0.0, 0.0) {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &WeylPoly) -> WeylPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &WeylPoly) -> WeylPoly {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> WeylPoly {
        let mut out = WeylPoly::zero(self.n);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Pointwise (commutative) product.
    pub fn mul(&self, other: &WeylPoly) -> WeylPoly {
        let mut out = WeylPoly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn derivative(&self, a: usize) -> WeylPoly {
        let mut out = WeylPoly::zero(self.n);
        for (e, c) in &self.terms {
            if e[a] > 0 {
                let mut d = e.clone();
                d[a] -= 1;
                out.add_term(d, c * e[a] as f64);
            }
        }
        out
    }

    /// Homogeneous part of the given total degree.
    pub fn homogeneous_part(&self, degree: u32) -> WeylPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == degree)
            .map(|(e, c)| (e.clone(), *c))
            .collect();
        WeylPoly { n: self.n, terms }
    }

    /// Highest-degree homogeneous part.
    pub fn top_part(&self) -> WeylPoly {
        match self.degree() {
            Some(d) => self.homogeneous_part(d),
            None => self.clone(),
        }
    }

    pub fn evaluate(&self, xi: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(xi).map(|(&k, &x)| x.powi(k as i32)).product::<f64>())
            .sum()
    }

    /// Largest coefficient difference.
    pub fn max_abs_diff(&self, other: &WeylPoly) -> f64 {
        self.sub(other).terms.values().fold(0.0, |acc, c| acc.max(c.norm()))
    }

    /// Random polynomial of total degree ≤ `degree` with coefficients in the unit box.
    pub fn random<R: Rng>(n: usize, degree: u32, rng: &mut R) -> WeylPoly {
        let mut out = WeylPoly::zero(n);
        let mut e = vec![0u32; 2 * n];
        loop {
            if e.iter().sum::<u32>() <= degree {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                out.add_term(e.clone(), c);
            }
            let mut j = 0;
            loop {
                if j == e.len() {
                    return out;
                }
                if e[j] < degree {
                    e[j] += 1;
                    break;
                }
                e[j] = 0;
                j += 1;
            }
        }
    }
}

/// Sharp product `f # g`; finite for polynomials.
pub fn sharp(f: &WeylPoly, g: &WeylPoly, omega: &Symplectic) -> Result<WeylPoly> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch(format!("n = {} vs {}", f.n, g.n)));
    }
    if omega.dim() != 2 * f.n {
        return Err(Error::DimensionMismatch(format!("ω has size {}, expected {}", omega.dim(), 2 * f.n)));
    }
    let dim = omega.dim();
    let pairs: Vec<(usize, usize, f64)> = (0..dim)
        .flat_map(|a| (0..dim).map(move |b| (a, b)))
        .filter_map(|(a, b)| {
            let w = omega.inverse()[(a, b)];
            (w != 0.0).then_some((a, b, w))
        })
        .collect();

    let mut out = f.mul(g);
    // Π^k as a weighted list of derivative pairs
    let mut frontier = vec![(f.clone(), g.clone(), 1.0_f64)];
    let mut k = 0u32;
    loop {
        k += 1;
        let mut next = Vec::new();
        for (df, dg, w) in &frontier {
            for &(a, b, wab) in &pairs {
                let fa = df.derivative(a);
                if fa.is_zero() {
                    continue;
                }
                let gb = dg.derivative(b);
                if gb.is_zero() {
                    continue;
                }
                next.push((fa, gb, w * wab));
            }
        }
        if next.is_empty() {
            return Ok(out);
        }
        let factorial: f64 = (1..=k).map(f64::from).product();
        let prefactor = (I * 0.5).powu(k) / factorial;
        for (df, dg, w) in &next {
            out = out.add(&df.mul(dg).scale(prefactor * *w));
        }
        frontier = next;
    }
}

/// `‖(f#g)#h − f#(g#h)‖ ≤ tol` coefficientwise.
pub fn moyal_associativity_check(f: &WeylPoly, g: &WeylPoly, h: &WeylPoly, omega: &Symplectic, tol: f64) -> Result<bool> {
    for p in [f, g, h] {
        if p.degree().unwrap_or(0) > 6 {
            return Err(Error::InvalidArgument("associativity check is limited to total degree ≤ 6".into()));
        }
    }
    let left = sharp(&sharp(f, g, omega)?, h, omega)?;
    let right = sharp(f, &sharp(g, h, omega)?, omega)?;
    Ok(left.max_abs_diff(&right) <= tol)
}

/// Deterministic sample of the unit sphere `S^{dim−1}` in hyperspherical angles.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    points: Vec<Vec<f64>>,
}

impl SphereGrid {
    /// `res` midpoints per polar angle, `2·res` per azimuth.
    pub fn new(dim: usize, res: usize) -> Result<Self> {
        if dim < 2 || res == 0 {
            return Err(Error::InvalidArgument("sphere grid needs dim ≥ 2 and res ≥ 1".into()));
        }
        let polar: Vec<f64> = (0..res).map(|i| (i as f64 + 0.5) * PI / res as f64).collect();
        let azimuth: Vec<f64> = (0..2 * res).map(|i| (i as f64 + 0.5) * PI / res as f64).collect();
        let mut angle_sets: Vec<Vec<f64>> = vec![vec![]];
        for level in 0..dim - 1 {
            let choices = if level == dim - 2 { &azimuth } else { &polar };
            angle_sets = angle_sets
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |&t| {
                        let mut p = prefix.clone();
                        p.push(t);
                        p
                    })
                })
                .collect();
        }
        let points = angle_sets
            .into_iter()
            .map(|angles| {
                let mut x = vec![0.0; dim];
                let mut s = 1.0;
                for (j, t) in angles.iter().enumerate() {
                    x[j] = s * t.cos();
                    s *= t.sin();
                }
                x[dim - 1] = s;
                x
            })
            .collect();
        Ok(SphereGrid { points })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
}

/// Principal Weyl symbol of a polynomial: the top-degree part evaluated on the
/// unit sphere (i.e. normalized by `|ξ|^deg`).
pub fn principal_weyl(f: &WeylPoly, grid: &SphereGrid) -> Vec<Complex64> {
    let top = f.top_part();
    grid.points().iter().map(|x| top.evaluate(x)).collect()
}

/// Principal symbol of a sampled symbol on `V*_+`: its values at radius `radius`
/// along each grid direction. For an exactly homogeneous degree-0 symbol any
/// radius gives the same result.
pub fn principal_weyl_sampled(f: impl Fn(&[f64]) -> Complex64, grid: &SphereGrid, radius: f64) -> Vec<Complex64> {
    grid.points()
        .iter()
        .map(|x| {
            let y: Vec<f64> = x.iter().map(|v| v * radius).collect();
            f(&y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn xi(n: usize, a: usize) -> WeylPoly {
        WeylPoly::coordinate(n, a).unwrap()
    }

    #[test]
    fn unit_law() {
        let omega = Symplectic::standard(1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let f = WeylPoly::random(1, 3, &mut rng);
        let one = WeylPoly::constant(1, Complex64::new(1.0, 0.0));
        assert!(sharp(&one, &f, &omega).unwrap().max_abs_diff(&f) == 0.0);
        assert!(sharp(&f, &one, &omega).unwrap().max_abs_diff(&f) == 0.0);
    }

    #[test]
    fn coordinate_commutator() {
        let n = 2;
        let omega = Symplectic::standard(n);
        for a in 0..2 * n {
            for b in 0..2 * n {
                let comm = sharp(&xi(n, a), &xi(n, b), &omega)
                    .unwrap()
                    .sub(&sharp(&xi(n, b), &xi(n, a), &omega).unwrap());
                let want = WeylPoly::constant(n, I * omega.inverse()[(a, b)]);
                assert!(comm.max_abs_diff(&want) < 1e-15, "({a}, {b})");
            }
        }
    }

    #[test]
    fn top_degree_is_multiplicative() {
        let omega = Symplectic::standard(1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let f = WeylPoly::random(1, 3, &mut rng);
        let g = WeylPoly::random(1, 2, &mut rng);
        let fg = sharp(&f, &g, &omega).unwrap();
        assert_eq!(fg.degree(), Some(5));
        let want = f.top_part().mul(&g.top_part());
        assert!(fg.top_part().max_abs_diff(&want) == 0.0);
    }

    #[test]
    fn associativity_examples() {
        let omega = Symplectic::standard(1);
        let f = xi(1, 0);
        let g = xi(1, 1);
        let h = f.mul(&g);
        assert!(moyal_associativity_check(&f, &g, &h, &omega, 1e-12).unwrap());
        let c = |x| WeylPoly::constant(1, Complex64::new(x, 0.0));
        assert!(moyal_associativity_check(&c(1.0), &c(2.0), &c(3.0), &omega, 0.0).unwrap());
    }

    #[test]
    fn rejects_bad_omega() {
        assert!(Symplectic::new(DMatrix::identity(2, 2)).is_err());
        assert!(Symplectic::new(DMatrix::zeros(3, 3)).is_err());
        assert!(Symplectic::new(DMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn sphere_grid_is_on_sphere() {
        let grid = SphereGrid::new(4, 6).unwrap();
        assert_eq!(grid.points().len(), 6 * 6 * 12);
        for p in grid.points() {
            let r: f64 = p.iter().map(|x| x * x).sum();
            assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn principal_of_constant() {
        let grid = SphereGrid::new(2, 8).unwrap();
        let c = Complex64::new(2.0, -1.0);
        assert!(principal_weyl(&WeylPoly::constant(1, c), &grid).iter().all(|&v| v == c));
    }
}
